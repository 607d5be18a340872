"""
Performance Monitoring Utility
Tracks wall time and memory of pipeline stages
"""
import time
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, Iterator, List, Optional

import psutil

from utils.logger import Logger

logger = Logger.get_logger(__name__)


class PerformanceMonitor:
    """Monitor and track per-stage timings and memory during a pipeline run."""

    def __init__(self):
        """Initialize performance monitor."""
        self.stages: List[Dict[str, Any]] = []
        self.start_time: Optional[float] = None
        self._process = psutil.Process()

    def start_monitoring(self) -> None:
        """Start performance monitoring."""
        self.start_time = time.perf_counter()
        logger.info("Performance monitoring started")

    def stop_monitoring(self) -> Dict[str, Any]:
        """
        Stop monitoring and return metrics.

        Returns:
            Dictionary containing total duration, stage records and memory usage
        """
        if self.start_time is None:
            logger.warning("Monitoring was not started")
            return {}

        metrics = {
            'total_duration': round(time.perf_counter() - self.start_time, 3),
            'stages': list(self.stages),
            'memory_usage': self._get_memory_usage(),
            'timestamp': datetime.now().isoformat()
        }
        logger.info(f"Pipeline finished in {metrics['total_duration']}s, rss {metrics['memory_usage']['rss_mb']} MB")
        return metrics

    @contextmanager
    def stage(self, name: str) -> Iterator[Dict[str, Any]]:
        """
        Time one stage; the caller may store an output size in the yielded record.

        Args:
            name: Stage name

        Yields:
            Mutable stage record
        """
        record: Dict[str, Any] = {'stage': name, 'size': None}
        started = time.perf_counter()
        try:
            yield record
        finally:
            record['duration'] = round(time.perf_counter() - started, 3)
            record['rss_mb'] = self._get_memory_usage()['rss_mb']
            self.stages.append(record)
            logger.info(f"Stage {name}: size={record['size']} duration={record['duration']}s")

    def _get_memory_usage(self) -> Dict[str, float]:
        """Get resident memory of this process and system memory use."""
        memory = psutil.virtual_memory()
        return {
            'rss_mb': round(self._process.memory_info().rss / (1024 * 1024), 2),
            'system_percent': memory.percent
        }
