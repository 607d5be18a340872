"""
Logger Module
Provides centralized logging functionality for the toolkit
"""
import logging
import sys
from datetime import datetime
from typing import Dict
from config.config import config


class Logger:
    """
    Custom Logger class for the toolkit.
    Provides formatted logging with a stderr handler and an optional file handler.
    """

    _loggers: Dict[str, logging.Logger] = {}

    @staticmethod
    def get_logger(name: str = __name__) -> logging.Logger:
        """
        Get or create a logger instance.

        Args:
            name: Logger name (typically __name__ of the calling module)

        Returns:
            Configured logger instance
        """
        if name in Logger._loggers:
            return Logger._loggers[name]

        # Create logger
        logger = logging.getLogger(name)
        logger.setLevel(getattr(logging, config.log_level, logging.INFO))
        logger.propagate = False

        # Prevent duplicate handlers
        if logger.handlers:
            return logger

        # Create formatters
        logging_config = config.get_logging_config()
        formatter = logging.Formatter(logging_config['format'], datefmt=logging_config['datefmt'])

        # Console handler on stderr; stdout carries command results
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, config.log_level, logging.INFO))
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        # File handler
        if config.log_to_file:
            log_dir = config.ensure_reports_dir()
            timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
            log_file = log_dir / f'topology_{timestamp}.log'

            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        # Store logger
        Logger._loggers[name] = logger

        return logger
