"""
Cloud Fixtures Module
Pytest fixtures and parsing helpers for point clouds, grids and diagrams
"""
import math
from pathlib import Path
from typing import Callable, Dict, Any, Optional

import numpy as np
import pytest

from config.config import config
from topology.core import Grid, PersistenceDiagram, PointCloud
from topology.exceptions import TopologyError
from topology.synthetic import random_cloud
from utils.logger import Logger


logger = Logger.get_logger(__name__)


# ============================================================================
# Gherkin value parsers
# ============================================================================

def parse_rows(text: str) -> list:
    """Parse '0,0;1,0' into [[0.0, 0.0], [1.0, 0.0]]; 'empty' gives []."""
    text = text.strip()
    if text in ('', 'empty'):
        return []
    return [[float(value) for value in row.split(',')] for row in text.split(';')]


def parse_cloud(text: str, dim: int = 1) -> PointCloud:
    """Point cloud from the semicolon-separated row notation."""
    return PointCloud.from_array(parse_rows(text), dim=dim)


def parse_cells(text: str, step: float = 1.0, dim: int = 2) -> Grid:
    """Grid from integer cells written in the row notation."""
    rows = [[int(value) for value in row] for row in parse_rows(text)]
    if not rows:
        return Grid(step=step, origin=(0.0,) * dim, cells=np.empty((0, dim), dtype=np.int64))
    return Grid.from_cells(rows, step=step)


def parse_diagram(text: str) -> PersistenceDiagram:
    """Diagram from 'birth,death' rows; 'inf' marks an infinite death."""
    return PersistenceDiagram.from_pairs(parse_rows(text))


def parse_number(text: str) -> float:
    """Parse a float, also accepting 'sqrt(x)' and 'sqrt(x)/y'."""
    text = text.strip()
    if text.startswith('sqrt('):
        inner, _, rest = text[5:].partition(')')
        value = math.sqrt(float(inner))
        return value / float(rest[1:]) if rest.startswith('/') else value
    return float(text)


def record_outcome(context: Dict[str, Any], action: Callable[[], Any]) -> Any:
    """
    Run a When-step action, storing its result or the toolkit error it raised.

    Args:
        context: Scenario shared context
        action: Zero-argument callable

    Returns:
        The result, or None when an error was raised
    """
    try:
        context['result'] = action()
        context['error'] = None
    except TopologyError as error:
        logger.info(f"Step raised {type(error).__name__}: {error}")
        context['result'] = None
        context['error'] = error
    return context['result']


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture(scope='session')
def configurations() -> Callable[[str], Dict[str, Any]]:
    """
    Session-scoped accessor for the named configurations.

    Returns:
        Function mapping a configuration name to its settings
    """
    def get(name: str) -> Dict[str, Any]:
        settings = config.get_configuration(name)
        assert settings, f"Unknown configuration: {name}"
        return settings

    return get


@pytest.fixture(scope='function')
def seeded_cloud() -> Callable[[int, int, int], PointCloud]:
    """
    Factory for reproducible random clouds in the unit cube.

    Returns:
        Function (seed, n_points, dim) -> PointCloud
    """
    def build(seed: int, n_points: int, dim: int) -> PointCloud:
        logger.debug(f"Random cloud seed={seed} n={n_points} N={dim}")
        return random_cloud(seed, n_points, dim)

    return build


@pytest.fixture(scope='function')
def workspace(tmp_path: Path) -> Path:
    """
    Function-scoped directory for files exchanged with the command line.

    Args:
        tmp_path: pytest temporary directory

    Returns:
        Directory path
    """
    directory = tmp_path / 'workspace'
    directory.mkdir()
    return directory


@pytest.fixture(scope='function')
def write_text(workspace: Path) -> Callable[[str, str], Path]:
    """
    Factory writing a text file into the workspace.

    Returns:
        Function (name, content) -> Path
    """
    def write(name: str, content: str, directory: Optional[Path] = None) -> Path:
        path = (directory or workspace) / name
        path.write_text(content, encoding='utf-8')
        return path

    return write
