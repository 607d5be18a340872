"""
Step Definitions Conftest
Shared steps and fixtures for all feature files
"""
from typing import Any, Dict

import numpy as np
import pytest
from pytest_bdd import given, then, parsers

from fixtures.cloud_fixtures import parse_cells, parse_cloud
from topology import exceptions
from topology.synthetic import random_grid
from utils.logger import Logger


logger = Logger.get_logger(__name__)


# Shared context for scenarios
@pytest.fixture
def shared_context() -> Dict[str, Any]:
    """
    Shared context dictionary for storing data between steps.

    Returns:
        Empty dictionary for shared context
    """
    return {}


# Given Steps

@given(parsers.parse('the point cloud "{points}"'))
def given_point_cloud(shared_context: Dict[str, Any], points: str):
    """Store a point cloud written as semicolon-separated rows."""
    logger.info(f"Step: Given the point cloud {points}")
    shared_context['cloud'] = parse_cloud(points)


@given(parsers.parse('the grid cells "{cells}"'))
def given_grid_cells(shared_context: Dict[str, Any], cells: str):
    """Store a unit-step grid written as semicolon-separated integer rows."""
    logger.info(f"Step: Given the grid cells {cells}")
    shared_context['grid'] = parse_cells(cells)


@given(parsers.parse('the named configuration "{name}"'))
def given_named_configuration(shared_context: Dict[str, Any], configurations, name: str):
    """Load a named configuration; its points and cells become the cloud and grid."""
    logger.info(f"Step: Given the named configuration {name}")
    settings = configurations(name)
    shared_context['configuration'] = settings
    if 'points' in settings:
        shared_context['cloud'] = parse_cloud(';'.join(','.join(map(str, row)) for row in settings['points']))
    if 'cells' in settings:
        shared_context['grid'] = parse_cells(';'.join(','.join(map(str, row)) for row in settings['cells']))


@given(parsers.parse('a random cloud with seed {seed:d}, {n_points:d} points in dimension {dim:d}'))
def given_random_cloud(shared_context: Dict[str, Any], seeded_cloud, seed: int, n_points: int, dim: int):
    """Store a reproducible random cloud."""
    logger.info(f"Step: Given a random cloud with seed {seed}, {n_points} points in dimension {dim}")
    shared_context['seed'] = seed
    shared_context['cloud'] = seeded_cloud(seed, n_points, dim)


@given(parsers.parse('random lattice cells with seed {seed:d} and at most {max_cells:d} cells'))
def given_random_lattice_set(shared_context: Dict[str, Any], seed: int, max_cells: int):
    """Store a random planar lattice set."""
    logger.info(f"Step: Given random lattice cells with seed {seed} and at most {max_cells} cells")
    shared_context['seed'] = seed
    shared_context['grid'] = random_grid(seed, max_cells)


# Then Steps

@then(parsers.re(r'an? (?P<error_name>\w+) is raised'))
def error_is_raised(shared_context: Dict[str, Any], error_name: str):
    """Verify that the When step failed with the named toolkit error."""
    logger.info(f"Step: Then {error_name} is raised")
    expected = getattr(exceptions, error_name)
    assert isinstance(shared_context.get('error'), expected), \
        f"Expected {error_name}, got {shared_context.get('error')!r}"


@then('no error is raised')
def no_error_is_raised(shared_context: Dict[str, Any]):
    """Verify that the When step succeeded."""
    assert shared_context.get('error') is None, f"Unexpected error: {shared_context.get('error')!r}"


@then(parsers.parse('the result has {count:d} rows'))
def result_has_rows(shared_context: Dict[str, Any], count: int):
    """Verify the size of a cloud or grid result."""
    result = shared_context['result']
    assert len(result) == count, f"Expected {count} rows, got {len(result)}"


@then(parsers.parse('the result rows are "{points}"'))
def result_rows_are(shared_context: Dict[str, Any], points: str):
    """Verify the exact rows of a cloud result, in order."""
    expected = parse_cloud(points).points
    actual = shared_context['result'].points
    assert actual.shape == expected.shape, f"Expected shape {expected.shape}, got {actual.shape}"
    assert np.allclose(actual, expected, rtol=0, atol=1e-12), f"Expected {expected.tolist()}, got {actual.tolist()}"
