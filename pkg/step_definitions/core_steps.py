"""
Core Step Definitions
BDD step implementations for the core types feature
"""
import itertools

import numpy as np
import pytest
from pytest_bdd import scenarios, given, when, then, parsers

from fixtures.cloud_fixtures import parse_number, parse_rows, record_outcome
from topology.core import Grid, Interval, diameter, distance
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# Load scenarios from feature file
scenarios('../features/core.feature')


# Given Steps

@given(parsers.parse('random lattice cells with seed {seed:d} in dimension {dim:d}'))
def random_lattice_cells(shared_context, seed: int, dim: int):
    """Draw up to 50 distinct integer cells."""
    rng = np.random.default_rng(seed)
    shared_context['cells'] = np.unique(rng.integers(-1000, 1000, size=(50, dim)), axis=0)


# When Steps

@when(parsers.parse('I measure the distance between "{p}" and "{q}"'))
def measure_distance(shared_context, p: str, q: str):
    """Measure the Euclidean distance of two points."""
    logger.info(f"Step: When I measure the distance between {p} and {q}")
    first, second = parse_rows(p)[0], parse_rows(q)[0]
    record_outcome(shared_context, lambda: distance(first, second))


@when('I compute the diameter')
def compute_diameter(shared_context):
    """Compute the diameter of the stored cloud."""
    logger.info("Step: When I compute the diameter")
    record_outcome(shared_context, lambda: diameter(shared_context['cloud']))


@when(parsers.parse('I embed the cells with step {step} and origin "{origin}"'))
def embed_cells(shared_context, step: str, origin: str):
    """Build a grid and embed it into R^N."""
    grid = Grid.from_cells(shared_context['cells'], step=parse_number(step), origin=parse_rows(origin)[0])
    shared_context['grid'] = grid
    shared_context['embedded'] = grid.embed()


@when(parsers.parse('I build a grid from the raw cells "{cells}"'))
def build_raw_grid(shared_context, cells: str):
    """Build a grid without deduplicating its cells."""
    rows = np.asarray(parse_rows(cells), dtype=np.int64)
    record_outcome(shared_context, lambda: Grid(step=1.0, origin=(0.0,) * rows.shape[1], cells=rows))


@when(parsers.parse('I recover cells from the points "{points}" with step {step}'))
def recover_cells(shared_context, points: str, step: str):
    """Map embedded coordinates back to lattice cells."""
    rows = np.asarray(parse_rows(points))
    record_outcome(
        shared_context,
        lambda: Grid.from_points(rows, parse_number(step), (0.0,) * rows.shape[1])
    )


@when(parsers.parse('I build the interval from {birth} to {death}'))
def build_interval(shared_context, birth: str, death: str):
    """Build a single interval."""
    record_outcome(shared_context, lambda: Interval(parse_number(birth), parse_number(death)))


# Then Steps

@then(parsers.parse('the measured value is {expected}'))
def measured_value_is(shared_context, expected: str):
    """Compare the measured value with the expected one."""
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    assert shared_context['result'] == pytest.approx(parse_number(expected), abs=1e-12)


@then('the measured value equals the largest pairwise distance')
def value_is_largest_pair(shared_context):
    """Compare the diameter with an exhaustive scan."""
    points = list(shared_context['cloud'])
    largest = max(distance(p, q) for p, q in itertools.combinations(points, 2))
    assert shared_context['result'] == pytest.approx(largest, abs=1e-12)


@then('every sampled triple satisfies the triangle inequality')
def triangle_inequality(shared_context):
    """Check d(a, c) <= d(a, b) + d(b, c) on random triples."""
    cloud = shared_context['cloud']
    rng = np.random.default_rng(17)
    for a, b, c in rng.integers(0, len(cloud), size=(500, 3)):
        p, q, r = cloud.point(a), cloud.point(b), cloud.point(c)
        assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-12


@then('reading the embedding back gives the same cells')
def embedding_round_trip(shared_context):
    """Reparse embedded coordinates and compare the integers exactly."""
    grid = shared_context['grid']
    recovered = Grid.from_points(shared_context['embedded'], grid.step, grid.origin)
    assert np.array_equal(recovered.cells, grid.cells)


@then('the cloud rows stay in the given order')
def rows_in_order(shared_context):
    """Rows come back exactly as given."""
    assert list(shared_context['cloud']) == [(3.0, 0.0), (1.0, 0.0), (2.0, 0.0)]


@then('the cloud coordinates cannot be modified')
def cloud_read_only(shared_context):
    """The stored array refuses writes while copies stay writable."""
    cloud = shared_context['cloud']
    with pytest.raises(ValueError):
        cloud.points[0, 0] = 9.0
    copy = cloud.to_array()
    copy[0, 0] = 9.0
    assert cloud.point(0) == (3.0, 0.0)
