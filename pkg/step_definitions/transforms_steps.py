"""
Transforms Step Definitions
BDD step implementations for barycentric enrichment, sparsification,
gridification and the grid transforms
"""
import itertools

import numpy as np
from pytest_bdd import scenarios, given, when, then, parsers

from fixtures.cloud_fixtures import parse_number, parse_rows, record_outcome
from fixtures.oracles import hausdorff_by_pairs
from topology.complexes import vr_skeleton
from topology.core import Grid, PointCloud, distance
from topology.metrics import hausdorff_distance
from topology.synthetic import random_grid
from topology.transforms import (
    barycentric_subdivision,
    complement,
    grid_subdivision,
    gridification,
    gridification_map,
    sparsification,
    thickening,
)
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# Load scenarios from feature file
scenarios('../features/transforms.feature')

GRID_TRANSFORMS = {'subdivision': grid_subdivision, 'thickening': thickening}


def _cell_rows(text: str):
    return [tuple(int(value) for value in row) for row in parse_rows(text)]


def _assert_sparsification_laws(cloud: PointCloud, landmarks: PointCloud, min_dist: float) -> None:
    """Idempotent, pairwise separated, and covering the input within min_dist."""
    assert sparsification(landmarks, min_dist) == landmarks
    kept = landmarks.points
    gaps = np.linalg.norm(kept[:, None, :] - kept[None, :, :], axis=-1)
    assert np.all(gaps[np.triu_indices(len(kept), 1)] > min_dist)
    reach = np.linalg.norm(cloud.points[:, None, :] - kept[None, :, :], axis=-1).min(axis=1)
    assert np.all(reach <= min_dist)


def _assert_residues(cloud: PointCloud, origin, step: float) -> None:
    """x - (z + mu * c) lies in [0, mu) and every cell keeps its smallest source."""
    grid, rows = gridification_map(cloud, step, origin)
    residues = cloud.points - grid.embed()[rows]
    assert np.all(residues >= 0)
    assert np.all(residues < step)
    for row, source in enumerate(grid.sources):
        assert source == np.flatnonzero(rows == row).min()


def _assert_thickening_union(grid: Grid) -> None:
    """Shift the subdivision by every vector in {0, -1}^N and take the union."""
    subdivided = grid_subdivision(grid).cell_set()
    union = {
        tuple(c + s for c, s in zip(cell, shift))
        for shift in itertools.product((0, -1), repeat=grid.dim)
        for cell in subdivided
    }
    thick = thickening(grid).cell_set()
    assert thick == union
    assert subdivided <= thick


# When Steps

@when(parsers.parse('I enrich the cloud at radius {radius} up to dimension {max_dim:d}'))
def enrich_cloud(shared_context, radius: str, max_dim: int):
    """Run barycentric subdivision on the stored cloud."""
    logger.info(f"Step: When I enrich the cloud at radius {radius} up to dimension {max_dim}")
    shared_context['radius'] = parse_number(radius)
    record_outcome(
        shared_context,
        lambda: barycentric_subdivision(shared_context['cloud'], parse_number(radius), max_dim)
    )


@when(parsers.parse('I sparsify the cloud at distance {min_dist}'))
def sparsify_cloud(shared_context, min_dist: str):
    """Run greedy sparsification on the stored cloud."""
    logger.info(f"Step: When I sparsify the cloud at distance {min_dist}")
    shared_context['min_dist'] = parse_number(min_dist)
    record_outcome(shared_context, lambda: sparsification(shared_context['cloud'], parse_number(min_dist)))


@when(parsers.parse('I gridify the cloud with step {step}'))
def gridify_cloud(shared_context, step: str):
    """Gridify with the default origin."""
    logger.info(f"Step: When I gridify the cloud with step {step}")
    record_outcome(shared_context, lambda: gridification(shared_context['cloud'], parse_number(step)))


@when(parsers.parse('I gridify the cloud with origin "{origin}" and step {step}'))
def gridify_cloud_with_origin(shared_context, origin: str, step: str):
    """Gridify with an explicit origin and keep the point-to-row map."""
    shared_context['origin'] = tuple(parse_rows(origin)[0])
    shared_context['step'] = parse_number(step)
    grid, rows = gridification_map(shared_context['cloud'], shared_context['step'], shared_context['origin'])
    shared_context['result'] = grid
    shared_context['rows'] = rows


@when('I gridify the scaled configuration cloud')
def gridify_configuration(shared_context):
    """Scale and shift the raw sample before gridifying it."""
    settings = shared_context['configuration']
    points = np.asarray(settings['raw_points']) * settings['scale'] + np.asarray(settings['shift'])
    shared_context['result'] = gridification(PointCloud(points), settings['grid_interval'])


@when(parsers.parse('I apply the {operation} transform'))
def apply_grid_transform(shared_context, operation: str):
    """Apply subdivision or thickening to the stored grid."""
    logger.info(f"Step: When I apply the {operation} transform")
    record_outcome(shared_context, lambda: GRID_TRANSFORMS[operation](shared_context['grid']))


@when(parsers.parse('I apply the {operation} transform twice'))
def apply_grid_transform_twice(shared_context, operation: str):
    """Apply a grid transform to its own half-step output."""
    transform = GRID_TRANSFORMS[operation]
    record_outcome(shared_context, lambda: transform(transform(shared_context['grid'])))


@when(parsers.parse('I take the complement with buffer {buffer:d}'))
def take_complement(shared_context, buffer: int):
    """Complement the stored grid inside its buffered bounding box."""
    logger.info(f"Step: When I take the complement with buffer {buffer}")
    shared_context['buffer'] = buffer
    record_outcome(shared_context, lambda: complement(shared_context['grid'], buffer))


# Then Steps

@then('the input cloud is a prefix of the result')
def input_is_prefix(shared_context):
    """The enriched cloud starts with the input rows, bit for bit."""
    cloud, result = shared_context['cloud'], shared_context['result']
    assert np.array_equal(result.points[:len(cloud)], cloud.points)


@then('the result size is the input size plus edges and triangles')
def enrichment_size(shared_context):
    """In general position no added point repeats an earlier one."""
    skeleton = vr_skeleton(shared_context['cloud'], shared_context['radius'])
    expected = len(shared_context['cloud']) + len(skeleton.edges) + len(skeleton.triangles)
    assert len(shared_context['result']) == expected


@then('sparsifying the result again changes nothing')
def sparsification_idempotent(shared_context):
    """Landmarks of landmarks are the landmarks."""
    result = shared_context['result']
    assert sparsification(result, shared_context['min_dist']) == result


@then(parsers.parse('every kept pair is farther apart than {min_dist}'))
def kept_pairs_separated(shared_context, min_dist: str):
    """Pairwise distances of the landmarks exceed the suppression distance."""
    points = list(shared_context['result'])
    assert all(distance(p, q) > parse_number(min_dist) for p, q in itertools.combinations(points, 2))


@then(parsers.parse('every input point lies within {min_dist} of a kept point'))
def input_covered(shared_context, min_dist: str):
    """Every input point has a landmark in its closed ball."""
    landmarks = list(shared_context['result'])
    for point in shared_context['cloud']:
        assert min(distance(point, landmark) for landmark in landmarks) <= parse_number(min_dist)


@then(parsers.parse('the landmarks of the cloud and of a shuffled copy lie within Hausdorff distance '
                    '{bound} at distance {min_dist}'))
def landmarks_close(shared_context, bound: str, min_dist: str):
    """Different orders give different landmarks that still lie close together."""
    cloud = shared_context['cloud']
    shuffled = cloud.take(np.random.default_rng(3).permutation(len(cloud)))
    first = sparsification(cloud, parse_number(min_dist))
    second = sparsification(shuffled, parse_number(min_dist))
    spread = hausdorff_distance(first, second)
    assert spread <= parse_number(bound)
    assert abs(spread - hausdorff_by_pairs(list(first), list(second))) <= 1e-12


@then(parsers.parse('the grid cells are "{cells}"'))
def grid_cells_are(shared_context, cells: str):
    """Compare grid rows, in grid order."""
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    assert list(shared_context['result']) == _cell_rows(cells)


@then('every point lies in its cell with residues in [0, step)')
def residues_in_cell(shared_context):
    """x - (z + mu * c) lies in [0, mu) exactly in floating point."""
    grid, rows, step = shared_context['result'], shared_context['rows'], shared_context['step']
    residues = shared_context['cloud'].points - grid.embed()[rows]
    assert np.all(residues >= 0)
    assert np.all(residues < step)


@then('every cell records its smallest source index')
def cell_sources(shared_context):
    """Grid rows follow their smallest source, which maps to that row."""
    grid, rows = shared_context['result'], shared_context['rows']
    for row, source in enumerate(grid.sources):
        assert source == np.flatnonzero(rows == row).min()
    assert list(grid.sources) == sorted(grid.sources)


@then('the grid has the configured cells')
def configured_cells(shared_context):
    """Compare the grid with the configured cell set."""
    expected = {tuple(cell) for cell in shared_context['configuration']['cells']}
    assert shared_context['result'].cell_set() == expected
    assert len(shared_context['result']) == 16


@then(parsers.parse('the result is a halved grid with cells "{cells}"'))
def halved_grid_cells(shared_context, cells: str):
    """Compare half-step cells in lexicographic order."""
    result = shared_context['result']
    assert result.halved
    assert list(result) == _cell_rows(cells)


@then('the thickening equals the union of shifted subdivisions')
def thickening_is_union(shared_context):
    _assert_thickening_union(shared_context['grid'])


@then('the thickening contains the subdivision')
def thickening_contains_subdivision(shared_context):
    grid = shared_context['grid']
    assert grid_subdivision(grid).cell_set() <= thickening(grid).cell_set()


@then('the complement is disjoint from the grid and fills the box')
def complement_fills_box(shared_context):
    """Complement and grid partition the buffered bounding box."""
    grid, result, buffer = shared_context['grid'], shared_context['result'], shared_context['buffer']
    assert not (result.cell_set() & grid.cell_set())
    low, high = grid.bounding_box()
    box = int(np.prod(high - low + 1 + 2 * buffer))
    assert len(result) + len(grid) == box
    assert isinstance(result, Grid) and not result.halved


@then(parsers.parse('for {count:d} seeded clouds of {n_points:d} points in dimension {dim:d} sparsification at '
                    '{min_dist} is idempotent, separated and covering'))
def sparsification_laws_over_seeds(seeded_cloud, count: int, n_points: int, dim: int, min_dist: str):
    threshold = parse_number(min_dist)
    for seed in range(count):
        cloud = seeded_cloud(seed, n_points, dim)
        _assert_sparsification_laws(cloud, sparsification(cloud, threshold), threshold)


@then(parsers.parse('for {count:d} seeded clouds of {n_points:d} points in dimension {dim:d} with random origins '
                    'and steps the residues lie in [0, step)'))
def residues_over_seeds(seeded_cloud, count: int, n_points: int, dim: int):
    """Origins range over [-1, 1) and steps over [0.01, 0.5)."""
    for seed in range(count):
        rng = np.random.default_rng(10_000 + seed)
        origin = tuple(rng.uniform(-1.0, 1.0, size=dim))
        step = float(rng.uniform(0.01, 0.5))
        _assert_residues(seeded_cloud(seed, n_points, dim), origin, step)


@then(parsers.parse('for {count:d} seeded lattice sets of at most {max_cells:d} cells the thickening equals the '
                    'union of shifted subdivisions'))
def thickening_union_over_seeds(count: int, max_cells: int):
    for seed in range(count):
        _assert_thickening_union(random_grid(seed, max_cells))
