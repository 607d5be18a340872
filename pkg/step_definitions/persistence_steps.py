"""
Persistence Step Definitions
BDD step implementations for elder-rule diagrams, cubical Betti numbers and duality
"""
import numpy as np
import pytest
from pytest_bdd import scenarios, given, when, then, parsers
from scipy.sparse.csgraph import minimum_spanning_tree

from config.config import config
from fixtures.cloud_fixtures import parse_diagram, parse_number, record_outcome
from fixtures.oracles import component_count, euler_betti1, kruskal_deaths
from topology.core import Grid, PointCloud, pairwise_distances
from topology.persistence import betti0_cubical, betti1_cubical_2d, codim1_via_duality, ph0_grid, ph0_vr
from topology.transforms import complement, thickening
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# Load scenarios from feature file
scenarios('../features/persistence.feature')


# Given Steps

@given(parsers.parse('its first {count:d} points repeated with an offset of {offset}'))
def given_near_coincident_points(shared_context, count: int, offset: str):
    """Append shifted copies of the first points, distinct but nearly coincident."""
    logger.info(f"Step: Given its first {count} points repeated with an offset of {offset}")
    points = shared_context['cloud'].points
    shared_context['cloud'] = PointCloud(np.concatenate([points, points[:count] + parse_number(offset)]))


@given(parsers.parse('the all-pairs route is limited to {limit:d} points'))
def given_dense_limit(monkeypatch, limit: int):
    """Lower the cloud size above which spanning-tree candidates come from a triangulation."""
    monkeypatch.setattr(config, 'get_dense_limit', lambda: limit)


# When Steps

@when('I compute the degree-0 diagram')
def compute_diagram(shared_context):
    """Run the elder-rule sweep on the stored cloud."""
    logger.info("Step: When I compute the degree-0 diagram")
    outcome = record_outcome(shared_context, lambda: ph0_vr(shared_context['cloud']))
    if outcome is not None:
        shared_context['diagram'], shared_context['kills'] = outcome


@when('I compute the degree-0 diagram of the grid')
def compute_grid_diagram(shared_context):
    """Run the sweep on the embedded grid."""
    logger.info("Step: When I compute the degree-0 diagram of the grid")
    shared_context['diagram'] = record_outcome(shared_context, lambda: ph0_grid(shared_context['grid']))


@when('I ask for the planar Betti number of a three-dimensional grid')
def planar_betti_of_solid(shared_context):
    grid = Grid.from_cells([(0, 0, 0), (1, 0, 0)])
    record_outcome(shared_context, lambda: betti1_cubical_2d(grid))


@when(parsers.parse('I compute the duality rank with buffer {buffer:d}'))
def compute_duality(shared_context, buffer: int):
    """Read the codimension-one rank off the complement."""
    record_outcome(shared_context, lambda: codim1_via_duality(shared_context['grid'], buffer))


# Then Steps

@then(parsers.parse('the diagram in index order is "{diagram}"'))
def diagram_is(shared_context, diagram: str):
    """Compare intervals position by position; position i belongs to point i."""
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    actual = shared_context['diagram']
    expected = parse_diagram(diagram)
    assert len(actual) == len(expected)
    for position, (got, want) in enumerate(zip(actual, expected)):
        assert got.source_index == position
        assert got.birth == want.birth
        assert got.death == pytest.approx(want.death, abs=1e-12)


@then(parsers.parse('the kill records are "{records}"'))
def kill_records_are(shared_context, records: str):
    """Compare 'dying by killer at distance' records in sweep order."""
    actual = [(kill.dying_index, kill.killer_index, kill.merge_distance) for kill in shared_context['kills']]
    expected = []
    for record in records.split(';'):
        dying, _, killer, _, merge = record.split()
        expected.append((int(dying), int(killer), float(merge)))
    assert [(d, k) for d, k, _ in actual] == [(d, k) for d, k, _ in expected]
    assert [m for _, _, m in actual] == pytest.approx([m for _, _, m in expected], abs=1e-12)
    for kill in shared_context['kills']:
        assert shared_context['diagram'][kill.dying_index].death == kill.death


@then(parsers.parse('every merge is absorbed by index {killer:d}'))
def merges_absorbed_by(shared_context, killer: int):
    kills = shared_context['kills']
    assert len(kills) == len(shared_context['cloud']) - 1
    assert all(kill.killer_index == killer for kill in kills)


@then('every point owns exactly one interval')
def elder_rule_bijection(shared_context):
    """One interval per point, distinct sources, one infinite interval."""
    diagram = shared_context['diagram']
    assert len(diagram) == len(shared_context['cloud'])
    assert sorted(interval.source_index for interval in diagram) == list(range(len(diagram)))
    assert len(diagram.infinite_positions()) == 1
    assert diagram[0].is_infinite


@then('the finite deaths match an independent spanning tree')
def deaths_match_kruskal(shared_context):
    expected = kruskal_deaths(shared_context['cloud'])
    actual = shared_context['diagram'].sorted_finite_deaths()
    assert actual.tolist() == pytest.approx(expected, abs=1e-12)


@then('the finite deaths match the all-pairs spanning tree')
def deaths_match_dense_tree(shared_context):
    points = shared_context['cloud'].points
    tree = minimum_spanning_tree(pairwise_distances(points, points))
    expected = np.sort(tree.data) / 2.0
    actual = shared_context['diagram'].sorted_finite_deaths()
    assert np.allclose(actual, expected, rtol=0, atol=1e-12)


@then(parsers.parse('the grid has {b0:d} components and first Betti number {b1:d}'))
def grid_betti_numbers(shared_context, b0: int, b1: int):
    """Compare both Betti numbers with the expected values and the oracle."""
    grid = shared_context['grid']
    assert betti0_cubical(grid) == b0 == component_count(grid)
    assert betti1_cubical_2d(grid) == b1 == euler_betti1(grid)


@then(parsers.parse('the grid has {b0:d} components'))
def grid_components(shared_context, b0: int):
    assert betti0_cubical(shared_context['grid']) == b0


@then('the complement has the configured number of components')
def configured_complement_components(shared_context):
    settings = shared_context['configuration']
    outside = complement(shared_context['grid'], settings['buffer'])
    assert len(outside) == settings['complement_size']
    assert betti0_cubical(outside) == settings['complement_components']


@then('the thickened grid has the configured first Betti number')
def configured_thickened_betti(shared_context):
    thick = thickening(shared_context['grid'])
    assert betti1_cubical_2d(thick) == shared_context['configuration']['thickened_betti1']
    assert euler_betti1(thick) == shared_context['configuration']['thickened_betti1']


@then('the duality rank equals the thickened first Betti number')
def duality_matches_thickening(shared_context):
    grid = shared_context['grid']
    buffer = shared_context['configuration']['buffer']
    assert codim1_via_duality(grid, buffer) == betti1_cubical_2d(thickening(grid))


@then(parsers.parse('the duality rank with buffer {buffer:d} is {rank:d}'))
def duality_rank_is(shared_context, buffer: int, rank: int):
    assert codim1_via_duality(shared_context['grid'], buffer) == rank


@then('the duality rank equals the Euler oracle on the thickening for buffers 1, 2 and 3')
def duality_matches_oracle(shared_context):
    """The rank read off the complement does not depend on the buffer."""
    grid = shared_context['grid']
    expected = euler_betti1(thickening(grid))
    assert betti1_cubical_2d(thickening(grid)) == expected
    for buffer in (1, 2, 3):
        assert codim1_via_duality(grid, buffer) == expected, f"buffer {buffer}"


@then('the component count is invariant under translation')
def components_translation_invariant(shared_context):
    grid = shared_context['grid']
    assert betti0_cubical(grid.translated((5, -3))) == betti0_cubical(grid) == component_count(grid)
