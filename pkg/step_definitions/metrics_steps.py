"""
Metrics Step Definitions
BDD step implementations for bottleneck and Hausdorff distances
"""
import math

import numpy as np
import pytest
from pytest_bdd import scenarios, given, when, then, parsers

from fixtures.cloud_fixtures import parse_cloud, parse_diagram, parse_number, record_outcome
from fixtures.oracles import brute_bottleneck, hausdorff_by_pairs
from topology.core import PersistenceDiagram
from topology.metrics import bottleneck, hausdorff_distance, matching_cost
from topology.persistence import ph0_vr
from topology.transforms import sparsification
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# Load scenarios from feature file
scenarios('../features/metrics.feature')


def _random_diagram(rng: np.random.Generator, finite: int, zero_births: bool) -> PersistenceDiagram:
    """One infinite interval followed by random finite ones."""
    births = np.zeros(finite) if zero_births else rng.random(finite)
    deaths = births + rng.random(finite)
    return PersistenceDiagram.from_pairs([(0.0, math.inf)] + list(zip(births, deaths)))


# Given Steps

@given(parsers.parse('the diagrams "{a}" and "{b}"'))
def given_diagrams(shared_context, a: str, b: str):
    """Store two diagrams written as birth,death rows."""
    logger.info(f"Step: Given the diagrams {a} and {b}")
    shared_context['diagrams'] = (parse_diagram(a), parse_diagram(b))


@given(parsers.parse('random diagrams with seed {seed:d} and {m:d} and {n:d} finite intervals'))
def given_random_diagrams(shared_context, seed: int, m: int, n: int):
    """Store two diagrams with arbitrary births."""
    rng = np.random.default_rng(seed)
    shared_context['rng'] = rng
    shared_context['diagrams'] = (_random_diagram(rng, m, False), _random_diagram(rng, n, False))


@given(parsers.parse('random zero-birth diagrams with seed {seed:d} and {m:d} and {n:d} finite intervals'))
def given_zero_birth_diagrams(shared_context, seed: int, m: int, n: int):
    """Store two diagrams shaped like degree-0 Rips diagrams."""
    rng = np.random.default_rng(seed)
    shared_context['rng'] = rng
    shared_context['diagrams'] = (_random_diagram(rng, m, True), _random_diagram(rng, n, True))


@given(parsers.parse('{count:d} random diagram pairs with seed {seed:d} and at most {size:d} finite intervals per side'))
def given_many_diagram_pairs(shared_context, count: int, seed: int, size: int):
    """Store diagram pairs of random sizes; every other pair has zero births."""
    logger.info(f"Step: Given {count} random diagram pairs with seed {seed}")
    rng = np.random.default_rng(seed)
    pairs = []
    for position in range(count):
        zero_births = position % 2 == 1
        m, n = rng.integers(0, size + 1, size=2)
        pairs.append((_random_diagram(rng, int(m), zero_births), _random_diagram(rng, int(n), zero_births)))
    shared_context['diagram_pairs'] = pairs


@given(parsers.parse('the second point cloud "{points}"'))
def given_second_cloud(shared_context, points: str):
    shared_context['other_cloud'] = parse_cloud(points)


@given(parsers.parse('a second random cloud with seed {seed:d}, {n_points:d} points'))
def given_second_random_cloud(shared_context, seeded_cloud, seed: int, n_points: int):
    """Random cloud in the dimension of the first one."""
    shared_context['other_cloud'] = seeded_cloud(seed, n_points, shared_context['cloud'].dim)


# When Steps

@when(parsers.parse('I compute the bottleneck distance under the {metric} metric'))
def compute_bottleneck_with_metric(shared_context, metric: str):
    """Compute the distance and its witness under an explicit metric."""
    logger.info(f"Step: When I compute the bottleneck distance under the {metric} metric")
    shared_context['metric'] = metric
    a, b = shared_context['diagrams']
    record_outcome(shared_context, lambda: bottleneck(a, b, metric))


@when('I compute the bottleneck distance')
def compute_bottleneck(shared_context):
    """Compute the distance under the configured metric."""
    logger.info("Step: When I compute the bottleneck distance")
    shared_context['metric'] = None
    a, b = shared_context['diagrams']
    record_outcome(shared_context, lambda: bottleneck(a, b))


@when('I compute the Hausdorff distance')
def compute_hausdorff(shared_context):
    logger.info("Step: When I compute the Hausdorff distance")
    record_outcome(
        shared_context,
        lambda: hausdorff_distance(shared_context['cloud'], shared_context['other_cloud'])
    )


# Then Steps

@then(parsers.parse('the bottleneck distance is {expected}'))
def bottleneck_is(shared_context, expected: str):
    """Compare the computed distance; 'inf' is compared exactly."""
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    value, _ = shared_context['result']
    target = parse_number(expected)
    if math.isinf(target):
        assert math.isinf(value)
    else:
        assert value == pytest.approx(target, abs=1e-12)


@then('the witness matching covers both diagrams and costs the distance')
def witness_consistent(shared_context):
    """The returned matching assigns everything once and its cost is the distance."""
    a, b = shared_context['diagrams']
    value, matching = shared_context['result']
    assert matching.covers(len(a), len(b))
    assert matching.cost == value
    assert matching_cost(a, b, matching, shared_context['metric']) == value


@then(parsers.parse('the distance matches exhaustive search under the {metric} metric'))
def matches_exhaustive(shared_context, metric: str):
    a, b = shared_context['diagrams']
    value, matching = bottleneck(a, b, metric)
    assert value == pytest.approx(brute_bottleneck(a, b, metric), abs=1e-12)
    assert matching.covers(len(a), len(b))


@then('every pair matches exhaustive search under both metrics')
def pairs_match_exhaustive(shared_context):
    for position, (a, b) in enumerate(shared_context['diagram_pairs']):
        for metric in ('chebyshev', 'euclidean'):
            value, matching = bottleneck(a, b, metric)
            expected = brute_bottleneck(a, b, metric)
            assert value == pytest.approx(expected, abs=1e-12), f"pair {position} under {metric}"
            assert matching.covers(len(a), len(b))


@then('swapping the diagrams gives the same distance')
def symmetric(shared_context):
    a, b = shared_context['diagrams']
    assert bottleneck(a, b)[0] == pytest.approx(bottleneck(b, a)[0], abs=1e-12)


@then('the triangle inequality holds through a third random diagram')
def triangle_inequality(shared_context):
    """d(a, b) <= d(a, c) + d(c, b) for a third diagram c."""
    a, b = shared_context['diagrams']
    c = _random_diagram(shared_context['rng'], 4, False)
    assert bottleneck(a, b)[0] <= bottleneck(a, c)[0] + bottleneck(c, b)[0] + 1e-12


@then(parsers.parse('the fast path and the general solver agree under the {metric} metric'))
def fast_path_agrees(shared_context, metric: str):
    """Both solvers return optimal witnesses, so their values coincide."""
    a, b = shared_context['diagrams']
    fast, fast_matching = bottleneck(a, b, metric, fast_path=True)
    general, general_matching = bottleneck(a, b, metric, fast_path=False)
    assert fast == pytest.approx(general, abs=1e-12)
    assert fast_matching.covers(len(a), len(b))
    assert general_matching.covers(len(a), len(b))


@then(parsers.parse('the diagram of the cloud and of its sparsification at {min_dist} are within '
                    'their Hausdorff distance'))
def stability_of_sparsification(shared_context, min_dist: str):
    """Degree-0 diagrams move no more than the clouds do."""
    cloud = shared_context['cloud']
    landmarks = sparsification(cloud, parse_number(min_dist))
    value, _ = bottleneck(ph0_vr(cloud)[0], ph0_vr(landmarks)[0])
    assert value <= hausdorff_distance(cloud, landmarks) + 1e-12


@then(parsers.parse('the Hausdorff distance is {expected}'))
def hausdorff_is(shared_context, expected: str):
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    assert shared_context['result'] == pytest.approx(parse_number(expected), abs=1e-12)


@then('the Hausdorff distance matches the all-pairs computation')
def hausdorff_matches_pairs(shared_context):
    x, y = shared_context['cloud'], shared_context['other_cloud']
    assert hausdorff_distance(x, y) == pytest.approx(hausdorff_by_pairs(list(x), list(y)), abs=1e-12)
