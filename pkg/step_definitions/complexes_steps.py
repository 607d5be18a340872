"""
Complexes Step Definitions
BDD step implementations for Rips skeletons and cubical complexes
"""
import numpy as np
from pytest_bdd import scenarios, given, when, then, parsers

from fixtures.cloud_fixtures import parse_number, parse_rows, record_outcome
from fixtures.oracles import exhaustive_skeleton
from topology.complexes import cube_corners, cube_faces, cubical_complex, vr_skeleton
from topology.core import Grid
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# Load scenarios from feature file
scenarios('../features/complexes.feature')


def _index_rows(text: str):
    return [tuple(int(value) for value in row) for row in parse_rows(text)]


# Given Steps

@given(parsers.parse('random lattice cells with seed {seed:d} in a box of side {side:d}'))
def random_box_cells(shared_context, seed: int, side: int):
    """Occupy roughly two thirds of a three-dimensional box."""
    rng = np.random.default_rng(seed)
    cells = np.argwhere(rng.random((side, side, side)) < 0.65)
    shared_context['grid'] = Grid.from_cells(cells)


# When Steps

@when(parsers.parse('I build the skeleton at radius {radius} up to dimension {max_dim:d}'))
def build_skeleton(shared_context, radius: str, max_dim: int):
    """Enumerate the skeleton of the stored cloud."""
    logger.info(f"Step: When I build the skeleton at radius {radius} up to dimension {max_dim}")
    shared_context['radius'] = parse_number(radius)
    shared_context['max_dim'] = max_dim
    record_outcome(shared_context, lambda: vr_skeleton(shared_context['cloud'], parse_number(radius), max_dim))


@when('I build the cubical complex')
def build_cubical_complex(shared_context):
    """Build the full cubical complex of the stored grid."""
    logger.info("Step: When I build the cubical complex")
    record_outcome(shared_context, lambda: cubical_complex(shared_context['grid']))


# Then Steps

@then(parsers.parse('the edges are "{edges}"'))
def edges_are(shared_context, edges: str):
    """Compare edges, in order."""
    assert shared_context['result'].edge_list() == _index_rows(edges)


@then(parsers.parse('the triangles are "{triangles}"'))
def triangles_are(shared_context, triangles: str):
    """Compare triangles, in order."""
    assert shared_context['result'].triangle_list() == _index_rows(triangles)


@then('the skeleton equals the exhaustive enumeration')
def skeleton_matches_oracle(shared_context):
    """Compare with every pair and triple checked directly."""
    edges, triangles = exhaustive_skeleton(shared_context['cloud'], shared_context['radius'],
                                           shared_context['max_dim'])
    skeleton = shared_context['result']
    assert skeleton.edge_list() == edges
    assert skeleton.triangle_list() == triangles


@then('every triangle has all three of its edges')
def downward_closed(shared_context):
    """Check downward closure of the skeleton."""
    skeleton = shared_context['result']
    edges = set(skeleton.edge_list())
    for i, j, k in skeleton.triangle_list():
        assert {(i, j), (i, k), (j, k)} <= edges


@then(parsers.parse('the skeleton at radius {small} is contained in the skeleton at radius {large}'))
def skeleton_monotone(shared_context, small: str, large: str):
    """A larger radius only adds simplices."""
    cloud = shared_context['cloud']
    low = vr_skeleton(cloud, parse_number(small))
    high = vr_skeleton(cloud, parse_number(large))
    assert set(low.edge_list()) <= set(high.edge_list())
    assert set(low.triangle_list()) <= set(high.triangle_list())
    assert len(low.edges) < len(high.edges)


@then(parsers.parse('it has {vertices:d} vertices, {edges:d} edges and {squares:d} squares'))
def cube_counts(shared_context, vertices: int, edges: int, squares: int):
    """Compare k-cube counts."""
    complex_ = shared_context['result']
    assert (complex_.vertices, complex_.edges, complex_.squares) == (vertices, edges, squares)


@then(parsers.parse('its Euler characteristic is {euler:d}'))
def euler_characteristic_is(shared_context, euler: int):
    assert shared_context['result'].euler_characteristic() == euler


@then('its edges and squares match the configuration labels')
def labelled_cubes(shared_context):
    """Translate cubes to the one-based labels of the configuration cells."""
    settings = shared_context['configuration']
    label = {tuple(cell): position + 1 for position, cell in enumerate(settings['cells'])}
    complex_ = shared_context['result']
    edges = {frozenset(label[corner] for corner in cube_corners(cube)) for cube in complex_.iter_cubes(1)}
    squares = {frozenset(label[corner] for corner in cube_corners(cube)) for cube in complex_.iter_cubes(2)}
    assert edges == {frozenset(pair) for pair in settings['edges']}
    assert squares == {frozenset(square) for square in settings['squares']}


@then('every listed cube has all of its faces listed')
def faces_listed(shared_context):
    """Check downward closure of the materialised cube lists."""
    complex_ = shared_context['result']
    assert complex_.counts[0] == len(shared_context['grid'])
    for k in range(1, complex_.dim + 1):
        lower = set(complex_.iter_cubes(k - 1))
        cubes = list(complex_.iter_cubes(k))
        assert len(cubes) == complex_.counts[k]
        for cube in cubes:
            assert all(face in lower for face in cube_faces(cube))
