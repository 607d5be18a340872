"""
Persistence Module
Degree-0 persistence under the elder rule, cubical Betti numbers, and the
duality route to codimension-one homology
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import ndimage
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial import Delaunay, QhullError, cKDTree

from config.config import config
from topology.complexes import cubical_complex
from topology.core import Grid, Interval, PersistenceDiagram, PointCloud, pairwise_distances, row_distances
from topology.exceptions import DimensionMismatchError, EmptyInputError, InvalidParameterError, LatticeError
from topology.transforms import complement
from topology.union_find import UnionFind
from utils.logger import Logger


logger = Logger.get_logger(__name__)


@dataclass(frozen=True)
class KillRecord:
    """
    One merge of the degree-0 sweep.

    The component whose elder is ``dying_index`` is absorbed by the component
    whose elder is ``killer_index`` when the edge ``pair`` of length
    ``merge_distance`` appears; its interval is [0, merge_distance / 2).
    """

    dying_index: int
    killer_index: int
    pair: Tuple[int, int]
    merge_distance: float

    @property
    def death(self) -> float:
        return self.merge_distance / 2.0


# ============================================================================
# Candidate edges
# ============================================================================

def _dense_candidates(points: np.ndarray) -> np.ndarray:
    """Edges of a minimum spanning tree over all pairs."""
    tree = minimum_spanning_tree(pairwise_distances(points, points)).tocoo()
    return np.column_stack([tree.row, tree.col]).astype(np.int64)


def _delaunay_candidates(points: np.ndarray) -> np.ndarray:
    """
    Edges of the Delaunay triangulation, which contain a Euclidean MST.

    Qhull leaves a point that nearly coincides with a vertex out of every
    simplex and lists it in ``coplanar``. Such a point is joined to the vertex
    Qhull recorded for it and to its nearest neighbours, so no point is left
    without an edge.
    """
    triangulation = Delaunay(points)
    simplices = triangulation.simplices
    corners = simplices.shape[1]
    pairs = [simplices[:, [a, b]] for a in range(corners) for b in range(a + 1, corners)]

    coplanar = triangulation.coplanar
    if len(coplanar):
        omitted = coplanar[:, 0]
        pairs.append(coplanar[:, [0, 2]])
        k = min(len(points), points.shape[1] + 2)
        _, neighbours = cKDTree(points).query(points[omitted], k=k)
        joined = np.column_stack([np.repeat(omitted, k), np.asarray(neighbours).reshape(-1)])
        pairs.append(joined[joined[:, 0] != joined[:, 1]])
        logger.debug(f"Delaunay triangulation omitted {len(omitted)} near-coincident points")
    return np.concatenate(pairs).astype(np.int64)


def _spanning_candidates(points: np.ndarray) -> np.ndarray:
    """
    Candidate edges guaranteed to contain a minimum spanning tree of distinct points.

    Args:
        points: Pairwise distinct coordinates of shape (m, N)

    Returns:
        Int64 array of index pairs
    """
    count, dim = points.shape
    if count < 2:
        return np.empty((0, 2), dtype=np.int64)
    if dim == 1:
        order = np.argsort(points[:, 0], kind='stable')
        return np.column_stack([order[:-1], order[1:]]).astype(np.int64)
    if count <= config.get_dense_limit() or dim > 3:
        return _dense_candidates(points)
    try:
        return _delaunay_candidates(points)
    except QhullError as error:
        logger.warning(f"Delaunay triangulation failed ({error}); using all pairs")
        return _dense_candidates(points)


# ============================================================================
# Degree-0 persistence
# ============================================================================

def ph0_vr(cloud: PointCloud) -> Tuple[PersistenceDiagram, List[KillRecord]]:
    """
    Degree-0 persistence of the Vietoris-Rips filtration with the elder rule.

    Edges are swept by increasing length, ties broken by index pair. When two
    components merge, the one whose smallest index is larger dies at half the
    edge length. Repeated points merge at length zero.

    Args:
        cloud: Nonempty ordered point cloud

    Returns:
        Tuple of (diagram with one interval per point in index order, kill records in sweep order)

    Raises:
        EmptyInputError: If the cloud is empty
    """
    count = len(cloud)
    if count == 0:
        logger.error("Degree-0 persistence requested for an empty cloud")
        raise EmptyInputError("persistence of an empty cloud is undefined")

    points = cloud.points
    _, first, inverse = np.unique(points, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    candidates = first[_spanning_candidates(points[first])]

    # repeated points join their first occurrence at length zero
    elder = first[inverse]
    repeated = np.flatnonzero(elder != np.arange(count))
    duplicates = np.column_stack([elder[repeated], repeated]).astype(np.int64)

    edges = np.sort(np.concatenate([candidates, duplicates]), axis=1)
    lengths = row_distances(points[edges[:, 0]], points[edges[:, 1]])
    order = np.lexsort((edges[:, 1], edges[:, 0], lengths))

    forest = UnionFind(count)
    deaths = np.full(count, np.inf)
    kills: List[KillRecord] = []
    for position in order:
        i, j = int(edges[position, 0]), int(edges[position, 1])
        merged = forest.union(i, j)
        if merged is None:
            continue
        survivor, dying = merged
        length = float(lengths[position])
        deaths[dying] = length / 2.0
        kills.append(KillRecord(dying_index=dying, killer_index=survivor, pair=(i, j), merge_distance=length))
        if forest.n_clusters == 1:
            break

    diagram = PersistenceDiagram(
        tuple(Interval(0.0, float(deaths[index]), index) for index in range(count)), degree=0
    )
    logger.debug(f"Degree-0 persistence: {count} points, {len(kills)} merges, {forest.n_clusters} components")
    return diagram, kills


def ph0_grid(grid: Grid) -> PersistenceDiagram:
    """
    Degree-0 persistence of a grid, swept by Euclidean distance between embedded
    cells in grid row order.

    Args:
        grid: Nonempty grid

    Returns:
        Diagram whose source indices are grid rows

    Raises:
        EmptyInputError: If the grid is empty
    """
    if len(grid) == 0:
        logger.error("Degree-0 persistence requested for an empty grid")
        raise EmptyInputError("persistence of an empty grid is undefined")
    diagram, _ = ph0_vr(PointCloud(grid.embed()))
    return diagram


# ============================================================================
# Cubical Betti numbers
# ============================================================================

def betti0_cubical(grid: Grid) -> int:
    """
    Number of components of a lattice set under axis adjacency.

    Args:
        grid: Finite grid

    Returns:
        Component count, 0 for an empty grid
    """
    if len(grid) == 0:
        return 0
    occupied, _ = grid.occupancy()
    structure = ndimage.generate_binary_structure(grid.dim, 1)
    _, components = ndimage.label(occupied, structure=structure)
    return int(components)


def betti1_cubical_2d(grid: Grid) -> int:
    """
    First Betti number of a planar cubical complex from its Euler characteristic.

    Args:
        grid: Two-dimensional grid

    Returns:
        b1 = b0 - (V - E + F)

    Raises:
        DimensionMismatchError: If the grid is not two-dimensional
    """
    if grid.dim != 2:
        logger.error(f"Planar Betti number requested for a grid of dimension {grid.dim}")
        raise DimensionMismatchError(f"betti1_cubical_2d requires dimension 2, got {grid.dim}")
    return betti0_cubical(grid) - cubical_complex(grid).euler_characteristic()


def codim1_via_duality(grid: Grid, buffer: int = 1) -> int:
    """
    Rank of codimension-one homology of the thickened grid, read off the
    complement: components of the buffered complement minus the unbounded one.

    Args:
        grid: Nonempty grid on the full lattice
        buffer: Window growth, at least 1 so the outer region survives

    Returns:
        Non-negative rank

    Raises:
        EmptyInputError: If the grid is empty
        InvalidParameterError: If buffer is below 1
    """
    if grid.halved:
        logger.error("Duality requires a grid on the full lattice")
        raise LatticeError("codim1_via_duality requires a grid that is not halved")
    if len(grid) == 0:
        logger.error("Duality requested for an empty grid")
        raise EmptyInputError("duality of an empty grid is undefined")
    if int(buffer) != buffer or buffer < 1:
        logger.error(f"Invalid duality buffer: {buffer}")
        raise InvalidParameterError(f"buffer must be an integer of at least 1, got {buffer}")
    rank = betti0_cubical(complement(grid, int(buffer))) - 1
    logger.debug(f"Duality rank for {len(grid)} cells with buffer {buffer}: {rank}")
    return rank
