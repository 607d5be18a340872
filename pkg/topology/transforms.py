"""
Transforms Module
Point-cloud and grid modifications: barycentric enrichment, sparsification,
gridification, subdivision, thickening and complement
"""
import itertools
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from config.config import config
from topology.complexes import search_radius, vr_skeleton
from topology.core import Grid, PointCloud, row_distances
from topology.exceptions import DimensionMismatchError, EmptyInputError, InvalidParameterError, LatticeError
from utils.logger import Logger


logger = Logger.get_logger(__name__)


def _first_occurrence_of_rows(array: np.ndarray) -> np.ndarray:
    """Positions of rows not bitwise equal to an earlier row, ascending."""
    if len(array) == 0:
        return np.empty(0, dtype=np.int64)
    bits = np.ascontiguousarray(array, dtype=np.float64).view(np.uint64)
    # stable lexicographic sort on the raw bits; the head of every run is its earliest row
    order = np.lexsort(bits.T[::-1])
    ordered = bits[order]
    heads = np.concatenate([[True], np.any(ordered[1:] != ordered[:-1], axis=1)])
    return np.sort(order[heads])


# ============================================================================
# Point cloud transforms
# ============================================================================

def barycentric_subdivision(cloud: PointCloud, radius: float, max_dim: int = 2) -> PointCloud:
    """
    Enrich a cloud with the midpoints and centroids of its VR simplices.

    The output starts with the input rows unchanged, followed by edge midpoints
    in (i, j) order and triangle centroids in (i, j, k) order. A new point
    bitwise equal to an earlier row is dropped.

    Args:
        cloud: Ordered point cloud
        radius: Closed VR radius
        max_dim: 1 for midpoints only, 2 to add centroids

    Returns:
        Enriched point cloud
    """
    skeleton = vr_skeleton(cloud, radius, max_dim)
    points = cloud.points
    if len(skeleton.edges) == 0:
        logger.info(f"Barycentric subdivision at radius {radius}: no simplices, {len(cloud)} points kept")
        return PointCloud(points)

    edges, triangles = skeleton.edges, skeleton.triangles
    midpoints = (points[edges[:, 0]] + points[edges[:, 1]]) / 2.0
    blocks = [points, midpoints]
    if len(triangles):
        blocks.append((points[triangles[:, 0]] + points[triangles[:, 1]] + points[triangles[:, 2]]) / 3.0)
    combined = np.concatenate(blocks)

    first = _first_occurrence_of_rows(combined)
    # input rows are never dropped, even when the input repeats itself
    added = first[first >= len(points)]
    keep = np.concatenate([np.arange(len(points)), added])
    dropped = len(combined) - len(keep)
    result = PointCloud(combined[keep])
    logger.info(
        f"Barycentric subdivision at radius {radius}: {len(points)} points, {len(edges)} edges, "
        f"{len(triangles)} triangles, {dropped} duplicates dropped, {len(result)} points out"
    )
    return result


def sparsification_indices(cloud: PointCloud, min_dist: float) -> np.ndarray:
    """
    Indices of the landmarks chosen by the greedy order walk.

    Args:
        cloud: Ordered point cloud
        min_dist: Landmarks keep pairwise distances strictly above this value

    Returns:
        Ascending int64 array of kept indices
    """
    min_dist = float(min_dist)
    if not min_dist >= 0:
        logger.error(f"Negative sparsification distance: {min_dist}")
        raise InvalidParameterError(f"min_dist must be non-negative, got {min_dist}")
    count = len(cloud)
    if count == 0:
        return np.empty(0, dtype=np.int64)

    points = cloud.points
    tree = cKDTree(points)
    suppressed = bytearray(count)
    flags = np.frombuffer(suppressed, dtype=np.uint8)
    kept = []
    index = 0
    while index != -1:
        kept.append(index)
        neighbours = np.asarray(tree.query_ball_point(points[index], search_radius(min_dist)), dtype=np.int64)
        neighbours = neighbours[neighbours > index]
        if len(neighbours):
            close = row_distances(points[neighbours], points[index]) <= min_dist
            flags[neighbours[close]] = 1
        index = suppressed.find(0, index + 1)
    return np.asarray(kept, dtype=np.int64)


def sparsification(cloud: PointCloud, min_dist: float) -> PointCloud:
    """
    Greedy landmark subset: keep a point iff it lies farther than min_dist
    from every previously kept point.

    Args:
        cloud: Ordered point cloud
        min_dist: Suppression distance

    Returns:
        Landmark cloud in input order
    """
    kept = sparsification_indices(cloud, min_dist)
    logger.info(f"Sparsification at distance {min_dist}: {len(cloud)} points in, {len(kept)} landmarks out")
    return cloud.take(kept) if len(cloud) else PointCloud.empty(cloud.dim)


# ============================================================================
# Gridification and grid transforms
# ============================================================================

def _resolve_origin(dim: int, origin: Optional[Sequence[float]]) -> Tuple[float, ...]:
    if origin is None:
        return config.get_grid_origin(dim)
    origin = tuple(float(value) for value in origin)
    if len(origin) != dim:
        logger.error(f"Grid origin of dimension {len(origin)} for points of dimension {dim}")
        raise DimensionMismatchError(f"origin has dimension {len(origin)}, points have dimension {dim}")
    return origin


def floor_cells(points: np.ndarray, step: float, origin: Tuple[float, ...]) -> np.ndarray:
    """
    Lattice cell of every point, chosen so that x - (z + step * c) lies in [0, step)^N
    exactly in floating point.

    Args:
        points: Coordinates of shape (n, N)
        step: Lattice step
        origin: Translation z

    Returns:
        Int64 cells of shape (n, N)
    """
    base = np.asarray(origin, dtype=np.float64)
    cells = np.floor((points - base) / step)
    # floor of the quotient can be off by one after rounding; settle on the embedded residue
    for _ in range(4):
        residue = points - (base + step * cells)
        low, high = residue < 0, residue >= step
        if not (low.any() or high.any()):
            break
        cells = cells - low + high
    return cells.astype(np.int64)


def gridification_map(cloud: PointCloud, step: float,
                      origin: Optional[Sequence[float]] = None) -> Tuple[Grid, np.ndarray]:
    """
    Gridify a cloud and report which grid row each point lands in.

    Args:
        cloud: Ordered point cloud
        step: Lattice step mu
        origin: Translation z, configured default when omitted

    Returns:
        Tuple of (grid ordered by smallest source index, row of each point)
    """
    step = float(step)
    if not step > 0:
        logger.error(f"Non-positive grid interval: {step}")
        raise InvalidParameterError(f"grid interval must be positive, got {step}")
    origin = _resolve_origin(cloud.dim, origin)
    if len(cloud) == 0:
        empty = np.empty((0, cloud.dim), dtype=np.int64)
        return Grid(step=step, origin=origin, cells=empty, sources=np.empty(0, dtype=np.int64)), np.empty(0, np.int64)

    cells = floor_cells(cloud.points, step, origin)
    _, first, inverse = np.unique(cells, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    order = np.argsort(first, kind='stable')
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    sources = first[order]
    grid = Grid(step=step, origin=origin, cells=cells[sources], sources=sources)
    return grid, rank[inverse]


def gridification(cloud: PointCloud, step: float, origin: Optional[Sequence[float]] = None) -> Grid:
    """
    Map every point to the lattice cell floor((x - z) / mu).

    Args:
        cloud: Ordered point cloud
        step: Lattice step mu
        origin: Translation z, configured default when omitted

    Returns:
        Grid whose rows follow the smallest source index of each cell
    """
    grid, _ = gridification_map(cloud, step, origin)
    logger.info(f"Gridification with interval {grid.step}: {len(cloud)} points in, {len(grid)} cells out")
    return grid


def _require_full_lattice(grid: Grid, operation: str) -> None:
    if grid.halved:
        logger.error(f"{operation} requires a grid on the full lattice")
        raise LatticeError(f"{operation} requires a grid that is not halved")


def _halved_union(grid: Grid, offsets: Sequence[int]) -> Grid:
    """Halved grid made of 2c + y for every cell c and every y in offsets^N."""
    shifts = np.array(list(itertools.product(offsets, repeat=grid.dim)), dtype=np.int64)
    doubled = 2 * grid.cells
    if len(doubled) == 0:
        cells = np.empty((0, grid.dim), dtype=np.int64)
    else:
        cells = np.unique((doubled[:, None, :] + shifts[None, :, :]).reshape(-1, grid.dim), axis=0)
    return Grid(step=grid.step, origin=grid.origin, cells=cells, halved=True)


def grid_subdivision(grid: Grid) -> Grid:
    """
    Replace every cell by its 2^N corners on the half-step lattice.

    Args:
        grid: Grid on the full lattice

    Returns:
        Halved grid in lexicographic order
    """
    _require_full_lattice(grid, "Subdivision")
    result = _halved_union(grid, (0, 1))
    logger.info(f"Subdivision: {len(grid)} cells in, {len(result)} halved cells out")
    return result


def thickening(grid: Grid) -> Grid:
    """
    All half-step lattice points within sup-distance mu/2 of a grid cell.

    Args:
        grid: Grid on the full lattice

    Returns:
        Halved grid in lexicographic order
    """
    _require_full_lattice(grid, "Thickening")
    result = _halved_union(grid, (-1, 0, 1))
    logger.info(f"Thickening: {len(grid)} cells in, {len(result)} halved cells out")
    return result


def complement(grid: Grid, buffer: int = 1) -> Grid:
    """
    Lattice cells of the bounding box, grown by buffer, that are not in the grid.

    Args:
        grid: Nonempty grid on the full lattice
        buffer: Number of cells added to the box on every side

    Returns:
        Grid in lexicographic order with the same step and origin

    Raises:
        EmptyInputError: If the grid is empty
        InvalidParameterError: If buffer is negative or not an integer
    """
    _require_full_lattice(grid, "Complement")
    if len(grid) == 0:
        logger.error("Complement requested for an empty grid")
        raise EmptyInputError("complement of an empty grid has no bounding box")
    if int(buffer) != buffer or buffer < 0:
        logger.error(f"Invalid complement buffer: {buffer}")
        raise InvalidParameterError(f"buffer must be a non-negative integer, got {buffer}")

    occupied, low = grid.occupancy(padding=int(buffer))
    cells = np.argwhere(~occupied).astype(np.int64) + low
    result = Grid(step=grid.step, origin=grid.origin, cells=cells)
    logger.info(f"Complement with buffer {buffer}: {len(grid)} cells in, {len(result)} cells out")
    return result
