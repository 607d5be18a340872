"""
Complexes Module
Vietoris-Rips skeleta of point clouds and full cubical complexes of lattice sets
"""
import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from topology.core import Cell, Grid, PointCloud, pairwise_distances, row_distances
from topology.exceptions import InvalidParameterError
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# A k-cube is its lowest corner plus the k axes it spans
Cube = Tuple[Cell, Tuple[int, ...]]

# Largest dimension for which cube lists are materialized
_MATERIALIZE_MAX_DIM = 3


def search_radius(radius: float) -> float:
    """Search radius slightly above radius so the exact closed test decides membership."""
    return radius * (1.0 + 1e-9) + np.finfo(np.float64).tiny


def radius_pairs(points: np.ndarray, radius: float) -> np.ndarray:
    """
    All index pairs (i, j), i < j, with distance at most radius.

    The KD-tree only prunes candidates; membership is decided by the exact
    distance formula, so results agree with exhaustive enumeration.

    Args:
        points: Coordinates of shape (n, N)
        radius: Closed search radius

    Returns:
        Int64 array of shape (m, 2) sorted lexicographically
    """
    if len(points) < 2:
        return np.empty((0, 2), dtype=np.int64)
    tree = cKDTree(points)
    pairs = tree.query_pairs(search_radius(radius), output_type='ndarray').astype(np.int64)
    if len(pairs) == 0:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.sort(pairs, axis=1)
    keep = row_distances(points[pairs[:, 0]], points[pairs[:, 1]]) <= radius
    pairs = pairs[keep]
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order]


def _triangles(points: np.ndarray, edges: np.ndarray, radius: float) -> np.ndarray:
    """Triangles (i, j, k), i < j < k, in lexicographic order, from sorted edges."""
    if len(edges) < 3:
        return np.empty((0, 3), dtype=np.int64)
    starts = np.searchsorted(edges[:, 0], np.arange(len(points) + 1))
    blocks: List[np.ndarray] = []
    for i in range(len(points)):
        neighbours = edges[starts[i]:starts[i + 1], 1]
        if len(neighbours) < 2:
            continue
        coords = points[neighbours]
        close = np.triu(pairwise_distances(coords, coords) <= radius, k=1)
        first, second = np.nonzero(close)
        if len(first) == 0:
            continue
        block = np.empty((len(first), 3), dtype=np.int64)
        block[:, 0] = i
        block[:, 1] = neighbours[first]
        block[:, 2] = neighbours[second]
        blocks.append(block)
    if not blocks:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(blocks)


@dataclass(frozen=True, eq=False)
class VRSkeleton:
    """Edges and triangles of the Vietoris-Rips complex at a closed radius."""

    radius: float
    edges: np.ndarray
    triangles: np.ndarray

    def edge_list(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.edges]

    def triangle_list(self) -> List[Tuple[int, int, int]]:
        return [(int(i), int(j), int(k)) for i, j, k in self.triangles]


def vr_skeleton(cloud: PointCloud, radius: float, max_dim: int = 2) -> VRSkeleton:
    """
    Enumerate the 1- or 2-skeleton of the Vietoris-Rips complex.

    Args:
        cloud: Ordered point cloud
        radius: Closed radius, pairs with distance <= radius are edges
        max_dim: 1 for edges only, 2 to include triangles

    Returns:
        VRSkeleton with lexicographically ordered edges and triangles

    Raises:
        InvalidParameterError: If radius is negative or max_dim is not 1 or 2
    """
    radius = float(radius)
    if not radius >= 0:
        logger.error(f"Negative VR radius: {radius}")
        raise InvalidParameterError(f"radius must be non-negative, got {radius}")
    if max_dim not in (1, 2):
        logger.error(f"Unsupported max_dim: {max_dim}")
        raise InvalidParameterError(f"max_dim must be 1 or 2, got {max_dim}")

    edges = radius_pairs(cloud.points, radius)
    if max_dim == 2:
        triangles = _triangles(cloud.points, edges, radius)
    else:
        triangles = np.empty((0, 3), dtype=np.int64)
    edges.setflags(write=False)
    triangles.setflags(write=False)
    logger.debug(f"VR skeleton at radius {radius}: {len(edges)} edges, {len(triangles)} triangles")
    return VRSkeleton(radius=radius, edges=edges, triangles=triangles)


# ============================================================================
# Cubical complexes
# ============================================================================

@dataclass(frozen=True, eq=False)
class CubicalComplex:
    """
    Full cubical complex generated by a lattice set.

    A k-cube is present iff all 2^k corners are grid cells. ``counts[k]`` is the
    number of k-cubes; ``cubes[k]`` lists them for dimensions up to 3.
    """

    grid: Grid
    counts: Tuple[int, ...]
    cubes: Optional[Tuple[Tuple[Cube, ...], ...]] = None

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def vertices(self) -> int:
        return self.counts[0]

    @property
    def edges(self) -> int:
        return self.counts[1] if len(self.counts) > 1 else 0

    @property
    def squares(self) -> int:
        return self.counts[2] if len(self.counts) > 2 else 0

    def euler_characteristic(self) -> int:
        return int(sum((-1) ** k * count for k, count in enumerate(self.counts)))

    def iter_cubes(self, k: int) -> Iterator[Cube]:
        if self.cubes is None:
            raise InvalidParameterError(f"cube lists are only kept up to dimension {_MATERIALIZE_MAX_DIM}")
        return iter(self.cubes[k])


def cube_corners(cube: Cube) -> List[Cell]:
    """All 2^k lattice corners of a cube, in lexicographic offset order."""
    anchor, axes = cube
    corners = []
    for offsets in itertools.product((0, 1), repeat=len(axes)):
        corner = list(anchor)
        for axis, offset in zip(axes, offsets):
            corner[axis] += offset
        corners.append(tuple(corner))
    return corners


def cube_faces(cube: Cube) -> List[Cube]:
    """The 2k codimension-one faces of a cube."""
    anchor, axes = cube
    faces = []
    for position, axis in enumerate(axes):
        rest = axes[:position] + axes[position + 1:]
        shifted = list(anchor)
        shifted[axis] += 1
        faces.append((anchor, rest))
        faces.append((tuple(shifted), rest))
    return faces


def _cube_mask(occupied: np.ndarray, axes: Tuple[int, ...]) -> np.ndarray:
    """Anchors whose cube over the given axes has every corner occupied."""
    shape = occupied.shape
    mask = None
    for offsets in itertools.product((0, 1), repeat=len(axes)):
        index = [slice(None)] * occupied.ndim
        for axis, offset in zip(axes, offsets):
            index[axis] = slice(offset, shape[axis] - 1 + offset)
        view = occupied[tuple(index)]
        mask = view.copy() if mask is None else mask & view
    return mask


def cubical_complex(grid: Grid) -> CubicalComplex:
    """
    Build the full cubical complex of a grid.

    Args:
        grid: Lattice set, halved or not

    Returns:
        CubicalComplex with per-dimension counts
    """
    dim = grid.dim
    if len(grid) == 0:
        empty_cubes = tuple(() for _ in range(dim + 1)) if dim <= _MATERIALIZE_MAX_DIM else None
        return CubicalComplex(grid=grid, counts=(0,) * (dim + 1), cubes=empty_cubes)

    occupied, low = grid.occupancy()
    materialize = dim <= _MATERIALIZE_MAX_DIM
    counts = [len(grid)]
    cubes: List[Tuple[Cube, ...]] = [tuple((cell, ()) for cell in sorted(grid))] if materialize else []
    for k in range(1, dim + 1):
        count = 0
        found: List[Cube] = []
        for axes in itertools.combinations(range(dim), k):
            mask = _cube_mask(occupied, axes)
            count += int(mask.sum())
            if materialize:
                for anchor in np.argwhere(mask) + low:
                    found.append((tuple(int(value) for value in anchor), axes))
        counts.append(count)
        if materialize:
            cubes.append(tuple(sorted(found)))
    logger.debug(f"Cubical complex counts for {len(grid)} cells: {counts}")
    return CubicalComplex(grid=grid, counts=tuple(counts), cubes=tuple(cubes) if materialize else None)
