"""
Core Module
Domain value objects shared by every part of the toolkit: ordered point clouds,
exact-lattice grids, persistence intervals and diagrams, and diagram matchings.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from topology.exceptions import DimensionMismatchError, EmptyInputError, InvalidParameterError, LatticeError
from utils.logger import Logger


logger = Logger.get_logger(__name__)

Cell = Tuple[int, ...]

# Rows per block when all pairwise distances would not fit comfortably in memory
_DISTANCE_BLOCK = 2048


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


# ============================================================================
# Point clouds
# ============================================================================

@dataclass(frozen=True, eq=False)
class PointCloud:
    """
    Ordered finite set of points in R^N.

    Row order is semantic: it drives the elder rule and sparsification, so no
    operation permutes rows. Instances are immutable.
    """

    points: np.ndarray

    def __post_init__(self):
        array = np.array(self.points, dtype=np.float64, copy=True)
        if array.ndim != 2:
            raise DimensionMismatchError(f"points must form a 2-D array, got shape {array.shape}")
        if array.shape[1] < 1:
            raise DimensionMismatchError("points must have dimension N >= 1")
        object.__setattr__(self, 'points', _readonly(array))

    @classmethod
    def from_array(cls, data: Iterable[Sequence[float]], dim: Optional[int] = None) -> 'PointCloud':
        """
        Build a cloud from a list of coordinate tuples or a NumPy array.

        Args:
            data: Rows of coordinates
            dim: Dimension to use when data is empty

        Returns:
            PointCloud instance
        """
        array = np.asarray(list(data) if not isinstance(data, np.ndarray) else data, dtype=np.float64)
        if array.size == 0:
            return cls.empty(dim or 1)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        try:
            return cls(array)
        except ValueError as error:
            logger.error(f"Invalid point data: {error}")
            raise

    @classmethod
    def empty(cls, dim: int) -> 'PointCloud':
        """Return the empty cloud of dimension dim."""
        return cls(np.empty((0, dim), dtype=np.float64))

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def __iter__(self) -> Iterator[Tuple[float, ...]]:
        for row in self.points:
            yield tuple(float(value) for value in row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(np.array_equal(self.points, other.points))

    __hash__ = None  # type: ignore[assignment]

    def point(self, index: int) -> Tuple[float, ...]:
        """Coordinates of the point at a given position."""
        return tuple(float(value) for value in self.points[index])

    def to_array(self) -> np.ndarray:
        """Writable copy of the coordinates."""
        return np.array(self.points, copy=True)

    def take(self, indices: Sequence[int]) -> 'PointCloud':
        """Sub-cloud made of the given positions, in the given order."""
        return PointCloud(self.points[np.asarray(indices, dtype=np.int64)].reshape(-1, self.dim))

    def __repr__(self) -> str:
        return f"PointCloud(n={len(self)}, dim={self.dim})"


# ============================================================================
# Grids
# ============================================================================

def unique_rows(cells: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Deduplicate integer rows keeping the first occurrence of each.

    Args:
        cells: Integer array of shape (m, N)

    Returns:
        Tuple of (unique rows in first-occurrence order, position of each kept row in the input)
    """
    if len(cells) == 0:
        return cells.reshape(0, cells.shape[1] if cells.ndim == 2 else 0), np.empty(0, dtype=np.int64)
    _, first = np.unique(cells, axis=0, return_index=True)
    first = np.sort(first)
    return cells[first], first


@dataclass(frozen=True, eq=False)
class Grid:
    """
    Finite subset of the lattice origin + step * Z^N, or of the half-step
    lattice origin + (step / 2) * Z^N when halved.

    Cells are stored as exact int64 coordinates. Row order is the grid order
    used by the elder rule; ``sources`` optionally records, per row, the
    smallest index of an input point mapped to that cell.
    """

    step: float
    origin: Tuple[float, ...]
    cells: np.ndarray
    halved: bool = False
    sources: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        step = float(self.step)
        if not step > 0 or not math.isfinite(step):
            raise InvalidParameterError(f"grid step must be positive and finite, got {self.step}")
        origin = tuple(float(value) for value in self.origin)
        cells = np.array(self.cells, dtype=np.int64, copy=True)
        if cells.size == 0:
            cells = cells.reshape(0, len(origin))
        if cells.ndim != 2 or cells.shape[1] != len(origin):
            raise DimensionMismatchError(
                f"cells of shape {cells.shape} do not match origin of dimension {len(origin)}"
            )
        if len(origin) < 1:
            raise DimensionMismatchError("grid dimension must be at least 1")
        if len(cells) and len(np.unique(cells, axis=0)) != len(cells):
            raise LatticeError("grid cells must be unique")
        sources = self.sources
        if sources is not None:
            sources = np.array(sources, dtype=np.int64, copy=True)
            if sources.shape != (len(cells),):
                raise DimensionMismatchError("one source index is required per cell")
            sources = _readonly(sources)
        object.__setattr__(self, 'step', step)
        object.__setattr__(self, 'origin', origin)
        object.__setattr__(self, 'cells', _readonly(cells))
        object.__setattr__(self, 'halved', bool(self.halved))
        object.__setattr__(self, 'sources', sources)

    @classmethod
    def from_cells(cls, cells: Iterable[Sequence[int]], step: float = 1.0,
                   origin: Optional[Sequence[float]] = None, halved: bool = False) -> 'Grid':
        """
        Build a grid from integer cells, dropping repeated cells.

        Args:
            cells: Integer lattice coordinates
            step: Lattice step mu
            origin: Translation z, zero vector by default
            halved: Whether the cells live on the half-step lattice

        Returns:
            Grid instance in first-occurrence order
        """
        array = np.asarray(list(cells) if not isinstance(cells, np.ndarray) else cells, dtype=np.int64)
        if origin is None:
            if array.size == 0:
                raise DimensionMismatchError("origin is required to build an empty grid")
            origin = (0.0,) * array.shape[1]
        if array.size == 0:
            array = array.reshape(0, len(origin))
        array, _ = unique_rows(array)
        return cls(step=step, origin=tuple(origin), cells=array, halved=halved)

    @classmethod
    def from_points(cls, points: np.ndarray, step: float, origin: Sequence[float],
                    halved: bool = False, tolerance: float = 1e-9) -> 'Grid':
        """
        Recover lattice cells from embedded real coordinates.

        Args:
            points: Real coordinates lying on the lattice
            step: Lattice step mu
            origin: Translation z
            halved: Whether the coordinates are on the half-step lattice
            tolerance: Relative tolerance for the on-lattice check

        Returns:
            Grid whose rows follow the input order

        Raises:
            LatticeError: If a point is off the lattice
        """
        points = np.asarray(points, dtype=np.float64)
        origin = tuple(float(value) for value in origin)
        if points.size == 0:
            return cls(step=step, origin=origin, cells=np.empty((0, len(origin)), dtype=np.int64), halved=halved)
        if points.ndim != 2 or points.shape[1] != len(origin):
            raise DimensionMismatchError(
                f"points of shape {points.shape} do not match origin of dimension {len(origin)}"
            )
        lattice_step = step / 2.0 if halved else step
        scaled = (points - np.asarray(origin)) / lattice_step
        cells = np.rint(scaled)
        if np.any(np.abs(scaled - cells) > tolerance * np.maximum(1.0, np.abs(scaled))):
            logger.error(f"Points are not on the lattice with step {lattice_step} and origin {origin}")
            raise LatticeError(f"points are not on the lattice with step {lattice_step}")
        cells = cells.astype(np.int64)
        unique, _ = unique_rows(cells)
        if len(unique) != len(cells):
            raise LatticeError("grid file repeats a lattice point")
        return cls(step=step, origin=origin, cells=cells, halved=halved)

    @property
    def dim(self) -> int:
        return len(self.origin)

    @property
    def lattice_step(self) -> float:
        """Spacing of the lattice the cells live on."""
        return self.step / 2.0 if self.halved else self.step

    def __len__(self) -> int:
        return int(self.cells.shape[0])

    def __iter__(self) -> Iterator[Cell]:
        for row in self.cells:
            yield tuple(int(value) for value in row)

    def embed(self) -> np.ndarray:
        """Real coordinates z + step * c (or z + (step/2) * c when halved)."""
        return np.asarray(self.origin, dtype=np.float64) + self.lattice_step * self.cells.astype(np.float64)

    def cell_set(self) -> FrozenSet[Cell]:
        """Cells as a set of integer tuples."""
        return frozenset(self)

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Componentwise minimum and maximum cell.

        Raises:
            EmptyInputError: If the grid is empty
        """
        if len(self) == 0:
            raise EmptyInputError("bounding box of an empty grid is undefined")
        return self.cells.min(axis=0), self.cells.max(axis=0)

    def occupancy(self, padding: int = 0) -> Tuple[np.ndarray, np.ndarray]:
        """
        Dense boolean occupancy array over the bounding box.

        Args:
            padding: Empty layers added on every side

        Returns:
            Tuple of (occupancy array, lattice coordinate of its [0, ..., 0] entry)
        """
        if len(self) == 0:
            return np.zeros((0,) * self.dim, dtype=bool), np.zeros(self.dim, dtype=np.int64)
        low, high = self.bounding_box()
        low = low - padding
        shape = tuple(int(extent) for extent in (high + padding - low + 1))
        occupied = np.zeros(shape, dtype=bool)
        occupied[tuple((self.cells - low).T)] = True
        return occupied, low

    def translated(self, offset: Sequence[int]) -> 'Grid':
        """Copy with every integer cell shifted by offset."""
        shift = np.asarray(offset, dtype=np.int64)
        return Grid(step=self.step, origin=self.origin, cells=self.cells + shift,
                    halved=self.halved, sources=self.sources)

    def __repr__(self) -> str:
        return f"Grid(n={len(self)}, dim={self.dim}, step={self.step}, halved={self.halved})"


# ============================================================================
# Persistence intervals, diagrams and matchings
# ============================================================================

@dataclass(frozen=True)
class Interval:
    """Half-open persistence interval [birth, death), death possibly +inf."""

    birth: float
    death: float
    source_index: Optional[int] = None

    def __post_init__(self):
        birth, death = float(self.birth), float(self.death)
        if math.isnan(birth) or math.isnan(death) or not birth <= death:
            raise InvalidParameterError(f"interval requires birth <= death, got [{birth}, {death})")
        if birth < 0:
            raise InvalidParameterError(f"interval birth must be non-negative, got {birth}")
        object.__setattr__(self, 'birth', birth)
        object.__setattr__(self, 'death', death)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of intervals in one homological degree."""

    intervals: Tuple[Interval, ...] = ()
    degree: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'intervals', tuple(self.intervals))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]], degree: int = 0) -> 'PersistenceDiagram':
        """
        Build a diagram from (birth, death) or (birth, death, source_index) rows.

        Args:
            pairs: Interval rows
            degree: Homological degree label

        Returns:
            PersistenceDiagram instance
        """
        intervals = []
        for row in pairs:
            source = int(row[2]) if len(row) > 2 and row[2] is not None else None
            intervals.append(Interval(float(row[0]), float(row[1]), source))
        return cls(tuple(intervals), degree)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __getitem__(self, position: int) -> Interval:
        return self.intervals[position]

    def finite_positions(self) -> List[int]:
        return [position for position, interval in enumerate(self.intervals) if not interval.is_infinite]

    def infinite_positions(self) -> List[int]:
        return [position for position, interval in enumerate(self.intervals) if interval.is_infinite]

    def deaths(self) -> np.ndarray:
        return np.array([interval.death for interval in self.intervals], dtype=np.float64)

    def position_by_source(self) -> Dict[int, int]:
        """Map source index to position, for diagrams that carry the elder-rule bijection."""
        return {
            interval.source_index: position
            for position, interval in enumerate(self.intervals)
            if interval.source_index is not None
        }

    def sorted_finite_deaths(self) -> np.ndarray:
        return np.sort(np.array([interval.death for interval in self.intervals if not interval.is_infinite]))


@dataclass(frozen=True)
class Matching:
    """
    Partial bijection between the positions of two diagrams.

    Every position of A appears exactly once across ``pairs`` and
    ``diagonal_a``; likewise for B. ``cost`` is the largest assignment cost
    under the ground metric the matching was built for.
    """

    pairs: Tuple[Tuple[int, int], ...]
    diagonal_a: Tuple[int, ...]
    diagonal_b: Tuple[int, ...]
    cost: float

    def __post_init__(self):
        object.__setattr__(self, 'pairs', tuple((int(a), int(b)) for a, b in self.pairs))
        object.__setattr__(self, 'diagonal_a', tuple(int(a) for a in self.diagonal_a))
        object.__setattr__(self, 'diagonal_b', tuple(int(b) for b in self.diagonal_b))
        object.__setattr__(self, 'cost', float(self.cost))

    def covers(self, size_a: int, size_b: int) -> bool:
        """Check that every interval of both diagrams is assigned exactly once."""
        side_a = sorted([a for a, _ in self.pairs] + list(self.diagonal_a))
        side_b = sorted([b for _, b in self.pairs] + list(self.diagonal_b))
        return side_a == list(range(size_a)) and side_b == list(range(size_b))


# ============================================================================
# Euclidean geometry
# ============================================================================

def distance(p: Sequence[float], q: Sequence[float]) -> float:
    """
    Euclidean distance between two points.

    Args:
        p: First point
        q: Second point

    Returns:
        Distance as a float

    Raises:
        DimensionMismatchError: If the points have different dimensions
    """
    a = np.asarray(p, dtype=np.float64).reshape(-1)
    b = np.asarray(q, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot measure between dimensions {a.size} and {b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def row_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances between matching rows of two arrays, with the same arithmetic as distance."""
    return np.sqrt(np.sum((a - b) ** 2, axis=-1))


def pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of distances between the rows of a and the rows of b."""
    return np.sqrt(np.sum((a[:, None, :] - b[None, :, :]) ** 2, axis=-1))


def diameter(cloud: PointCloud) -> float:
    """
    Largest pairwise distance of a cloud.

    Args:
        cloud: Point cloud

    Returns:
        Diameter, 0 for a single point

    Raises:
        EmptyInputError: If the cloud is empty
    """
    if len(cloud) == 0:
        logger.error("Diameter requested for an empty cloud")
        raise EmptyInputError("diameter of an empty cloud is undefined")
    points = cloud.points
    largest = 0.0
    for start in range(0, len(points), _DISTANCE_BLOCK):
        block = pairwise_distances(points[start:start + _DISTANCE_BLOCK], points)
        largest = max(largest, float(block.max()))
    return largest
