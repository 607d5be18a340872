"""
Synthetic Data Module
Seeded samplers for the planar test shape, random clouds and random grids.

Every sampler draws from numpy's PCG64 generator (``np.random.default_rng``),
so a seed reproduces the same output on every platform.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config.config import config
from topology.core import Grid, PointCloud
from topology.exceptions import InvalidParameterError
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# Rejection rounds before a shape is declared empty
_MAX_ROUNDS = 1000


@dataclass(frozen=True)
class Rectangle:
    lower: Tuple[float, float]
    upper: Tuple[float, float]
    weight: float = 1.0

    @property
    def area(self) -> float:
        return (self.upper[0] - self.lower[0]) * (self.upper[1] - self.lower[1])

    def contains(self, points: np.ndarray) -> np.ndarray:
        lower, upper = np.asarray(self.lower), np.asarray(self.upper)
        return np.all((points >= lower) & (points <= upper), axis=1)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(count, 2))


@dataclass(frozen=True)
class Disk:
    center: Tuple[float, float]
    radius: float
    weight: float = 1.0

    @property
    def area(self) -> float:
        return math.pi * self.radius ** 2

    def contains(self, points: np.ndarray) -> np.ndarray:
        return np.sum((points - np.asarray(self.center)) ** 2, axis=1) <= self.radius ** 2

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        radii = self.radius * np.sqrt(rng.random(count))
        angles = rng.uniform(0.0, 2.0 * math.pi, count)
        return np.asarray(self.center) + np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


@dataclass(frozen=True)
class ShapeParams:
    """
    Planar shape: union of weighted rectangles and disks minus disk holes.

    A region is chosen with probability proportional to weight times area, so
    the weight is a density multiplier.
    """

    rectangles: Tuple[Rectangle, ...] = ()
    disks: Tuple[Disk, ...] = ()
    holes: Tuple[Disk, ...] = ()
    noise: float = 0.0
    regions: Tuple[Any, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'regions', tuple(self.rectangles) + tuple(self.disks))
        self.validate()

    def validate(self) -> None:
        """
        Check the shape parameters.

        Raises:
            InvalidParameterError: If a region is degenerate, a weight is not positive or noise is negative
        """
        if not self.regions:
            raise InvalidParameterError("shape needs at least one rectangle or disk")
        for rectangle in self.rectangles:
            if not (rectangle.lower[0] < rectangle.upper[0] and rectangle.lower[1] < rectangle.upper[1]):
                raise InvalidParameterError(f"rectangle {rectangle} must have lower < upper")
        for disk in self.disks + self.holes:
            if not disk.radius > 0:
                raise InvalidParameterError(f"disk {disk} must have a positive radius")
        if any(not region.weight > 0 for region in self.regions):
            raise InvalidParameterError("region weights must be positive")
        if not self.noise >= 0:
            raise InvalidParameterError(f"noise must be non-negative, got {self.noise}")

    @classmethod
    def from_settings(cls, settings: Dict[str, Any]) -> 'ShapeParams':
        """
        Build shape parameters from a configuration mapping.

        Args:
            settings: Mapping with rectangles, disks, holes and noise keys

        Returns:
            ShapeParams instance
        """
        try:
            rectangles = tuple(
                Rectangle(tuple(item['lower']), tuple(item['upper']), float(item.get('weight', 1.0)))
                for item in settings.get('rectangles', []) or []
            )
            disks = tuple(
                Disk(tuple(item['center']), float(item['radius']), float(item.get('weight', 1.0)))
                for item in settings.get('disks', []) or []
            )
            holes = tuple(Disk(tuple(item['center']), float(item['radius'])) for item in settings.get('holes', []) or [])
        except (KeyError, TypeError) as error:
            logger.error(f"Invalid shape settings: {error}")
            raise InvalidParameterError(f"invalid shape settings: {error}") from error
        return cls(rectangles, disks, holes, float(settings.get('noise', 0.0)))

    def inside(self, points: np.ndarray) -> np.ndarray:
        """Mask of points inside some region and outside every hole."""
        covered = np.zeros(len(points), dtype=bool)
        for region in self.regions:
            covered |= region.contains(points)
        for hole in self.holes:
            covered &= ~hole.contains(points)
        return covered

    def probabilities(self) -> np.ndarray:
        masses = np.array([region.weight * region.area for region in self.regions])
        return masses / masses.sum()


def generate_synthetic(seed: int, n_target: Optional[int] = None, shape: Optional[ShapeParams] = None) -> PointCloud:
    """
    Sample a planar cloud with density varying across the shape.

    Each round draws a batch of region choices, samples each region uniformly,
    adds uniform noise in [-noise, noise]^2 and keeps the points that land in
    the shape. The first n_target accepted points are returned.

    Args:
        seed: Generator seed
        n_target: Number of points, configured sample size when omitted
        shape: Shape parameters, configured shape when omitted

    Returns:
        PointCloud with n_target points

    Raises:
        InvalidParameterError: If n_target is below 1 or the shape accepts no points
    """
    settings = config.get_synthetic_settings()
    n_target = int(n_target if n_target is not None else settings.get('n_points', 1489))
    if n_target < 1:
        logger.error(f"Invalid synthetic sample size: {n_target}")
        raise InvalidParameterError(f"n_target must be at least 1, got {n_target}")
    shape = shape or ShapeParams.from_settings(settings)

    rng = np.random.default_rng(seed)
    probabilities = shape.probabilities()
    accepted: List[np.ndarray] = []
    total = 0
    for _ in range(_MAX_ROUNDS):
        batch = max(2 * (n_target - total), 64)
        choice = rng.choice(len(shape.regions), size=batch, p=probabilities)
        samples = np.empty((batch, 2))
        for position, region in enumerate(shape.regions):
            chosen = np.flatnonzero(choice == position)
            samples[chosen] = region.sample(rng, len(chosen))
        samples += rng.uniform(-shape.noise, shape.noise, size=samples.shape) if shape.noise else 0.0
        kept = samples[shape.inside(samples)]
        accepted.append(kept)
        total += len(kept)
        if total >= n_target:
            points = np.concatenate(accepted)[:n_target]
            logger.info(f"Generated {n_target} synthetic points with seed {seed}")
            return PointCloud(points)
    logger.error("Synthetic shape rejected every sample")
    raise InvalidParameterError("shape accepts no points; check holes against regions")


def random_cloud(seed: int, n_points: int, dim: int) -> PointCloud:
    """Uniform cloud in the unit cube [0, 1)^dim."""
    rng = np.random.default_rng(seed)
    return PointCloud(rng.random((n_points, dim)))


def random_grid(seed: int, max_cells: int, dim: int = 2) -> Grid:
    """
    Random lattice set of 1..max_cells distinct cells inside a box roughly twice
    their number, so holes and several components are common.

    Args:
        seed: Generator seed
        max_cells: Largest number of cells
        dim: Grid dimension

    Returns:
        Grid with unit step and zero origin
    """
    rng = np.random.default_rng(seed)
    count = int(rng.integers(1, max_cells + 1))
    side = max(2, int(math.ceil((2 * count) ** (1.0 / dim))))
    flat = rng.choice(side ** dim, size=count, replace=False)
    cells = np.column_stack(np.unravel_index(flat, (side,) * dim)).astype(np.int64)
    return Grid(step=1.0, origin=(0.0,) * dim, cells=cells)
