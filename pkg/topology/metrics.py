"""
Metrics Module
Bottleneck distance between persistence diagrams and Hausdorff distance between clouds
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.spatial.distance import directed_hausdorff

from config.config import config
from topology.core import Interval, Matching, PersistenceDiagram, PointCloud
from topology.exceptions import DimensionMismatchError, EmptyInputError, InvalidParameterError
from utils.logger import Logger


logger = Logger.get_logger(__name__)

METRICS = ('chebyshev', 'euclidean')

# Distance from a point (b, d) to the diagonal is (d - b) times this factor
_DIAGONAL_FACTOR = {'chebyshev': 0.5, 'euclidean': 1.0 / math.sqrt(2.0)}


def _resolve_metric(metric: Optional[str]) -> str:
    metric = metric or config.get_bottleneck_metric()
    if metric not in METRICS:
        logger.error(f"Unknown bottleneck metric: {metric}")
        raise InvalidParameterError(f"metric must be one of {', '.join(METRICS)}, got {metric}")
    return metric


# ============================================================================
# Assignment costs
# ============================================================================

def pair_cost(a: Interval, b: Interval, metric: str = 'chebyshev') -> float:
    """
    Cost of matching two intervals.

    Two infinite intervals cost the difference of their births; an infinite
    interval never matches a finite one at finite cost.
    """
    if a.is_infinite or b.is_infinite:
        return abs(a.birth - b.birth) if a.is_infinite and b.is_infinite else math.inf
    birth_gap, death_gap = abs(a.birth - b.birth), abs(a.death - b.death)
    if metric == 'chebyshev':
        return max(birth_gap, death_gap)
    return math.hypot(birth_gap, death_gap)


def diagonal_cost(interval: Interval, metric: str = 'chebyshev') -> float:
    """Cost of matching an interval to its nearest diagonal point."""
    return (interval.death - interval.birth) * _DIAGONAL_FACTOR[metric]


def matching_cost(a: PersistenceDiagram, b: PersistenceDiagram, matching: Matching,
                  metric: Optional[str] = None) -> float:
    """
    Recompute the largest assignment cost of a matching.

    Args:
        a: First diagram
        b: Second diagram
        matching: Matching between positions of a and b
        metric: Ground metric name

    Returns:
        Max cost, 0 for an empty matching
    """
    metric = _resolve_metric(metric)
    costs = [pair_cost(a[i], b[j], metric) for i, j in matching.pairs]
    costs += [diagonal_cost(a[i], metric) for i in matching.diagonal_a]
    costs += [diagonal_cost(b[j], metric) for j in matching.diagonal_b]
    return max(costs, default=0.0)


# ============================================================================
# Bottleneck
# ============================================================================

def _match_infinite(a: PersistenceDiagram, b: PersistenceDiagram) -> Tuple[List[Tuple[int, int]], List[int], List[int]]:
    """Pair infinite intervals by sorted birth; surplus ones go to the diagonal."""
    side_a = sorted(a.infinite_positions(), key=lambda position: (a[position].birth, position))
    side_b = sorted(b.infinite_positions(), key=lambda position: (b[position].birth, position))
    shared = min(len(side_a), len(side_b))
    return list(zip(side_a[:shared], side_b[:shared])), side_a[shared:], side_b[shared:]


def _finite_zero_birth(a: PersistenceDiagram, b: PersistenceDiagram,
                       side_a: Sequence[int], side_b: Sequence[int],
                       metric: str) -> Tuple[List[Tuple[int, int]], List[int], List[int]]:
    """
    Optimal finite matching when every birth is zero.

    Some optimal matching pairs the m longest intervals of each side in sorted
    order and sends the rest to the diagonal; scan every m.
    """
    deaths_a = np.array([a[position].death for position in side_a])
    deaths_b = np.array([b[position].death for position in side_b])
    order_a = np.argsort(-deaths_a, kind='stable')
    order_b = np.argsort(-deaths_b, kind='stable')
    sorted_a, sorted_b = deaths_a[order_a], deaths_b[order_b]
    factor = _DIAGONAL_FACTOR[metric]
    shared = min(len(sorted_a), len(sorted_b))

    gaps = np.abs(sorted_a[:shared] - sorted_b[:shared])
    paired_max = np.concatenate([[0.0], np.maximum.accumulate(gaps)]) if shared else np.zeros(1)
    leftover_a = np.append(sorted_a, 0.0)[:shared + 1] * factor
    leftover_b = np.append(sorted_b, 0.0)[:shared + 1] * factor
    values = np.maximum(paired_max, np.maximum(leftover_a, leftover_b))
    paired = int(np.argmin(values))

    side_a, side_b = np.asarray(side_a), np.asarray(side_b)
    pairs = [(int(side_a[order_a[k]]), int(side_b[order_b[k]])) for k in range(paired)]
    return pairs, [int(p) for p in side_a[order_a[paired:]]], [int(p) for p in side_b[order_b[paired:]]]


def _finite_general(a: PersistenceDiagram, b: PersistenceDiagram,
                    side_a: Sequence[int], side_b: Sequence[int],
                    metric: str) -> Tuple[List[Tuple[int, int]], List[int], List[int]]:
    """
    Optimal finite matching by binary search over candidate costs.

    Rows are the points of a followed by diagonal copies of the points of b;
    columns are the points of b followed by diagonal copies of the points of a.
    A threshold is feasible when the graph of entries within it has a perfect
    matching.
    """
    rows, cols = len(side_a), len(side_b)
    size = rows + cols
    if size == 0:
        return [], [], []

    costs = np.full((size, size), np.inf)
    for r, i in enumerate(side_a):
        for c, j in enumerate(side_b):
            costs[r, c] = pair_cost(a[i], b[j], metric)
        costs[r, cols + r] = diagonal_cost(a[i], metric)
    for c, j in enumerate(side_b):
        costs[rows + c, c] = diagonal_cost(b[j], metric)
    costs[rows:, cols:] = 0.0

    candidates = np.unique(costs[np.isfinite(costs)])
    low, high = 0, len(candidates) - 1
    best = None
    while low <= high:
        middle = (low + high) // 2
        allowed = csr_matrix((costs <= candidates[middle]).astype(np.int8))
        assignment = maximum_bipartite_matching(allowed, perm_type='column')
        if np.all(assignment >= 0):
            best, high = assignment, middle - 1
        else:
            low = middle + 1

    pairs, diagonal_a, diagonal_b = [], [], []
    for r, c in enumerate(best):
        if r < rows:
            if c < cols:
                pairs.append((int(side_a[r]), int(side_b[c])))
            else:
                diagonal_a.append(int(side_a[r]))
        elif c < cols:
            diagonal_b.append(int(side_b[c]))
    return pairs, sorted(diagonal_a), sorted(diagonal_b)


def bottleneck(a: PersistenceDiagram, b: PersistenceDiagram, metric: Optional[str] = None,
               fast_path: bool = True) -> Tuple[float, Matching]:
    """
    Bottleneck distance with an optimal witness matching.

    Infinite intervals are matched among themselves by sorted birth; if their
    counts differ the distance is infinite. Finite intervals match each other
    or the diagonal.

    Args:
        a: First diagram
        b: Second diagram
        metric: 'chebyshev' or 'euclidean', configured default when omitted
        fast_path: Use the sorted-deaths solver when every birth is zero

    Returns:
        Tuple of (distance, witness matching whose cost equals the distance)
    """
    metric = _resolve_metric(metric)
    infinite_pairs, infinite_a, infinite_b = _match_infinite(a, b)
    finite_a, finite_b = a.finite_positions(), b.finite_positions()

    zero_births = all(a[i].birth == 0 for i in finite_a) and all(b[j].birth == 0 for j in finite_b)
    solver = _finite_zero_birth if fast_path and zero_births else _finite_general
    pairs, diagonal_a, diagonal_b = solver(a, b, finite_a, finite_b, metric)

    matching = Matching(
        pairs=tuple(sorted(infinite_pairs + pairs)),
        diagonal_a=tuple(sorted(infinite_a + diagonal_a)),
        diagonal_b=tuple(sorted(infinite_b + diagonal_b)),
        cost=0.0,
    )
    value = matching_cost(a, b, matching, metric)
    matching = Matching(matching.pairs, matching.diagonal_a, matching.diagonal_b, value)
    logger.debug(f"Bottleneck ({metric}) between {len(a)} and {len(b)} intervals: {value}")
    return value, matching


def hausdorff_distance(x: PointCloud, y: PointCloud) -> float:
    """
    Symmetric Hausdorff distance between two clouds.

    Raises:
        EmptyInputError: If either cloud is empty
        DimensionMismatchError: If dimensions differ
    """
    if len(x) == 0 or len(y) == 0:
        logger.error("Hausdorff distance requested with an empty cloud")
        raise EmptyInputError("Hausdorff distance needs two nonempty clouds")
    if x.dim != y.dim:
        raise DimensionMismatchError(f"cannot compare clouds of dimension {x.dim} and {y.dim}")
    return max(directed_hausdorff(x.points, y.points)[0], directed_hausdorff(y.points, x.points)[0])
