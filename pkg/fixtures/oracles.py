"""
Oracles Module
Brute-force reference computations the fast implementations are checked against
"""
import itertools
import math
from collections import deque
from typing import List, Sequence, Set, Tuple

from topology.core import Grid, PersistenceDiagram, PointCloud, distance
from topology.metrics import diagonal_cost, pair_cost


def exhaustive_skeleton(cloud: PointCloud, radius: float,
                        max_dim: int = 2) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int, int]]]:
    """
    All VR edges and triangles at a radius by checking every pair and triple.

    Args:
        cloud: Point cloud
        radius: Closed radius
        max_dim: 1 or 2

    Returns:
        Tuple of (edges, triangles) in lexicographic order
    """
    points = list(cloud)
    close = {
        (i, j) for i, j in itertools.combinations(range(len(points)), 2)
        if distance(points[i], points[j]) <= radius
    }
    edges = sorted(close)
    triangles = []
    if max_dim == 2:
        triangles = [
            (i, j, k) for i, j, k in itertools.combinations(range(len(points)), 3)
            if (i, j) in close and (i, k) in close and (j, k) in close
        ]
    return edges, triangles


def kruskal_deaths(cloud: PointCloud) -> List[float]:
    """
    Sorted finite degree-0 deaths from a plain Kruskal run over all pairs.

    Args:
        cloud: Nonempty point cloud

    Returns:
        Half lengths of the minimum spanning tree edges, ascending
    """
    points = list(cloud)
    parent = list(range(len(points)))

    def root(element: int) -> int:
        while parent[element] != element:
            element = parent[element]
        return element

    edges = sorted(
        (distance(points[i], points[j]), i, j) for i, j in itertools.combinations(range(len(points)), 2)
    )
    deaths = []
    for length, i, j in edges:
        a, b = root(i), root(j)
        if a != b:
            parent[max(a, b)] = min(a, b)
            deaths.append(length / 2.0)
    return sorted(deaths)


def _infinite_cost(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    births_a = sorted(a[p].birth for p in a.infinite_positions())
    births_b = sorted(b[p].birth for p in b.infinite_positions())
    if len(births_a) != len(births_b):
        return math.inf
    return max((abs(x - y) for x, y in zip(births_a, births_b)), default=0.0)


def brute_bottleneck(a: PersistenceDiagram, b: PersistenceDiagram, metric: str = 'chebyshev') -> float:
    """
    Bottleneck distance by enumerating every partial matching of the finite points.

    Only practical for a handful of finite intervals per side.

    Args:
        a: First diagram
        b: Second diagram
        metric: Ground metric

    Returns:
        Smallest largest-assignment cost over all matchings
    """
    infinite = _infinite_cost(a, b)
    if math.isinf(infinite):
        return math.inf
    side_a = [a[p] for p in a.finite_positions()]
    side_b = [b[p] for p in b.finite_positions()]
    best = math.inf

    def search(position: int, used: Set[int], worst: float) -> None:
        nonlocal best
        if worst >= best:
            return
        if position == len(side_a):
            leftover = [diagonal_cost(side_b[j], metric) for j in range(len(side_b)) if j not in used]
            best = min(best, max([worst] + leftover))
            return
        search(position + 1, used, max(worst, diagonal_cost(side_a[position], metric)))
        for j in range(len(side_b)):
            if j not in used:
                search(position + 1, used | {j}, max(worst, pair_cost(side_a[position], side_b[j], metric)))

    search(0, set(), 0.0)
    return max(best, infinite)


def _components(cells: Set[Tuple[int, ...]]) -> int:
    remaining = set(cells)
    count = 0
    while remaining:
        count += 1
        queue = deque([remaining.pop()])
        while queue:
            cell = queue.popleft()
            for axis, step in itertools.product(range(len(cell)), (-1, 1)):
                neighbour = cell[:axis] + (cell[axis] + step,) + cell[axis + 1:]
                if neighbour in remaining:
                    remaining.remove(neighbour)
                    queue.append(neighbour)
    return count


def euler_betti1(grid: Grid) -> int:
    """
    First Betti number of a planar lattice set from set lookups alone.

    Args:
        grid: Two-dimensional grid

    Returns:
        b0 - V + E - F
    """
    cells = grid.cell_set()
    edges = sum(1 for x, y in cells for neighbour in ((x + 1, y), (x, y + 1)) if neighbour in cells)
    squares = sum(1 for x, y in cells if {(x + 1, y), (x, y + 1), (x + 1, y + 1)} <= cells)
    return _components(cells) - len(cells) + edges - squares


def component_count(grid: Grid) -> int:
    """Axis-adjacency components of a grid of any dimension by breadth-first search."""
    return _components(set(grid.cell_set()))


def hausdorff_by_pairs(x: Sequence[Sequence[float]], y: Sequence[Sequence[float]]) -> float:
    """Symmetric Hausdorff distance from all pairwise distances."""
    forward = max(min(distance(p, q) for q in y) for p in x)
    backward = max(min(distance(q, p) for p in x) for q in y)
    return max(forward, backward)

