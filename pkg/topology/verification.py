"""
Verification Module
Inclusion-induced witness matchings, bound checks and seeded verification suites
for the barycentric, sparsification, grid and duality results
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from config.config import config
from topology.core import Matching, PersistenceDiagram, PointCloud, diameter
from topology.exceptions import InvalidParameterError, VerificationFailure
from topology.metrics import bottleneck, hausdorff_distance, matching_cost
from topology.persistence import betti1_cubical_2d, codim1_via_duality, ph0_grid, ph0_vr
from topology.synthetic import random_cloud, random_grid
from topology.transforms import barycentric_subdivision, gridification_map, sparsification_indices, thickening
from utils.logger import Logger


logger = Logger.get_logger(__name__)

THEOREMS = ('bary', 'sparse', 'grid')
SUITES = THEOREMS + ('duality',)


@dataclass(frozen=True)
class BoundReport:
    """
    Outcome of one bound check.

    ``passed`` compares the bottleneck distance with the stated bound;
    ``stability_pass`` compares it with the Hausdorff distance between the two
    generating sets, which bounds it unconditionally.
    """

    theorem: str
    parameter: float
    bound: float
    bottleneck_value: float
    witness_cost: float
    passed: bool
    hausdorff: float
    stability_pass: bool
    seed: Optional[int] = None
    n: int = 0
    dim: int = 0

    def as_row(self) -> Dict[str, Any]:
        """Row for the CSV report, with the columns in report order."""
        row = asdict(self)
        return {
            'theorem': row['theorem'],
            'seed': '' if row['seed'] is None else row['seed'],
            'n': row['n'],
            'N': row['dim'],
            'parameter': row['parameter'],
            'bound': row['bound'],
            'value': row['bottleneck_value'],
            'pass': row['passed'],
            'witness_cost': row['witness_cost'],
            'hausdorff': row['hausdorff'],
            'stability_pass': row['stability_pass'],
        }


@dataclass(frozen=True)
class DualityReport:
    """Outcome of one duality check on a planar grid."""

    seed: Optional[int]
    n_cells: int
    buffer: int
    duality_rank: int
    euler_rank: int
    passed: bool

    def as_row(self) -> Dict[str, Any]:
        return {
            'theorem': 'duality',
            'seed': '' if self.seed is None else self.seed,
            'n': self.n_cells,
            'N': 2,
            'parameter': self.buffer,
            'bound': self.euler_rank,
            'value': self.duality_rank,
            'pass': self.passed,
        }


# ============================================================================
# Induced matchings
# ============================================================================

def _prefix_matching(source: PersistenceDiagram, target: PersistenceDiagram,
                     source_of_target: Sequence[int]) -> Matching:
    """
    Match the interval of target index k to the interval of source index
    source_of_target[k]; unmatched intervals on either side go to the diagonal.
    """
    source_positions = source.position_by_source()
    target_positions = target.position_by_source()
    pairs = [(source_positions[int(s)], target_positions[k]) for k, s in enumerate(source_of_target)]
    used_a = {a for a, _ in pairs}
    used_b = {b for _, b in pairs}
    matching = Matching(
        pairs=tuple(pairs),
        diagonal_a=tuple(p for p in range(len(source)) if p not in used_a),
        diagonal_b=tuple(p for p in range(len(target)) if p not in used_b),
        cost=0.0,
    )
    return matching


def _with_cost(source: PersistenceDiagram, target: PersistenceDiagram, matching: Matching,
               metric: Optional[str]) -> Matching:
    cost = matching_cost(source, target, matching, metric)
    return Matching(matching.pairs, matching.diagonal_a, matching.diagonal_b, cost)


def _bary_case(cloud: PointCloud, radius: float, metric: Optional[str]):
    enriched = barycentric_subdivision(cloud, radius, 2)
    source, _ = ph0_vr(cloud)
    target, _ = ph0_vr(enriched)
    matching = _prefix_matching(source, target, range(len(cloud)))
    return source, target, _with_cost(source, target, matching, metric), enriched


def _sparse_case(cloud: PointCloud, min_dist: float, metric: Optional[str]):
    landmarks = sparsification_indices(cloud, min_dist)
    subset = cloud.take(landmarks)
    source, _ = ph0_vr(cloud)
    target, _ = ph0_vr(subset)
    matching = _prefix_matching(source, target, landmarks)
    return source, target, _with_cost(source, target, matching, metric), subset


def _grid_case(cloud: PointCloud, step: float, origin: Optional[Sequence[float]], metric: Optional[str]):
    grid, rows = gridification_map(cloud, step, origin)
    source, _ = ph0_vr(cloud)
    target = ph0_grid(grid)
    deaths = source.deaths()
    chosen = []
    for row in range(len(grid)):
        fiber = np.flatnonzero(rows == row)
        # longest interval in the fiber; the smallest index wins ties
        chosen.append(int(fiber[np.argmax(deaths[fiber])]))
    matching = _prefix_matching(source, target, chosen)
    return source, target, _with_cost(source, target, matching, metric), PointCloud(grid.embed())


def induced_matching_bary(cloud: PointCloud, radius: float, metric: Optional[str] = None) -> Matching:
    """
    Matching from the diagram of a cloud to the diagram of its barycentric
    enrichment: each point keeps its own index, added points go to the diagonal.

    Args:
        cloud: Ordered point cloud
        radius: Enrichment radius delta
        metric: Ground metric for the reported cost

    Returns:
        Witness matching with its cost
    """
    _, _, matching, _ = _bary_case(cloud, radius, metric)
    return matching


def induced_matching_sparse(cloud: PointCloud, min_dist: float, metric: Optional[str] = None) -> Matching:
    """
    Matching from the diagram of a cloud to the diagram of its landmarks: each
    landmark is paired with its source point, other points go to the diagonal.
    """
    _, _, matching, _ = _sparse_case(cloud, min_dist, metric)
    return matching


def induced_matching_grid(cloud: PointCloud, step: float, origin: Optional[Sequence[float]] = None,
                          metric: Optional[str] = None) -> Matching:
    """
    Matching from the diagram of a cloud to the diagram of its grid: each cell
    is paired with the longest interval among the points mapped to it.
    """
    _, _, matching, _ = _grid_case(cloud, step, origin, metric)
    return matching


# ============================================================================
# Bound checks
# ============================================================================

def stated_bound(theorem: str, parameter: float, dim: int) -> float:
    """Bound on the bottleneck distance claimed for each transform."""
    if theorem == 'bary':
        return parameter / 4.0
    if theorem == 'sparse':
        return parameter / 2.0
    if theorem == 'grid':
        return math.sqrt(dim) * parameter / 2.0
    raise InvalidParameterError(f"theorem must be one of {', '.join(THEOREMS)}, got {theorem}")


def check_bound(theorem: str, cloud: PointCloud, parameter: float, metric: Optional[str] = None,
                origin: Optional[Sequence[float]] = None, seed: Optional[int] = None) -> BoundReport:
    """
    Compare the bottleneck distance of a transform with its bound.

    Args:
        theorem: 'bary', 'sparse' or 'grid'
        cloud: Nonempty point cloud
        parameter: delta, epsilon or mu
        metric: Ground metric, configured default when omitted
        origin: Grid origin for the grid theorem
        seed: Seed recorded in the report

    Returns:
        BoundReport
    """
    bound = stated_bound(theorem, parameter, cloud.dim)
    if theorem == 'bary':
        source, target, witness, image = _bary_case(cloud, parameter, metric)
    elif theorem == 'sparse':
        source, target, witness, image = _sparse_case(cloud, parameter, metric)
    else:
        source, target, witness, image = _grid_case(cloud, parameter, origin, metric)

    value, _ = bottleneck(source, target, metric)
    spread = hausdorff_distance(cloud, image)
    tolerance = config.get_tolerance('bound')
    report = BoundReport(
        theorem=theorem,
        parameter=float(parameter),
        bound=bound,
        bottleneck_value=value,
        witness_cost=witness.cost,
        passed=bool(value <= bound + tolerance),
        hausdorff=spread,
        stability_pass=bool(value <= spread + tolerance),
        seed=seed,
        n=len(cloud),
        dim=cloud.dim,
    )
    if not report.passed:
        logger.warning(f"Bound check failed: {report}")
    return report


# ============================================================================
# Suites
# ============================================================================

def _fractions(theorem: str, settings: Dict[str, Any]) -> List[float]:
    return [float(value) for value in settings[f'{theorem}_fractions']]


def suite_cloud(seed: int, settings: Dict[str, Any]) -> PointCloud:
    """Random cloud for one suite seed; size and dimension are derived from the seed."""
    rng = np.random.default_rng(seed)
    count = int(rng.integers(settings['min_points'], settings['max_points'] + 1))
    dimensions = settings['dimensions']
    return random_cloud(seed, count, int(dimensions[seed % len(dimensions)]))


def _suite_case(theorem: str, seed: int, settings: Dict[str, Any], metric: Optional[str]) -> List[BoundReport]:
    cloud = suite_cloud(seed, settings)
    span = diameter(cloud)
    return [
        check_bound(theorem, cloud, fraction * span, metric=metric, seed=seed)
        for fraction in _fractions(theorem, settings)
    ]


def _duality_case(seed: int, settings: Dict[str, Any]) -> List[DualityReport]:
    grid = random_grid(seed, int(settings['duality_max_cells']))
    euler_rank = betti1_cubical_2d(thickening(grid))
    reports = []
    for buffer in settings['duality_buffers']:
        rank = codim1_via_duality(grid, int(buffer))
        reports.append(DualityReport(seed, len(grid), int(buffer), rank, euler_rank, rank == euler_rank))
    return reports


def run_suite(theorem: str, seeds: Optional[int] = None, n_jobs: Optional[int] = None,
              metric: Optional[str] = None, fail_fast: bool = False,
              settings: Optional[Dict[str, Any]] = None) -> List[Any]:
    """
    Run a seeded verification suite.

    Seeds are independent and may run in parallel; reports come back in seed
    order whatever the schedule.

    Args:
        theorem: 'bary', 'sparse', 'grid' or 'duality'
        seeds: Number of seeds, configured default when omitted
        n_jobs: joblib worker count, configured default when omitted
        metric: Ground metric for the bound suites
        fail_fast: Raise VerificationFailure when any report fails
        settings: Suite settings overriding the configuration

    Returns:
        List of BoundReport or DualityReport

    Raises:
        VerificationFailure: If fail_fast is set and a case fails
    """
    if theorem not in SUITES:
        logger.error(f"Unknown verification suite: {theorem}")
        raise InvalidParameterError(f"theorem must be one of {', '.join(SUITES)}, got {theorem}")
    settings = {**config.get_verification_settings(), **(settings or {})}
    seeds = int(seeds if seeds is not None else settings['seeds'])
    n_jobs = int(n_jobs if n_jobs is not None else settings['n_jobs'])
    logger.info(f"Running {theorem} suite over {seeds} seeds with n_jobs={n_jobs}")

    if theorem == 'duality':
        batches = Parallel(n_jobs=n_jobs)(delayed(_duality_case)(seed, settings) for seed in range(seeds))
    else:
        batches = Parallel(n_jobs=n_jobs)(
            delayed(_suite_case)(theorem, seed, settings, metric) for seed in range(seeds)
        )
    reports = [report for batch in batches for report in batch]

    failures = [report for report in reports if not report.passed]
    logger.info(f"{theorem} suite: {len(reports) - len(failures)}/{len(reports)} cases passed")
    if failures and fail_fast:
        raise VerificationFailure(f"{len(failures)} {theorem} cases failed, first: {failures[0]}")
    return reports


def summarize(reports: Sequence[Any]) -> Tuple[int, int]:
    """Number of passing reports and total number of reports."""
    return sum(1 for report in reports if report.passed), len(reports)
