"""
Point-cloud topology toolkit.

Transformations that shrink or regularise a point cloud before persistence
computations (barycentric enrichment, sparsification, gridification,
thickening, complement), degree-0 persistence with the elder rule, cubical
Betti numbers and bottleneck distances with explicit matchings.
"""
from topology.core import Grid, Interval, Matching, PersistenceDiagram, PointCloud, diameter, distance
from topology.complexes import CubicalComplex, VRSkeleton, cubical_complex, vr_skeleton
from topology.transforms import (
    barycentric_subdivision,
    complement,
    grid_subdivision,
    gridification,
    sparsification,
    thickening,
)
from topology.persistence import (
    KillRecord,
    betti0_cubical,
    betti1_cubical_2d,
    codim1_via_duality,
    ph0_grid,
    ph0_vr,
)
from topology.metrics import bottleneck, hausdorff_distance
from topology.verification import BoundReport, check_bound, run_suite

__version__ = "1.0.0"

__all__ = [
    "PointCloud",
    "Grid",
    "Interval",
    "PersistenceDiagram",
    "Matching",
    "distance",
    "diameter",
    "VRSkeleton",
    "CubicalComplex",
    "vr_skeleton",
    "cubical_complex",
    "barycentric_subdivision",
    "sparsification",
    "gridification",
    "grid_subdivision",
    "thickening",
    "complement",
    "KillRecord",
    "ph0_vr",
    "ph0_grid",
    "betti0_cubical",
    "betti1_cubical_2d",
    "codim1_via_duality",
    "bottleneck",
    "hausdorff_distance",
    "BoundReport",
    "check_bound",
    "run_suite",
]
