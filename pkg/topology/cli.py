"""
Command-Line Module
Subcommands wrapping the transforms, persistence, metrics and verification suites.

Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.
"""
import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from config.config import config
from topology.core import PointCloud, diameter
from topology.exceptions import (
    DataFormatError,
    DimensionMismatchError,
    EmptyInputError,
    InvalidParameterError,
    LatticeError,
    VerificationFailure,
)
from topology.metrics import METRICS, bottleneck
from topology.persistence import betti0_cubical, codim1_via_duality, ph0_grid, ph0_vr
from topology.synthetic import generate_synthetic
from topology.transforms import (
    barycentric_subdivision,
    complement,
    grid_subdivision,
    gridification,
    sparsification,
    thickening,
)
from topology.verification import SUITES, run_suite, summarize
from utils.data_reader import DataReader, format_number
from utils.logger import Logger
from utils.performance_monitor import PerformanceMonitor
from utils.report_helper import ReportHelper


logger = Logger.get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFICATION = 3


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_interval(value: Optional[float]) -> Optional[float]:
    if value is not None and not value > 0:
        raise InvalidParameterError(f"--grid_interval must be positive, got {value}")
    return value


# ============================================================================
# Transform commands
# ============================================================================

def cmd_barycentric_subdivision(args: argparse.Namespace) -> int:
    cloud = DataReader.read_cloud(args.data_in, args.skip_header)
    DataReader.write_cloud(args.data_out, barycentric_subdivision(cloud, args.radius, args.max_dim))
    return EXIT_OK


def cmd_sparsification(args: argparse.Namespace) -> int:
    cloud = DataReader.read_cloud(args.data_in, args.skip_header)
    DataReader.write_cloud(args.data_out, sparsification(cloud, args.min_dist))
    return EXIT_OK


def cmd_gridification(args: argparse.Namespace) -> int:
    _positive_interval(args.grid_interval)
    cloud = DataReader.read_cloud(args.data_in, args.skip_header)
    DataReader.write_grid(args.data_out, gridification(cloud, args.grid_interval, args.grid_origin))
    return EXIT_OK


def _grid_command(transform: Callable) -> Callable[[argparse.Namespace], int]:
    """Build a command that reads a grid file, transforms it and writes a grid file."""

    def command(args: argparse.Namespace) -> int:
        grid = DataReader.read_grid(args.data_in, step=_positive_interval(args.grid_interval))
        DataReader.write_grid(args.data_out, transform(grid, args))
        return EXIT_OK

    return command


cmd_complement = _grid_command(lambda grid, args: complement(grid, args.buffer))
cmd_thickening = _grid_command(lambda grid, args: thickening(grid))
cmd_subdivision = _grid_command(lambda grid, args: grid_subdivision(grid))


# ============================================================================
# Persistence and metric commands
# ============================================================================

def cmd_ph0(args: argparse.Namespace) -> int:
    if args.as_grid:
        grid = DataReader.read_grid(args.data_in, step=_positive_interval(args.grid_interval))
        diagram = ph0_grid(grid)
        # merge records come from the sweep over the embedded cells
        kills = ph0_vr(PointCloud(grid.embed()))[1] if args.kills_out else []
    else:
        diagram, kills = ph0_vr(DataReader.read_cloud(args.data_in, args.skip_header))
    DataReader.write_diagram(args.diagram_out, diagram, with_source=args.with_source)
    if args.kills_out:
        DataReader.write_kills(args.kills_out, kills)
    return EXIT_OK


def cmd_bottleneck(args: argparse.Namespace) -> int:
    first = DataReader.read_diagram(args.a)
    second = DataReader.read_diagram(args.b)
    value, matching = bottleneck(first, second, args.metric)
    print(format_number(value))
    if args.witness:
        for i, j in matching.pairs:
            print(f"pair,{i},{j}")
        for i in matching.diagonal_a:
            print(f"diagonal_a,{i}")
        for j in matching.diagonal_b:
            print(f"diagonal_b,{j}")
    return EXIT_OK


# ============================================================================
# Verification and experiment commands
# ============================================================================

def cmd_verify(args: argparse.Namespace) -> int:
    reports = run_suite(args.theorem, seeds=args.seeds, n_jobs=args.n_jobs, metric=args.metric)
    print(ReportHelper.format_reports(reports))
    if args.report_out:
        ReportHelper.write_report_csv(args.report_out, reports)
    passed, total = summarize(reports)
    if args.theorem != 'duality':
        stable = sum(1 for report in reports if report.stability_pass)
        logger.info(f"Stability check: {stable}/{total} within the Hausdorff distance")
    if passed < total:
        raise VerificationFailure(f"{total - passed} of {total} {args.theorem} cases failed")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    DataReader.write_cloud(args.out, generate_synthetic(args.seed, args.n))
    return EXIT_OK


def _scaled(value: Optional[float], fraction: float, span: float) -> float:
    return value if value is not None else fraction * span


def cmd_pipeline(args: argparse.Namespace) -> int:
    """Barycentric enrichment, sparsification, gridification, then complement and thickening."""
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    monitor = PerformanceMonitor()
    monitor.start_monitoring()

    with monitor.stage('read') as record:
        cloud = DataReader.read_cloud(args.data_in, args.skip_header)
        span = diameter(cloud)
        record['size'] = len(cloud)
    radius = _scaled(args.radius, args.radius_fraction, span)
    min_dist = _scaled(args.min_dist, args.min_dist_fraction, span)
    step = _positive_interval(_scaled(args.grid_interval, args.grid_fraction, span))

    with monitor.stage('barycentric_subdivision') as record:
        enriched = barycentric_subdivision(cloud, radius, args.max_dim)
        DataReader.write_cloud(out_dir / 'barycentric_subdivision.csv', enriched)
        record['size'] = len(enriched)
    with monitor.stage('sparsification') as record:
        landmarks = sparsification(enriched, min_dist)
        DataReader.write_cloud(out_dir / 'sparsification.csv', landmarks)
        record['size'] = len(landmarks)
    with monitor.stage('gridification') as record:
        grid = gridification(landmarks, step, args.grid_origin)
        DataReader.write_grid(out_dir / 'gridification.csv', grid)
        record['size'] = len(grid)
    with monitor.stage('complement') as record:
        outside = complement(grid, args.buffer)
        DataReader.write_grid(out_dir / 'complement.csv', outside)
        components = betti0_cubical(outside)
        record['size'] = len(outside)
    with monitor.stage('thickening') as record:
        thick = thickening(grid)
        DataReader.write_grid(out_dir / 'thickening.csv', thick)
        record['size'] = len(thick)

    metrics = monitor.stop_monitoring()
    for stage in metrics['stages']:
        print(f"{stage['stage']},{stage['size']},{stage['duration']}")
    print(f"complement_components,{components}")
    if args.buffer >= 1:
        print(f"codim1_rank,{codim1_via_duality(grid, args.buffer)}")
    print(f"total_seconds,{metrics['total_duration']}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Output size and diagram shift for a grid of enrichment and sparsification parameters."""
    settings = config.get_verification_settings()
    radius_fractions = args.radius_fractions or settings['bary_fractions']
    sparse_fractions = args.min_dist_fractions or settings['sparse_fractions']
    cloud = DataReader.read_cloud(args.data_in, args.skip_header)
    span = diameter(cloud)
    reference, _ = ph0_vr(cloud)

    rows: List[Dict[str, object]] = []
    for radius_fraction in radius_fractions:
        enriched = barycentric_subdivision(cloud, radius_fraction * span, args.max_dim)
        for sparse_fraction in sparse_fractions:
            landmarks = sparsification(enriched, sparse_fraction * span)
            diagram, _ = ph0_vr(landmarks)
            value, _ = bottleneck(reference, diagram)
            rows.append({
                'radius_fraction': float(radius_fraction),
                'radius': radius_fraction * span,
                'min_dist_fraction': float(sparse_fraction),
                'min_dist': sparse_fraction * span,
                'barycentric_size': len(enriched),
                'sparsified_size': len(landmarks),
                'bottleneck': value,
            })
            logger.info(f"Sweep cell radius={radius_fraction} min_dist={sparse_fraction}: {len(landmarks)} points")
    ReportHelper.write_table_csv(args.out, rows)
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================

def _add_io(parser: argparse.ArgumentParser, output: bool = True) -> None:
    parser.add_argument('--data_in', required=True, help='input CSV file')
    if output:
        parser.add_argument('--data_out', required=True, help='output CSV file')
    parser.add_argument('--skip_header', action='store_true', help='skip the first line of the input')


def build_parser() -> ArgumentParser:
    """Create the argument parser with every subcommand."""
    parser = ArgumentParser(prog='topology', description='Point-cloud topology toolkit')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    sub = commands.add_parser('barycentric_subdivision', help='add midpoints and centroids of VR simplices')
    sub.add_argument('--radius', type=float, required=True)
    sub.add_argument('--max_dim', type=int, choices=(1, 2), default=2)
    _add_io(sub)
    sub.set_defaults(handler=cmd_barycentric_subdivision)

    sub = commands.add_parser('sparsification', help='greedy landmark subset')
    sub.add_argument('--min_dist', type=float, required=True)
    _add_io(sub)
    sub.set_defaults(handler=cmd_sparsification)

    sub = commands.add_parser('gridification', help='map points to lattice cells')
    sub.add_argument('--grid_interval', type=float, required=True)
    sub.add_argument('--grid_origin', type=float, nargs='+', default=None)
    _add_io(sub)
    sub.set_defaults(handler=cmd_gridification)

    sub = commands.add_parser('complement', help='lattice cells around a grid that are not in it')
    sub.add_argument('--grid_interval', type=float, default=None)
    sub.add_argument('--buffer', type=int, default=1)
    _add_io(sub)
    sub.set_defaults(handler=cmd_complement)

    for name, handler, text in (('thickening', cmd_thickening, 'half-step thickening of a grid'),
                                ('subdivision', cmd_subdivision, 'half-step subdivision of a grid')):
        sub = commands.add_parser(name, help=text)
        sub.add_argument('--grid_interval', type=float, default=None)
        _add_io(sub)
        sub.set_defaults(handler=handler)

    sub = commands.add_parser('ph0', help='degree-0 persistence diagram')
    _add_io(sub, output=False)
    sub.add_argument('--diagram_out', required=True)
    sub.add_argument('--as_grid', action='store_true', help='treat the input as a grid file')
    sub.add_argument('--grid_interval', type=float, default=None)
    sub.add_argument('--kills_out', default=None, help='also write the merge records')
    sub.add_argument('--with_source', action='store_true', help='append source indices')
    sub.set_defaults(handler=cmd_ph0)

    sub = commands.add_parser('bottleneck', help='bottleneck distance between two diagram files')
    sub.add_argument('--a', required=True)
    sub.add_argument('--b', required=True)
    sub.add_argument('--metric', choices=METRICS, default=None)
    sub.add_argument('--witness', action='store_true', help='print the optimal matching')
    sub.set_defaults(handler=cmd_bottleneck)

    sub = commands.add_parser('verify', help='run a seeded verification suite')
    sub.add_argument('--theorem', choices=SUITES, required=True)
    sub.add_argument('--seeds', type=int, default=None)
    sub.add_argument('--n_jobs', type=int, default=None)
    sub.add_argument('--metric', choices=METRICS, default=None)
    sub.add_argument('--report_out', default=None, help='CSV report path')
    sub.set_defaults(handler=cmd_verify)

    sub = commands.add_parser('generate', help='seeded synthetic planar cloud')
    sub.add_argument('--seed', type=int, required=True)
    sub.add_argument('--n', type=int, default=None)
    sub.add_argument('--out', required=True)
    sub.set_defaults(handler=cmd_generate)

    sub = commands.add_parser('pipeline', help='run the transform chain and write every stage')
    _add_io(sub, output=False)
    sub.add_argument('--out_dir', required=True)
    sub.add_argument('--radius', type=float, default=None)
    sub.add_argument('--radius_fraction', type=float, default=0.3)
    sub.add_argument('--max_dim', type=int, choices=(1, 2), default=2)
    sub.add_argument('--min_dist', type=float, default=None)
    sub.add_argument('--min_dist_fraction', type=float, default=0.02)
    sub.add_argument('--grid_interval', type=float, default=None)
    sub.add_argument('--grid_fraction', type=float, default=0.1)
    sub.add_argument('--grid_origin', type=float, nargs='+', default=None)
    sub.add_argument('--buffer', type=int, default=2)
    sub.set_defaults(handler=cmd_pipeline)

    sub = commands.add_parser('sweep', help='size and diagram shift over a parameter grid')
    _add_io(sub, output=False)
    sub.add_argument('--out', required=True)
    sub.add_argument('--max_dim', type=int, choices=(1, 2), default=2)
    sub.add_argument('--radius_fractions', type=float, nargs='+', default=None)
    sub.add_argument('--min_dist_fractions', type=float, nargs='+', default=None)
    sub.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name, sys.argv by default

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)

    try:
        return args.handler(args)
    except InvalidParameterError as error:
        logger.error(f"{args.command}: {error}")
        print(f"topology {args.command}: error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, LatticeError, DimensionMismatchError, EmptyInputError, OSError) as error:
        logger.error(f"{args.command}: {error}")
        print(f"topology {args.command}: error: {error}", file=sys.stderr)
        return EXIT_DATA
    except VerificationFailure as error:
        logger.error(f"{args.command}: {error}")
        return EXIT_VERIFICATION
