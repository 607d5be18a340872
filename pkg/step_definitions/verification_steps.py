"""
Verification Step Definitions
BDD step implementations for bound checks, witness matchings, suites, reports
and synthetic clouds
"""
import csv

import pytest
from pytest_bdd import scenarios, when, then, parsers

from config.config import config
from fixtures.cloud_fixtures import parse_number, record_outcome
from topology import verification
from topology.persistence import ph0_vr
from topology.synthetic import ShapeParams, generate_synthetic
from topology.transforms import barycentric_subdivision, gridification, sparsification
from topology.verification import (
    check_bound,
    induced_matching_bary,
    induced_matching_grid,
    induced_matching_sparse,
    run_suite,
)
from utils.logger import Logger
from utils.report_helper import ReportHelper


logger = Logger.get_logger(__name__)

# Load scenarios from feature file
scenarios('../features/verification.feature')

# Small clouds keep the enrichment of the bary suite quick
SUITE_SETTINGS = {'min_points': 8, 'max_points': 30, 'n_jobs': 1}


def _images(theorem, cloud, parameter):
    """Witness matching and the transformed cloud for one check."""
    if theorem == 'bary':
        return induced_matching_bary(cloud, parameter), barycentric_subdivision(cloud, parameter, 2)
    if theorem == 'sparse':
        return induced_matching_sparse(cloud, parameter), sparsification(cloud, parameter)
    grid = gridification(cloud, parameter)
    return induced_matching_grid(cloud, parameter), grid


# When Steps

@when(parsers.parse('I check the {theorem} bound with parameter {parameter}'))
def check_theorem_bound(shared_context, theorem: str, parameter: str):
    """Run one bound check on the stored cloud."""
    logger.info(f"Step: When I check the {theorem} bound with parameter {parameter}")
    shared_context['theorem'] = theorem
    shared_context['parameter'] = parse_number(parameter)
    report = record_outcome(
        shared_context,
        lambda: check_bound(theorem, shared_context['cloud'], parse_number(parameter))
    )
    shared_context['reports'] = [report] if report is not None else []


@when(parsers.parse('I run the {theorem} suite over {seeds:d} seeds'))
def run_theorem_suite(shared_context, theorem: str, seeds: int):
    """Run a seeded suite on small clouds."""
    logger.info(f"Step: When I run the {theorem} suite over {seeds} seeds")
    shared_context['suite'] = (theorem, seeds)
    reports = record_outcome(shared_context, lambda: run_suite(theorem, seeds, settings=SUITE_SETTINGS))
    shared_context['reports'] = reports or []


@when(parsers.parse('I run the {theorem} suite over {seeds:d} seeds at the configured sizes'))
def run_configured_suite(shared_context, theorem: str, seeds: int):
    """Run a seeded suite with the cloud sizes and parameters of the active profile."""
    logger.info(f"Step: When I run the {theorem} suite over {seeds} seeds at the configured sizes")
    shared_context['suite'] = (theorem, seeds)
    reports = record_outcome(shared_context, lambda: run_suite(theorem, seeds))
    shared_context['reports'] = reports or []


@when(parsers.parse('I run the {theorem} suite over {seeds:d} seeds with a zero stated bound failing fast'))
def run_failing_suite(shared_context, monkeypatch, theorem: str, seeds: int):
    """Force every bound to zero so any diagram change is a failure."""
    monkeypatch.setattr(verification, 'stated_bound', lambda name, parameter, dim: 0.0)
    record_outcome(
        shared_context,
        lambda: run_suite(theorem, seeds, fail_fast=True, settings={**SUITE_SETTINGS, 'sparse_fractions': [1.0]})
    )


@when('I write the verification report')
def write_report(shared_context, workspace):
    """Write the CSV report and render the text summary."""
    path = workspace / 'report.csv'
    ReportHelper.write_report_csv(path, shared_context['reports'])
    shared_context['report_path'] = path
    shared_context['summary'] = ReportHelper.format_reports(shared_context['reports'])


@when(parsers.parse('I generate synthetic clouds with seeds {first:d} and {second:d} and {n_points:d} points'))
def generate_clouds(shared_context, first: int, second: int, n_points: int):
    """Generate two clouds from the configured shape."""
    logger.info(f"Step: When I generate synthetic clouds with seeds {first} and {second}")
    record_outcome(
        shared_context,
        lambda: (generate_synthetic(first, n_points), generate_synthetic(second, n_points))
    )


# Then Steps

@then(parsers.parse('the bottleneck value is {expected}'))
def bottleneck_value_is(shared_context, expected: str):
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    assert shared_context['result'].bottleneck_value == pytest.approx(parse_number(expected), abs=1e-12)


@then(parsers.parse('the stated bound is {expected}'))
def stated_bound_is(shared_context, expected: str):
    assert shared_context['result'].bound == pytest.approx(parse_number(expected), abs=1e-12)


@then(parsers.parse('the witness cost is {expected}'))
def witness_cost_is(shared_context, expected: str):
    assert shared_context['result'].witness_cost == pytest.approx(parse_number(expected), abs=1e-12)


@then(parsers.parse('the Hausdorff distance of the check is {expected}'))
def check_hausdorff_is(shared_context, expected: str):
    assert shared_context['result'].hausdorff == pytest.approx(parse_number(expected), abs=1e-12)


@then('the stated bound holds')
def stated_bound_holds(shared_context):
    report = shared_context['result']
    assert report.passed, f"Bound violated: {report}"


@then('the stated bound fails')
def stated_bound_fails(shared_context):
    report = shared_context['result']
    assert not report.passed
    assert report.bottleneck_value > report.bound


@then('the stability bound holds')
def stability_holds(shared_context):
    """The diagram moves no more than the Hausdorff distance between the clouds."""
    report = shared_context['result']
    assert report.stability_pass
    assert report.bottleneck_value <= report.hausdorff + 1e-9


@then('the bottleneck value does not exceed the witness cost')
def value_below_witness(shared_context):
    report = shared_context['result']
    assert report.bottleneck_value <= report.witness_cost + 1e-12


@then('the induced matching covers both diagrams')
def induced_matching_covers(shared_context):
    """Every interval of the source and of the transformed diagram is assigned once."""
    cloud = shared_context['cloud']
    matching, image = _images(shared_context['theorem'], cloud, shared_context['parameter'])
    source, _ = ph0_vr(cloud)
    target_size = len(image)
    assert matching.covers(len(source), target_size)
    assert matching.cost == pytest.approx(shared_context['result'].witness_cost, abs=1e-12)


@then(parsers.parse('the suite has {count:d} reports in seed order'))
def suite_size(shared_context, count: int):
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    reports = shared_context['reports']
    assert len(reports) == count
    seeds = [report.seed for report in reports]
    assert seeds == sorted(seeds)


@then('the suite has one report per seed and configured parameter')
def suite_size_configured(shared_context):
    """Each seed contributes one case per configured fraction or buffer."""
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    theorem, seeds = shared_context['suite']
    settings = config.get_verification_settings()
    key = 'duality_buffers' if theorem == 'duality' else f'{theorem}_fractions'
    reports = shared_context['reports']
    assert len(reports) == seeds * len(settings[key])
    assert sorted({report.seed for report in reports}) == list(range(seeds))


@then('every report passes the stability bound')
def suite_stability(shared_context):
    failures = [report for report in shared_context['reports'] if not report.stability_pass]
    assert not failures, f"Stability violated: {failures}"


@then('every witness cost bounds its bottleneck value')
def suite_witnesses(shared_context):
    for report in shared_context['reports']:
        assert report.bottleneck_value <= report.witness_cost + 1e-12


@then('every report passes')
def suite_passes(shared_context):
    failures = [report for report in shared_context['reports'] if not report.passed]
    assert not failures, f"Failed cases: {failures}"


@then('running it again with 2 workers gives the same reports')
def suite_parallel_equal(shared_context):
    """joblib scheduling must not change the report order or contents."""
    theorem, seeds = shared_context['suite']
    parallel = run_suite(theorem, seeds, n_jobs=2, settings={**SUITE_SETTINGS, 'n_jobs': 2})
    assert parallel == shared_context['reports']


@then(parsers.parse('the report columns are "{columns}"'))
def report_columns(shared_context, columns: str):
    with open(shared_context['report_path'], newline='', encoding='utf-8') as f:
        header = next(csv.reader(f))
    assert header == columns.split(',')


@then('the report has one row per case')
def report_rows(shared_context):
    with open(shared_context['report_path'], newline='', encoding='utf-8') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == len(shared_context['reports'])
    assert all(row['pass'] in ('true', 'false') for row in rows)


@then('the text summary ends with the passing count')
def summary_line(shared_context):
    reports = shared_context['reports']
    passed = sum(1 for report in reports if report.passed)
    assert shared_context['summary'].splitlines()[-1] == f"{passed}/{len(reports)} passed"


@then('both clouds are equal')
def clouds_equal(shared_context):
    assert shared_context['error'] is None, f"Unexpected error: {shared_context['error']!r}"
    first, second = shared_context['result']
    assert first == second


@then('the clouds differ')
def clouds_differ(shared_context):
    first, second = shared_context['result']
    assert first != second


@then('every generated point lies inside the configured shape')
def points_inside_shape(shared_context):
    shape = ShapeParams.from_settings(config.get_synthetic_settings())
    first, _ = shared_context['result']
    assert first.dim == 2
    assert shape.inside(first.points).all()


@then(parsers.parse('the generated cloud has {count:d} rows'))
def generated_size(shared_context, count: int):
    assert len(shared_context['result'][0]) == count
