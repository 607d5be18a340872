"""
CLI Step Definitions
BDD step implementations for the command-line tools and their file formats
"""
import csv
import math
import subprocess
import sys
from pathlib import Path

import pytest
from pytest_bdd import scenarios, given, when, then, parsers

from fixtures.cloud_fixtures import parse_number
from topology.cli import main
from utils.data_reader import DataReader
from utils.logger import Logger


logger = Logger.get_logger(__name__)

# Load scenarios from feature file
scenarios('../features/cli.feature')

REPO_ROOT = Path(__file__).resolve().parents[1]


def _lines(text: str) -> list:
    """Split the ';'-joined line notation; 'empty' is no lines."""
    return [] if text.strip() in ('', 'empty') else text.split(';')


def _data_lines(path) -> list:
    return [line for line in path.read_text(encoding='utf-8').splitlines() if line.strip()]


# Given Steps

@given(parsers.parse('the data file "{name}" with rows "{rows}"'))
def given_data_file(shared_context, write_text, name: str, rows: str):
    """Write a CSV file into the workspace, one ';'-separated row per line."""
    logger.info(f"Step: Given the data file {name} with rows {rows}")
    content = ''.join(f"{line}\n" for line in _lines(rows))
    shared_context.setdefault('files', {})[name] = write_text(name, content)


# When Steps

@when(parsers.parse('I run topology with "{arguments}"'))
def run_topology(shared_context, workspace, capsys, arguments: str):
    """Run the command line in-process; '@name' stands for a workspace path."""
    logger.info(f"Step: When I run topology with {arguments}")
    argv = [str(workspace / token[1:]) if token.startswith('@') else token for token in arguments.split()]
    shared_context['exit_code'] = main(argv)
    captured = capsys.readouterr()
    shared_context['stdout'] = captured.out
    shared_context['stderr'] = captured.err


# Then Steps

@then(parsers.parse('the exit code is {code:d}'))
def exit_code_is(shared_context, code: int):
    assert shared_context['exit_code'] == code, \
        f"Expected exit code {code}, got {shared_context['exit_code']}: {shared_context['stderr']}"


@then(parsers.parse('the file "{name}" reads "{lines}"'))
def file_reads(workspace, name: str, lines: str):
    """Compare the written text line by line."""
    assert _data_lines(workspace / name) == _lines(lines)


@then(parsers.parse('the file "{name}" has {count:d} data rows after the header "{header}"'))
def grid_file_rows(workspace, name: str, count: int, header: str):
    """A grid file is one lattice comment line followed by the embedded cells."""
    lines = _data_lines(workspace / name)
    assert lines[0] == header
    assert len(lines) - 1 == count
    assert not any(line.startswith('#') for line in lines[1:])


@then(parsers.parse('the report "{name}" has {count:d} rows with columns "{columns}"'))
def report_has_rows(workspace, name: str, count: int, columns: str):
    with open(workspace / name, newline='', encoding='utf-8') as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    assert reader.fieldnames == columns.split(',')
    assert len(rows) == count


@then(parsers.parse('the printed value is {expected}'))
def printed_value(shared_context, expected: str):
    """The first printed line is the distance, read back as a float."""
    value = float(shared_context['stdout'].splitlines()[0])
    target = parse_number(expected)
    if math.isinf(target):
        assert math.isinf(value)
    else:
        assert value == pytest.approx(target, abs=1e-12)


@then(parsers.parse('the printed lines are "{lines}"'))
def printed_lines(shared_context, lines: str):
    assert shared_context['stdout'].splitlines() == _lines(lines)


@then(parsers.parse('the last printed line is "{line}"'))
def last_printed_line(shared_context, line: str):
    assert shared_context['stdout'].splitlines()[-1] == line


@then(parsers.parse('the error output mentions "{message}"'))
def error_mentions(shared_context, message: str):
    assert message in shared_context['stderr'], f"'{message}' not in: {shared_context['stderr']}"


@then(parsers.parse('the files "{first}" and "{second}" are identical'))
def files_identical(workspace, first: str, second: str):
    assert (workspace / first).read_bytes() == (workspace / second).read_bytes()


@then(parsers.parse('the file "{name}" has {count:d} points in dimension {dim:d}'))
def cloud_file_shape(workspace, name: str, count: int, dim: int):
    cloud = DataReader.read_cloud(workspace / name)
    assert len(cloud) == count
    assert cloud.dim == dim


@then(parsers.parse('the directory "{name}" holds "{files}"'))
def directory_holds(workspace, name: str, files: str):
    directory = workspace / name
    for file_name in files.split(','):
        assert (directory / file_name).is_file(), f"{file_name} missing from {directory}"


@then(parsers.parse('the printed stages are "{stages}"'))
def printed_stages(shared_context, stages: str):
    """Stage lines come first, as name,size,duration."""
    expected = stages.split(',')
    lines = shared_context['stdout'].splitlines()[:len(expected)]
    assert [line.split(',')[0] for line in lines] == expected
    for line in lines:
        _, size, duration = line.split(',')
        assert int(size) >= 0 and float(duration) >= 0


@then('the printed lines include the complement components and the codimension-one rank')
def printed_topology(shared_context):
    keys = [line.split(',')[0] for line in shared_context['stdout'].splitlines()]
    assert 'complement_components' in keys
    assert 'codim1_rank' in keys
    assert keys[-1] == 'total_seconds'


@then('importing the command line in a fresh interpreter leaves allure unloaded')
def cli_without_allure():
    """The command line must not pull in the test reporting plugin."""
    script = "import sys, topology.cli; print('allure' in sys.modules)"
    completed = subprocess.run(
        [sys.executable, '-c', script], cwd=REPO_ROOT, capture_output=True, text=True, check=True
    )
    assert completed.stdout.strip() == 'False', completed.stderr


@then(parsers.parse('the barycentric stage holds more than {count:d} points'))
def barycentric_stage_size(shared_context, count: int):
    sizes = {line.split(',')[0]: line.split(',')[1] for line in shared_context['stdout'].splitlines()}
    assert int(sizes['barycentric_subdivision']) > count


@then(parsers.parse('the total run time is under {seconds:d} seconds'))
def total_run_time(shared_context, seconds: int):
    last = shared_context['stdout'].splitlines()[-1].split(',')
    assert last[0] == 'total_seconds'
    assert float(last[1]) < seconds
