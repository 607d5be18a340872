"""
Data Reader Module
Reads and writes the CSV files exchanged by the command-line tools:
point clouds, grids (with a lattice comment line), diagrams and kill records
"""
import csv
import math
import re
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from topology.core import Grid, PersistenceDiagram, PointCloud
from topology.exceptions import DataFormatError, InvalidParameterError, LatticeError
from utils.logger import Logger


logger = Logger.get_logger(__name__)

PathLike = Union[str, Path]

_GRID_COMMENT = re.compile(
    r'^#\s*mu=(?P<mu>[^,]+),\s*origin=(?P<origin>[^,]+),\s*halved=(?P<halved>true|false)\s*$'
)


def format_number(value: float) -> str:
    """Shortest decimal that reads back to the same double; 'inf' for infinity."""
    return repr(float(value))


def _parse_number(token: str, path: PathLike, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        logger.error(f"{path}:{line}: '{token}' is not a number")
        raise DataFormatError(f"{path}:{line}: '{token}' is not a number") from None


class DataReader:
    """
    Data Reader class for the toolkit's CSV formats.
    Rows keep file order, which is the point order.
    """

    @staticmethod
    def _read_rows(file_path: PathLike, skip_header: bool = False) -> Tuple[List[str], List[Tuple[int, List[str]]]]:
        """
        Split a CSV file into comment lines and numbered data rows.

        Args:
            file_path: Path to CSV file
            skip_header: Drop the first non-comment line

        Returns:
            Tuple of (comment lines, (line number, fields) rows)
        """
        path = Path(file_path)
        if not path.exists():
            logger.error(f"CSV file not found: {file_path}")
            raise FileNotFoundError(f"file not found: {file_path}")

        comments, rows = [], []
        with open(path, 'r', encoding='utf-8', newline='') as file:
            for number, fields in enumerate(csv.reader(file), start=1):
                if not fields or all(not field.strip() for field in fields):
                    continue
                if fields[0].lstrip().startswith('#'):
                    comments.append(','.join(fields))
                    continue
                if skip_header:
                    skip_header = False
                    continue
                rows.append((number, [field.strip() for field in fields]))
        return comments, rows

    @staticmethod
    def _write_lines(file_path: PathLike, lines: Iterable[str]) -> None:
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as file:
            for line in lines:
                file.write(line + '\n')

    # Point clouds

    @staticmethod
    def read_cloud(file_path: PathLike, skip_header: bool = False) -> PointCloud:
        """
        Read a point cloud, one point per line.

        Args:
            file_path: Path to CSV file
            skip_header: Whether the first line is a header

        Returns:
            PointCloud in file order; an empty file gives an empty 1-D cloud

        Raises:
            DataFormatError: On non-numeric fields or a varying column count
        """
        _, rows = DataReader._read_rows(file_path, skip_header)
        if not rows:
            logger.warning(f"No points in {file_path}")
            return PointCloud.empty(1)
        width = len(rows[0][1])
        values = []
        for number, fields in rows:
            if len(fields) != width:
                logger.error(f"{file_path}:{number}: expected {width} columns, found {len(fields)}")
                raise DataFormatError(f"{file_path}:{number}: expected {width} columns, found {len(fields)}")
            values.append([_parse_number(field, file_path, number) for field in fields])
        cloud = PointCloud(np.asarray(values, dtype=np.float64))
        logger.info(f"Read {len(cloud)} points of dimension {cloud.dim} from {file_path}")
        return cloud

    @staticmethod
    def write_cloud(file_path: PathLike, cloud: Union[PointCloud, np.ndarray]) -> None:
        """
        Write a point cloud with round-trip decimal coordinates.

        Args:
            file_path: Output path
            cloud: PointCloud or coordinate array
        """
        points = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud)
        DataReader._write_lines(file_path, (','.join(format_number(value) for value in row) for row in points))
        logger.info(f"Wrote {len(points)} points to {file_path}")

    # Grids

    @staticmethod
    def write_grid(file_path: PathLike, grid: Grid) -> None:
        """
        Write a grid as embedded coordinates after a lattice comment line.

        Args:
            file_path: Output path
            grid: Grid to write
        """
        origin = ' '.join(format_number(value) for value in grid.origin)
        header = f"# mu={format_number(grid.step)}, origin={origin}, halved={'true' if grid.halved else 'false'}"
        lines = [header] + [','.join(format_number(value) for value in row) for row in grid.embed()]
        DataReader._write_lines(file_path, lines)
        logger.info(f"Wrote {len(grid)} cells to {file_path}")

    @staticmethod
    def read_grid(file_path: PathLike, step: Optional[float] = None,
                  origin: Optional[Sequence[float]] = None, halved: bool = False) -> Grid:
        """
        Read a grid file written by write_grid, or a plain point file on a lattice.

        The lattice comment line, when present, is authoritative; a step given
        by the caller must agree with it.

        Args:
            file_path: Path to CSV file
            step: Lattice step when the file carries no comment line
            origin: Lattice origin when the file carries no comment line, zero by default
            halved: Half-step flag when the file carries no comment line

        Returns:
            Grid in file order

        Raises:
            LatticeError: If the metadata disagrees with the caller or a point is off the lattice
        """
        comments, _ = DataReader._read_rows(file_path)
        metadata = next((match for match in map(_GRID_COMMENT.match, comments) if match), None)
        cloud = DataReader.read_cloud(file_path)

        if metadata is not None:
            file_step = float(metadata.group('mu'))
            if step is not None and not math.isclose(float(step), file_step, rel_tol=1e-12):
                logger.error(f"Grid interval {step} does not match {file_step} in {file_path}")
                raise LatticeError(f"grid interval {step} does not match the file's mu={file_step}")
            step = file_step
            origin = tuple(float(value) for value in metadata.group('origin').split())
            halved = metadata.group('halved') == 'true'
        elif step is None:
            logger.error(f"No lattice metadata in {file_path} and no grid interval given")
            raise InvalidParameterError("a grid interval is required for files without a lattice comment")

        if len(cloud) == 0:
            dim = len(origin) if origin is not None else 1
            origin = tuple(origin) if origin is not None else (0.0,) * dim
            return Grid(step=step, origin=origin, cells=np.empty((0, dim), dtype=np.int64), halved=halved)
        if origin is None:
            origin = (0.0,) * cloud.dim
        return Grid.from_points(cloud.points, step, origin, halved)

    # Diagrams

    @staticmethod
    def write_diagram(file_path: PathLike, diagram: PersistenceDiagram, with_source: bool = False) -> None:
        """
        Write a diagram as 'birth,death' lines, with an optional source index column.

        Args:
            file_path: Output path
            diagram: Diagram to write
            with_source: Append the source index of each interval
        """
        lines = []
        for interval in diagram:
            fields = [format_number(interval.birth), format_number(interval.death)]
            if with_source and interval.source_index is not None:
                fields.append(str(interval.source_index))
            lines.append(','.join(fields))
        DataReader._write_lines(file_path, lines)
        logger.info(f"Wrote {len(diagram)} intervals to {file_path}")

    @staticmethod
    def read_diagram(file_path: PathLike, degree: int = 0) -> PersistenceDiagram:
        """
        Read a diagram file.

        Args:
            file_path: Path to CSV file
            degree: Homological degree label

        Returns:
            PersistenceDiagram in file order

        Raises:
            DataFormatError: On malformed rows or birth > death
        """
        _, rows = DataReader._read_rows(file_path)
        pairs = []
        for number, fields in rows:
            if len(fields) not in (2, 3):
                logger.error(f"{file_path}:{number}: expected 2 or 3 columns, found {len(fields)}")
                raise DataFormatError(f"{file_path}:{number}: expected 2 or 3 columns, found {len(fields)}")
            birth, death = (_parse_number(field, file_path, number) for field in fields[:2])
            if not birth <= death or birth < 0:
                logger.error(f"{file_path}:{number}: invalid interval [{birth}, {death})")
                raise DataFormatError(f"{file_path}:{number}: invalid interval [{birth}, {death})")
            source = int(_parse_number(fields[2], file_path, number)) if len(fields) == 3 else None
            pairs.append((birth, death, source))
        logger.info(f"Read {len(pairs)} intervals from {file_path}")
        return PersistenceDiagram.from_pairs(pairs, degree)

    # Kill records

    @staticmethod
    def write_kills(file_path: PathLike, kills: Sequence) -> None:
        """
        Write kill records with a header line.

        Args:
            file_path: Output path
            kills: KillRecord sequence in sweep order
        """
        lines = ['dying_index,killer_index,x_index,y_index,merge_distance']
        lines += [
            f"{kill.dying_index},{kill.killer_index},{kill.pair[0]},{kill.pair[1]},{format_number(kill.merge_distance)}"
            for kill in kills
        ]
        DataReader._write_lines(file_path, lines)
        logger.info(f"Wrote {len(kills)} kill records to {file_path}")
