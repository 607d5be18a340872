"""
Report Helper Module
Renders verification and sweep reports as text and CSV, and enriches Allure results
"""
import csv
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from config.config import config
from utils.data_reader import format_number
from utils.logger import Logger


logger = Logger.get_logger(__name__)

REPORT_COLUMNS = ['theorem', 'seed', 'n', 'N', 'parameter', 'bound', 'value', 'pass']
EXTRA_COLUMNS = ['witness_cost', 'hausdorff', 'stability_pass']


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_number(value)
    return str(value)


class ReportHelper:
    """
    Report Helper class for verification output.
    Provides text and CSV rendering plus Allure attachments.
    """

    @staticmethod
    def attach_text(text: str, name: str = "Text Attachment") -> None:
        """
        Attach text to Allure report.

        The allure import stays local: the command line runs without allure-pytest.

        Args:
            text: Text content to attach
            name: Attachment name
        """
        try:
            import allure

            allure.attach(text, name=name, attachment_type=allure.attachment_type.TEXT)
            logger.debug(f"Text attached to report: {name}")
        except Exception as e:
            logger.error(f"Failed to attach text: {str(e)}")

    @staticmethod
    def add_environment_info(env_info: Dict[str, str]) -> None:
        """
        Add environment information to Allure report.

        Args:
            env_info: Dictionary containing environment information
        """
        try:
            env_file = config.allure_results_dir / 'environment.properties'
            with open(env_file, 'w') as f:
                for key, value in env_info.items():
                    f.write(f"{key}={value}\n")
            logger.info("Environment information added to Allure report")
        except Exception as e:
            logger.error(f"Failed to add environment info: {str(e)}")

    @staticmethod
    def report_rows(reports: Sequence[Any]) -> List[Dict[str, str]]:
        """Stringified CSV rows for BoundReport or DualityReport objects."""
        return [{key: _cell(value) for key, value in report.as_row().items()} for report in reports]

    @staticmethod
    def format_reports(reports: Sequence[Any]) -> str:
        """
        Render reports as line-oriented text, one case per line plus a summary.

        Args:
            reports: Verification reports

        Returns:
            Multi-line text
        """
        lines = []
        for row in ReportHelper.report_rows(reports):
            status = 'PASS' if row['pass'] == 'true' else 'FAIL'
            detail = ' '.join(f"{key}={row[key]}" for key in REPORT_COLUMNS[1:-1] if row.get(key, '') != '')
            extra = ' '.join(f"{key}={row[key]}" for key in EXTRA_COLUMNS if key in row)
            lines.append(f"{status} {row['theorem']} {detail} {extra}".rstrip())
        passed = sum(1 for report in reports if report.passed)
        lines.append(f"{passed}/{len(reports)} passed")
        return '\n'.join(lines)

    @staticmethod
    def write_report_csv(file_path: Union[str, Path], reports: Sequence[Any]) -> str:
        """
        Write the machine-readable verification report.

        The required columns come first; bound reports add witness cost,
        Hausdorff distance and the stability verdict.

        Args:
            file_path: Output path
            reports: Verification reports

        Returns:
            Path of the written file
        """
        rows = ReportHelper.report_rows(reports)
        fieldnames = REPORT_COLUMNS + [key for key in EXTRA_COLUMNS if rows and key in rows[0]]
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n')
            writer.writeheader()
            writer.writerows(rows)
        logger.info(f"Verification report written: {path}")
        return str(path)

    @staticmethod
    def write_table_csv(file_path: Union[str, Path], rows: Sequence[Dict[str, Any]],
                        fieldnames: Optional[List[str]] = None) -> str:
        """
        Write arbitrary result rows, such as the sweep table.

        Args:
            file_path: Output path
            rows: Row dictionaries
            fieldnames: Column order, keys of the first row by default

        Returns:
            Path of the written file
        """
        fieldnames = fieldnames or (list(rows[0]) if rows else [])
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n')
            writer.writeheader()
            for row in rows:
                writer.writerow({key: _cell(row[key]) for key in fieldnames})
        logger.info(f"Table written: {path}")
        return str(path)

    @staticmethod
    def generate_csv_report(results: List[Dict[str, Any]]) -> str:
        """
        Generate a CSV report from test results.

        Args:
            results: List of dictionaries containing test results

        Returns:
            Path to the generated CSV file
        """
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        csv_file = config.ensure_reports_dir() / f"test_results_{timestamp}.csv"

        try:
            with open(csv_file, 'w', newline='', encoding='utf-8') as f:
                fieldnames = ['test_name', 'status', 'duration', 'error_message']
                writer = csv.DictWriter(f, fieldnames=fieldnames)

                writer.writeheader()
                for result in results:
                    writer.writerow({
                        'test_name': result.get('name', 'N/A'),
                        'status': result.get('status', 'N/A'),
                        'duration': f"{result.get('duration', 0):.2f}s",
                        'error_message': result.get('error', '').replace('\n', ' ')
                    })

            logger.info(f"CSV report generated: {csv_file}")
            return str(csv_file)
        except Exception as e:
            logger.error(f"Failed to generate CSV report: {str(e)}")
            return ""
