"""
Table and report export.

Lens tables are written with pandas (CSV, or Excel through openpyxl); run
reports are written as JSON or as a plain-text summary.
"""

import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Sequence, Union

import pandas as pd

from modules.core.errors import ConfigError
from modules.core.runner import RunReport
from modules.core.scalars import ZetaAssignment
from modules.utils.file_utils import ensure_dir, write_text

logger = logging.getLogger('pachnercalc.export')

TABLE_COLUMNS = ['p', 'q', 'n', 'zeta', 'value']


def zeta_cell(z: Union[ZetaAssignment, Sequence[Any]]) -> str:
    """Zeta values joined with ':' for a table cell, e.g. '1:2:3:4'."""
    values = z.as_tuple() if isinstance(z, ZetaAssignment) else tuple(z)
    return ':'.join(str(v) for v in values)


def lens_table_frame(rows: Iterable[Mapping[str, Any]]) -> pd.DataFrame:
    """
    DataFrame with the columns p, q, n, zeta, value.

    Args:
        rows: Mappings with at least p, q, n, zeta, value; zeta may be a
            ZetaAssignment, a sequence or an already joined string
    """
    records = []
    for row in rows:
        zeta = row['zeta']
        records.append({
            'p': int(row['p']),
            'q': int(row['q']),
            'n': int(row['n']),
            'zeta': zeta if isinstance(zeta, str) else zeta_cell(zeta),
            'value': str(row['value']),
        })
    return pd.DataFrame(records, columns=TABLE_COLUMNS)


def table_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator='\n')


def write_table(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """
    Write a table as CSV, or as Excel when the suffix is .xlsx.

    Raises:
        ConfigError: If the file cannot be written
    """
    path = Path(path)
    try:
        ensure_dir(path.parent)
        if path.suffix.lower() == '.xlsx':
            df.to_excel(path, index=False, engine='openpyxl')
        else:
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(table_csv(df))
    except (OSError, ValueError) as e:
        raise ConfigError(f"Cannot write table {path}: {e}") from e
    logger.info(f"Table with {len(df)} rows written to {path}")
    return path


def report_json(report: RunReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=False) + '\n'


def write_report(report: RunReport, path: Union[str, Path]) -> Path:
    """Write the JSON run report."""
    path = write_text(path, report_json(report))
    logger.info(f"Report written to {path}")
    return path


def summary_text(report: RunReport) -> str:
    """
    Plain-text report: the command and its inputs, one line per check, and
    the summary counts. Elapsed time only appears when the report records timing.
    """
    lines: List[str] = [f"pachnercalc {report.command}"]
    for key, value in report.inputs.items():
        lines.append(f"  {key}: {value}")
    lines.append("-" * 40)
    for check in report.checks:
        status = 'PASS' if check.passed else 'FAIL'
        line = f"[{status}] {check.name}"
        if check.error:
            line += f" ({check.error})"
        lines.append(line)
    lines.append("-" * 40)
    lines.append(f"Checks run: {len(report.checks)}")
    lines.append(f"Checks passed: {report.passed_count}")
    lines.append(f"Checks failed: {report.failed_count}")
    if report.timing:
        lines.append(f"Elapsed seconds: {report.elapsed:.2f}")
    return '\n'.join(lines) + '\n'


def write_summary(report: RunReport, path: Union[str, Path]) -> Path:
    path = write_text(path, summary_text(report))
    logger.info(f"Summary written to {path}")
    return path
