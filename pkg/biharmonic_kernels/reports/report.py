"""
Check records, suite reports and their JSON/CSV files.

A report file holds everything that determines a run (suite, seed, workers, config, header and the
records) and nothing that varies between identical runs; wall time only reaches the printed summary.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np
import pandas as pd

from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import DomainError, HarnessError

RECORD_COLUMNS = ['id', 'paper_ref', 'value', 'tolerance', 'status']
STATUSES = ('pass', 'fail', 'info')
FORMATS = ('json', 'csv')


@dataclass(frozen=True)
class CheckRecord:
    """
    One check of a suite. `paper_ref` names the identity or statement the check exercises.
    """
    id: str
    paper_ref: str
    value: float
    tolerance: float | None
    status: str

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise DomainError(f"Check status must be one of {STATUSES}, got '{self.status}'")

    @classmethod
    def within(cls, id: str, paper_ref: str, value: float, tolerance: float) -> "CheckRecord":
        """'pass' when |value| <= tolerance."""
        value = float(value)
        return cls(id, paper_ref, value, float(tolerance), 'pass' if abs(value) <= tolerance else 'fail')

    @classmethod
    def holds(cls, id: str, paper_ref: str, value: float, condition: bool) -> "CheckRecord":
        return cls(id, paper_ref, float(value), None, 'pass' if condition else 'fail')

    @classmethod
    def info(cls, id: str, paper_ref: str, value: Any) -> "CheckRecord":
        return cls(id, paper_ref, value if isinstance(value, str) else float(value), None, 'info')

    def as_row(self) -> dict:
        return {'id': self.id, 'paper_ref': self.paper_ref, 'value': _plain(self.value),
                'tolerance': _plain(self.tolerance), 'status': self.status}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    workers: int
    config: dict = field(default_factory=dict)
    records: list[CheckRecord] = field(default_factory=list)
    wall_time: float = 0.0
    header: dict = field(default_factory=dict)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def extend(self, records: Iterable[CheckRecord]) -> None:
        self.records.extend(records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status == 'fail']

    @property
    def passed(self) -> bool:
        return not self.failures

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.as_row() for r in self.records], columns=RECORD_COLUMNS)

    def summary(self) -> str:
        """Printable summary table, wall time included."""
        frame = self.frame()
        counts = {status: int((frame['status'] == status).sum()) for status in STATUSES}
        lines = [f"suite {self.suite}: {counts['pass']} passed, {counts['fail']} failed, {counts['info']} info "
                 f"({self.wall_time:.2f} s)"]
        if not frame.empty:
            lines.append(frame.to_string(index=False))
        return '\n'.join(lines)

    def document(self) -> dict:
        """The JSON document written to disk."""
        return {
            'schema_version': setting.REPORT_SCHEMA_VERSION,
            'suite': self.suite,
            'seed': self.seed,
            'workers': self.workers,
            'config': _plain(self.config),
            'header': _plain(self.header),
            'records': [r.as_row() for r in self.records],
        }


def _plain(value: Any) -> Any:
    """numpy scalars, tuples and paths to JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def report_directory() -> Path:
    """BIHARMONIC_REPORT_DIR when set, else the default reports directory."""
    return Path(os.environ.get(setting.REPORT_DIR_ENV_VAR, setting.DEFAULT_REPORT_DIRECTORY_PATH))


def default_report_path(suite: str, format: str) -> Path:
    return report_directory() / f'{suite}_report.{format}'


def emit_report(report: SuiteReport, path: str | Path, format: str = 'json') -> Path:
    """
    Write the report as one JSON object with sorted keys, or as CSV with the columns
    id, paper_ref, value, tolerance, status.

    Raises:
        DomainError: unknown format.
        HarnessError: the file cannot be written.
    """
    if format not in FORMATS:
        raise DomainError(f"Report format must be one of {FORMATS}, got '{format}'")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if format == 'json':
            path.write_text(json.dumps(report.document(), sort_keys=True, indent=2) + '\n')
        else:
            report.frame().to_csv(path, index=False)
    except OSError as e:
        raise HarnessError(f"Cannot write report to {path}: {e}") from e
    logger.info({'report_written': str(path), 'suite': report.suite, 'format': format,
                 'records': len(report.records)})
    return path


def save_table(rows: list[dict], path: str | Path) -> Path:
    """
    Write tabular results; the extension (.csv or .json) picks the format.

    Raises:
        DomainError: any other extension.
        HarnessError: the file cannot be written.
    """
    path = Path(path)
    extension = path.suffix.lower()
    if extension not in ('.csv', '.json'):
        raise DomainError(f"Output file must be either a CSV or JSON file, got '{path.name}'")
    df = pd.DataFrame([_plain(row) for row in rows])
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if extension == '.csv':
            df.to_csv(path, index=False)
        else:
            df.to_json(path, indent=2, orient='records')
    except OSError as e:
        raise HarnessError(f"Cannot write table to {path}: {e}") from e
    logger.info({'table_written': str(path), 'rows': len(rows)})
    return path
