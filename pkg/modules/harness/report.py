"""Reports and their JSON/CSV serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from pandas import DataFrame

from modules.definitions.constants import REPORT_CSV_COLUMNS
from modules.definitions.types import OutputFormat
from modules.utils.data import write_data_frame
from modules.utils.output_formatting import format_float

_RECORD_LISTS = ("results", "subgroups", "checks")


@dataclass(frozen=True)
class CheckResult:
    """Pass/fail outcome of one invariant check."""

    name: str
    passed: bool
    detail: str = ""

    def serialize(self) -> dict:
        """Get the JSON form."""
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Report:
    """Config echo, mode payload, query ledger and check outcomes."""

    config: dict
    payload: dict
    ledger: dict = field(default_factory=lambda: {"total": 0, "phases": {}})
    wall_time: float = 0.0
    checks: tuple[CheckResult, ...] = ()

    @property
    def failed_checks(self) -> tuple[CheckResult, ...]:
        """Checks that did not pass."""
        return tuple(check for check in self.checks if not check.passed)

    def as_dict(
        self,
        include_timing: bool = False,  # noqa: FBT001, FBT002
    ) -> dict:
        """Get the document that is serialized."""
        document = {
            "config": self.config,
            "payload": self.payload,
            "ledger": self.ledger,
            "checks": [check.serialize() for check in self.checks],
        }
        if include_timing:
            document["wall_time"] = format_float(self.wall_time, ndigits=3)
        return document


def _cell(value: object) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True)


def _csv_records(report: Report) -> list[tuple]:
    payload = report.payload
    if "matrix" in payload:
        return [
            (row_index, column_index, value)
            for row_index, row in enumerate(payload["matrix"])
            for column_index, value in enumerate(row)
        ]
    for key in _RECORD_LISTS:
        if key in payload:
            return [
                (row_index, column, _cell(record[column]))
                for row_index, record in enumerate(payload[key])
                for column in sorted(record)
            ]
    return [(0, key, _cell(payload[key])) for key in sorted(payload)]


def serialize(
    report: Report,
    output_format: OutputFormat,
    include_timing: bool = False,  # noqa: FBT001, FBT002
) -> bytes:
    """Serialize deterministically; CSV flattens matrices row-major."""
    if output_format == OutputFormat.CSV:
        data_frame = DataFrame(
            _csv_records(report),
            columns=REPORT_CSV_COLUMNS,
        )
        return write_data_frame(data_frame).encode()
    text = json.dumps(
        report.as_dict(include_timing),
        sort_keys=True,
        indent=2,
    )
    return f"{text}\n".encode()
