"""Data utils."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

from slugify import slugify

if TYPE_CHECKING:
    from pandas import DataFrame

    from modules.definitions.types import Mode, OutputFormat


def write_data_frame(
    data_frame: DataFrame,
    path: Path | str | None = None,
) -> str | None:
    """Write data frame to CSV with default settings.

    Without a path the CSV text is returned.
    """
    return data_frame.to_csv(
        path,
        index=False,
        lineterminator="\n",
    )


def get_report_path(
    output_directory: Path | str,
    mode: Mode,
    group_label: str,
    output_format: OutputFormat,
) -> Path:
    """Get the report file path <mode>-<group slug>.<format>."""
    file_name = f"{mode.value}-{slugify(group_label)}.{output_format.value}"
    return Path(output_directory) / file_name


def write_report(data: bytes, path: Path) -> None:
    """Write report bytes, creating the directory if needed."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
