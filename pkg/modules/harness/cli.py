"""Command line entry point and exit codes."""

from __future__ import annotations

import logging
import sys
from typing import TYPE_CHECKING

import click

from modules.definitions.types import (
    ConfigError,
    ExitCode,
    ResourceCapError,
    SimulationError,
)
from modules.harness.execute import execute
from modules.harness.report import serialize
from modules.harness.run_config import parse_config
from modules.set_up_simulation import set_up_simulation
from modules.utils.data import get_report_path, write_report

if TYPE_CHECKING:
    from collections.abc import Sequence


def _exit_code(error: SimulationError) -> ExitCode:
    if isinstance(error, ResourceCapError):
        return ExitCode.RESOURCE_CAP
    if isinstance(error, ConfigError):
        return ExitCode.USAGE_ERROR
    return ExitCode.INVARIANT_FAILURE


def main(argv: Sequence[str] | None = None) -> int:
    """Run the harness and return the process exit code."""
    logger = logging.getLogger(__name__)
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        set_up_simulation()
        config = parse_config(argv)
        set_up_simulation(config.log_level)
        report = execute(config)
    except click.exceptions.Exit as exit_request:
        return exit_request.exit_code
    except SimulationError as error:
        logger.error(error.tagged_message())  # noqa: TRY400
        return _exit_code(error)
    data = serialize(report, config.output_format, config.timing)
    if config.output_directory is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        path = get_report_path(
            config.output_directory,
            config.mode,
            config.group_label,
            config.output_format,
        )
        write_report(data, path)
        logger.info("Report written to %(path)s", {"path": path})
    for check in report.failed_checks:
        logger.error("Failed check: %(name)s", {"name": check.name})
    if report.failed_checks:
        return ExitCode.INVARIANT_FAILURE
    return ExitCode.SUCCESS


def run() -> None:
    """Console script wrapper."""
    sys.exit(main())
