"""Command line parsing into a validated RunConfig."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

import click

from modules.definitions.constants import (
    ALL_HIDDEN,
    DEFAULT_DENSE_CAP,
    DEFAULT_EPSILON,
    DEFAULT_S_CAP,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DENSE_CAP_ENV,
    LOG_LEVELS,
    S_CAP_ENV,
    get_int_from_env,
    get_log_level,
)
from modules.definitions.types import (
    ConfigError,
    GroupError,
    Mode,
    OutputFormat,
    ResourceCapError,
)
from modules.groups.finite_group import build_group
from modules.groups.subgroups import subgroup_from_members
from modules.utils.output_formatting import (
    format_rational,
    parse_members,
    parse_rational,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

_MODES_WITH_HIDDEN = (
    Mode.SIMULATE,
    Mode.IDENTIFY,
    Mode.IDENTIFY_BOUNDED,
    Mode.DECIDE_TRIVIAL,
    Mode.ONE_SIDED,
)


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one harness run."""

    mode: Mode
    group_spec: str | None
    hidden: tuple[int, ...] | None
    couplets: int | None
    epsilon: Fraction
    seed: int
    output_format: OutputFormat
    dense_cap: int
    s_cap: int
    trials: int = DEFAULT_TRIALS
    workers: int = 1
    output_directory: Path | None = None
    timing: bool = False
    debug_branches: bool = False
    log_level: str = "INFO"

    @property
    def hidden_all(self) -> bool:
        """Whether the run fans out over every subgroup."""
        return self.hidden is None

    @property
    def group_label(self) -> str:
        """Group spec, or "catalog" for the builtin verification set."""
        return self.group_spec if self.group_spec is not None else "catalog"

    def serialize(self) -> dict:
        """Get the config echo of a report."""
        return {
            "mode": self.mode.value,
            "group": self.group_label,
            "hidden": ALL_HIDDEN if self.hidden is None else list(self.hidden),
            "s": self.couplets,
            "epsilon": format_rational(self.epsilon),
            "seed": self.seed,
            "format": self.output_format.value,
            "dense_cap": self.dense_cap,
            "s_cap": self.s_cap,
            "trials": self.trials,
        }


@click.command(name="hspsim")
@click.argument(
    "mode",
    type=click.Choice([mode.value for mode in Mode]),
)
@click.option("--group", "group_spec", default=None, help="Group spec.")
@click.option(
    "--hidden",
    default=ALL_HIDDEN,
    show_default=True,
    help='Hidden subgroup members such as "0,3", or "all".',
)
@click.option("--s", "couplets", type=int, default=None, help="Couplets.")
@click.option(
    "--epsilon",
    default=format_rational(DEFAULT_EPSILON),
    show_default=True,
    help="Error bound for the bounded-error modes.",
)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option(
    "--format",
    "output_format",
    type=click.Choice([output_format.value for output_format in OutputFormat]),
    default=OutputFormat.JSON.value,
    show_default=True,
)
@click.option("--dense-cap", type=int, default=None, help="Dense amplitudes.")
@click.option("--s-cap", type=int, default=None, help="Escalation cap on s.")
@click.option(
    "--trials",
    type=click.IntRange(min=1),
    default=DEFAULT_TRIALS,
    show_default=True,
)
@click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
)
@click.option(
    "--output-dir",
    "output_directory",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Write the report to <mode>-<group>.<format> in this directory.",
)
@click.option("--timing", is_flag=True, help="Include wall time.")
@click.option("--debug-branches", is_flag=True, help="Dump branch lists.")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
)
def command(**_: object) -> None:
    """Exact simulator of the polynomial-query hidden subgroup algorithm."""


def _usage_error(flag: str, message: str) -> ConfigError:
    return ConfigError(f"{flag}: {message}")


def _parse_couplets(couplets: int | None) -> int | None:
    if couplets is None:
        return None
    if couplets < 2 or couplets % 2 == 1:  # noqa: PLR2004
        message = f"must be even and at least 2, got {couplets}"
        raise _usage_error("--s", message)
    return couplets


def _parse_epsilon(text: str) -> Fraction:
    try:
        epsilon = parse_rational(text)
    except (ValueError, ZeroDivisionError) as error:
        raise _usage_error("--epsilon", f"not a rational: {text!r}") from error
    if not 0 < epsilon < 1:
        raise _usage_error("--epsilon", f"must lie in (0, 1), got {text}")
    return epsilon


def _parse_group(mode: Mode, group_spec: str | None) -> None:
    if group_spec is None:
        if mode != Mode.VERIFY:
            raise _usage_error("--group", f"required in {mode.value} mode")
        return
    try:
        build_group(group_spec)
    except ResourceCapError:
        raise
    except GroupError as error:
        raise _usage_error("--group", str(error)) from error


def _parse_hidden(
    group_spec: str | None,
    hidden: str,
) -> tuple[int, ...] | None:
    if hidden.strip().lower() == ALL_HIDDEN:
        return None
    try:
        members = parse_members(hidden)
    except ValueError as error:
        raise _usage_error("--hidden", f"malformed list {hidden!r}") from error
    if group_spec is not None:
        try:
            subgroup_from_members(build_group(group_spec), members)
        except GroupError as error:
            raise _usage_error("--hidden", str(error)) from error
    return members


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Parse and validate an argument list."""
    try:
        context = command.make_context("hspsim", list(argv))
    except click.UsageError as error:
        raise ConfigError(error.format_message()) from error
    params = context.params
    mode = Mode(params["mode"])
    couplets = _parse_couplets(params["couplets"])
    epsilon = _parse_epsilon(params["epsilon"])
    _parse_group(mode, params["group_spec"])
    hidden = _parse_hidden(params["group_spec"], params["hidden"])
    if hidden is not None and mode not in _MODES_WITH_HIDDEN:
        raise _usage_error("--hidden", f"not used in {mode.value} mode")
    dense_cap = params["dense_cap"]
    s_cap = params["s_cap"]
    for flag, value in (("--dense-cap", dense_cap), ("--s-cap", s_cap)):
        if value is not None and value < 1:
            raise _usage_error(flag, f"must be positive, got {value}")
    return RunConfig(
        mode=mode,
        group_spec=params["group_spec"],
        hidden=hidden,
        couplets=couplets,
        epsilon=epsilon,
        seed=params["seed"],
        output_format=OutputFormat(params["output_format"]),
        dense_cap=dense_cap
        or get_int_from_env(DENSE_CAP_ENV, DEFAULT_DENSE_CAP),
        s_cap=s_cap or get_int_from_env(S_CAP_ENV, DEFAULT_S_CAP),
        trials=params["trials"],
        workers=params["workers"],
        output_directory=params["output_directory"],
        timing=params["timing"],
        debug_branches=params["debug_branches"],
        log_level=(params["log_level"] or get_log_level()).upper(),
    )
