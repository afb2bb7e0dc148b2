"""Code to output general simulation session information."""

from datetime import datetime, timezone

from modules.utils.output_formatting import format_float

UTC = timezone.utc


def get_run_info(mode: str, group_label: str) -> str:
    """Get description of the current run."""
    started = datetime.strftime(
        datetime.now(tz=UTC),
        "%Y-%m-%d %H:%M:%S %Z",
    )
    return f"Simulation run ({mode} on {group_label}) started {started}"


def get_wall_time_info(seconds: float) -> str:
    """Get description of the elapsed wall time."""
    return f"Finished in {format_float(seconds, ndigits=3)} s"
