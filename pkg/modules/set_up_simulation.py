"""Code to set up a simulation run."""

import logging

from modules.definitions.constants import get_log_level


def set_up_simulation(level: str | None = None) -> None:
    """Set up logging to stderr at the configured level."""
    logging.basicConfig(
        format="[%(levelname)s] %(message)s",
        level=(level or get_log_level()).upper(),
        force=True,
    )
