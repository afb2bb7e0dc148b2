"""Constants used throughout the project."""

import os
from fractions import Fraction

from dotenv import dotenv_values

from modules.definitions.types import ConfigError

ENV_PREFIX = "HSPSIM_"
DENSE_CAP_ENV = f"{ENV_PREFIX}DENSE_CAP"
S_CAP_ENV = f"{ENV_PREFIX}S_CAP"
GROUP_ORDER_CAP_ENV = f"{ENV_PREFIX}GROUP_ORDER_CAP"
LOG_LEVEL_ENV = f"{ENV_PREFIX}LOG_LEVEL"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def get_config() -> dict[str, str]:
    """Read local config from .env file, overridden by the environment."""
    config = {
        key: value
        for key, value in dotenv_values(".env").items()
        if value is not None
    }
    config.update(
        {
            key: value
            for key, value in os.environ.items()
            if key.startswith(ENV_PREFIX)
        },
    )
    return config


def get_int_from_env(key: str, default: int) -> int:
    """Read a positive integer setting, falling back to the default."""
    value = get_config().get(key, "").strip()
    if value == "":
        return default
    try:
        parsed = int(value)
    except ValueError as error:
        error_message = f"{key} must be an integer, got {value!r}"
        raise ConfigError(error_message) from error
    if parsed < 1:
        error_message = f"{key} must be positive, got {parsed}"
        raise ConfigError(error_message)
    return parsed


def get_log_level() -> str:
    """Get the configured log level name (INFO by default)."""
    level = get_config().get(LOG_LEVEL_ENV, "").strip().upper() or "INFO"
    if level not in LOG_LEVELS:
        error_message = (
            f"{LOG_LEVEL_ENV} must be one of {LOG_LEVELS}, got {level}"
        )
        raise ConfigError(error_message)
    return level


IDENTITY = 0
GROUP_ORDER_CAP = 64
BRUTE_FORCE_ENUMERATION_CAP = 12
MAX_SYMMETRIC_DEGREE = 4
QUATERNION_GROUP_SPEC = "Q8"

DEFAULT_DENSE_CAP = 2**20
DEFAULT_S_CAP = 256
DEFAULT_EPSILON = Fraction(1, 100)
DEFAULT_SEED = 0
DEFAULT_TRIALS = 10**4

LOW_TARGET = Fraction(1, 4)
HIGH_TARGET = Fraction(3, 4)
TARGET_VALUES = (LOW_TARGET, HIGH_TARGET)
# A, its inverse, and A again in the single amplification iteration
PREPARATIONS_PER_ROUND = 3

SAMPLING_SIGMAS = 3
AMPLIFICATION_TOLERANCE = 1e-12
AMPLIFICATION_CHECK_POINTS = (
    Fraction(0),
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(1),
)
TEST_DISTANCE_COUPLETS = (2, 4, 6)
ACCUMULATION_COUPLETS = (4, 8)
SUCCESS_BOUND_COUPLETS = (8, 12, 16)
DENSE_CHECK_MAX_COUPLETS = 8
NEUMANN_POWER_CHECKS = 3
ONE_SIDED_CHECK_SEEDS = range(5)

BUILTIN_CATALOG = [
    "Z:2",
    "Z:3",
    "Z:4",
    "Z:5",
    "Z:6",
    "Z:7",
    "Z:8",
    "Z2^2",
    "Z2^3",
    "S:3",
    "D:4",
    "Q8",
]

RATIONAL_SEPARATOR = "/"
MEMBER_SEPARATOR = ","
ALL_HIDDEN = "all"
REPORT_CSV_COLUMNS = ["row", "col", "value"]
