"""Types used throughout the project."""

from __future__ import annotations

from enum import Enum, IntEnum


class ThisShouldNeverHappenError(Exception):
    """Use this when checking for things that are not expected to happen."""


class SimulationError(Exception):
    """Base class for errors raised by the simulator."""

    module = "hspsim"

    def tagged_message(self) -> str:
        """Get the error message prefixed with the originating module."""
        return f"[{self.module}] {self}"


class ResourceCapError(SimulationError):
    """A configured resource cap would be exceeded."""


class GroupError(SimulationError):
    """Malformed group specification or violated group axioms."""

    module = "group_core"


class GroupAxiomError(GroupError):
    """A multiplication table violates the group axioms."""

    failing_triple: tuple[int, int, int] | None

    def __init__(  # noqa: D107
        self,
        message: str,
        failing_triple: tuple[int, int, int] | None = None,
    ) -> None:
        super().__init__(message)
        self.failing_triple = failing_triple


class SubgroupError(GroupError):
    """A member set is not a subgroup (or belongs to another group)."""


class GroupOrderCapError(GroupError, ResourceCapError):
    """The group is larger than the configured order cap."""


class OracleError(SimulationError):
    """Invalid oracle construction or query."""

    module = "oracle_model"


class CascadeError(SimulationError):
    """Invalid input to the Test cascade simulation."""

    module = "cascade_sim"


class DenseCapError(CascadeError, ResourceCapError):
    """The dense reference state would exceed the amplitude cap."""


class ExactEngineError(SimulationError):
    """Failure in the exact identification stage."""

    module = "exact_engine"


class SingularMatrixError(ExactEngineError):
    """The conditional matrix is not invertible (s too small)."""


class EscalationNeededError(ExactEngineError):
    """The bias vector leaves [0, 1] and s has to be increased."""

    couplets: int

    def __init__(self, message: str, couplets: int) -> None:  # noqa: D107
        super().__init__(message)
        self.couplets = couplets


class EscalationCapError(ExactEngineError, ResourceCapError):
    """Doubling s would exceed the configured cap."""


class ConfigError(SimulationError):
    """Invalid command line or environment configuration."""

    module = "cli_harness"


class Mode(Enum):
    """Available harness modes."""

    SUBGROUPS = "subgroups"
    SIMULATE = "simulate"
    MATRIX = "matrix"
    IDENTIFY = "identify"
    IDENTIFY_BOUNDED = "identify-bounded"
    DECIDE_TRIVIAL = "decide-trivial"
    ONE_SIDED = "one-sided"
    VERIFY = "verify"


class OutputFormat(Enum):
    """Report serialization formats."""

    JSON = "json"
    CSV = "csv"


class LedgerPhase(Enum):
    """Algorithm phases that oracle queries are charged to."""

    PREPARE = "prepare"
    UNPREPARE = "unprepare"
    SANITIZE = "sanitize"
    CLASSICAL = "classical"


class ExitCode(IntEnum):
    """Process exit codes of the command line."""

    SUCCESS = 0
    USAGE_ERROR = 1
    INVARIANT_FAILURE = 2
    RESOURCE_CAP = 3
