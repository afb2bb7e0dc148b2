"""Query accounting per algorithm phase."""

from __future__ import annotations

import threading

from modules.definitions.types import LedgerPhase, OracleError


class QueryLedger:
    """Exact count of oracle invocations, partitioned by phase."""

    phases: dict[str, int]

    def __init__(self) -> None:  # noqa: D107
        self.phases = {}
        self._lock = threading.Lock()

    @property
    def total(self) -> int:
        """Total number of charged queries."""
        with self._lock:
            return sum(self.phases.values())

    def charge(self, phase: LedgerPhase, count: int = 1) -> None:
        """Charge queries to a phase."""
        if count < 0:
            error_message = f"Cannot charge a negative query count {count}"
            raise OracleError(error_message)
        with self._lock:
            self.phases[phase.value] = self.phases.get(phase.value, 0) + count

    def get(self, phase: LedgerPhase) -> int:
        """Get the queries charged to one phase."""
        with self._lock:
            return self.phases.get(phase.value, 0)

    def absorb(self, other: QueryLedger) -> None:
        """Add the counts of another ledger."""
        for phase_name, count in other.as_dict()["phases"].items():
            self.charge(LedgerPhase(phase_name), count)

    def as_dict(self) -> dict:
        """Get the JSON form {"total": n, "phases": {...}}."""
        with self._lock:
            phases = dict(sorted(self.phases.items()))
        return {"total": sum(phases.values()), "phases": phases}
