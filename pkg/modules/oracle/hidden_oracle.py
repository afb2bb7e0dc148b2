"""Strictly H-periodic black-box functions."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from modules.definitions.types import LedgerPhase, OracleError
from modules.groups.subgroups import is_closed, left_transversal
from modules.oracle.query_ledger import QueryLedger

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup


class HiddenOracle:
    """Labeling f of G, constant and distinct on the left cosets of H."""

    group: FiniteGroup
    hidden: Subgroup
    labels: tuple[int, ...]
    ledger: QueryLedger

    def __init__(  # noqa: D107
        self,
        group: FiniteGroup,
        hidden: Subgroup,
        labels: tuple[int, ...],
    ) -> None:
        self.group = group
        self.hidden = hidden
        self.labels = labels
        self.ledger = QueryLedger()

    @property
    def query_count(self) -> int:
        """Number of queries so far (never decreases)."""
        return self.ledger.total

    @property
    def range_size(self) -> int:
        """Number of distinct labels, N / |H|."""
        return self.group.order // self.hidden.order

    def query(
        self,
        element: int,
        phase: LedgerPhase = LedgerPhase.CLASSICAL,
    ) -> int:
        """Evaluate f on one element and charge one query."""
        if not 0 <= element < self.group.order:
            error_message = (
                f"Element id {element} is out of range for {self.group.name}"
            )
            raise OracleError(error_message)
        self.ledger.charge(phase)
        return self.labels[element]

    def charge(self, phase: LedgerPhase, count: int) -> None:
        """Charge applications of O_f made in superposition."""
        self.ledger.charge(phase, count)


def _coset_labels(
    group: FiniteGroup,
    hidden: Subgroup,
    coset_labels: Sequence[int] | None,
) -> tuple[int, ...]:
    representatives = left_transversal(group, hidden)
    if coset_labels is None:
        coset_labels = range(len(representatives))
    if sorted(coset_labels) != list(range(len(representatives))):
        error_message = (
            f"Coset labels must be a permutation of "
            f"0..{len(representatives) - 1}"
        )
        raise OracleError(error_message)
    labels = [0] * group.order
    for representative, label in zip(
        representatives,
        coset_labels,
        strict=True,
    ):
        for member in hidden.members:
            labels[group.multiply(representative, member)] = label
    return tuple(labels)


def make_hidden_oracle(
    group: FiniteGroup,
    hidden: Subgroup,
    coset_labels: Sequence[int] | None = None,
) -> HiddenOracle:
    """Build the canonical oracle for H.

    The label of coset gH is the index of its minimal element among the
    sorted coset minima, unless a permutation of those indices is given.
    """
    if hidden.group is not group and hidden.group != group:
        error_message = f"Hidden subgroup does not belong to {group.name}"
        raise OracleError(error_message)
    if not is_closed(group, hidden.members):
        error_message = (
            f"Hidden members {list(hidden.members)} are not a subgroup"
        )
        raise OracleError(error_message)
    return HiddenOracle(
        group=group,
        hidden=hidden,
        labels=_coset_labels(group, hidden, coset_labels),
    )


def relabel_oracle(
    oracle: HiddenOracle,
    coset_labels: Sequence[int],
) -> HiddenOracle:
    """Get an oracle with the same hidden subgroup and permuted labels."""
    return make_hidden_oracle(oracle.group, oracle.hidden, coset_labels)


def is_strictly_periodic(oracle: HiddenOracle) -> bool:
    """Test f(g) = f(g') exactly when g, g' share a left coset of H."""
    group = oracle.group
    for element in group.elements:
        for other in group.elements:
            same_coset = oracle.hidden.contains(
                group.multiply(group.inverse(element), other),
            )
            same_label = oracle.labels[element] == oracle.labels[other]
            if same_coset != same_label:
                return False
    return True


def sanitize_output(
    oracle: HiddenOracle,
    elements: Iterable[int],
) -> tuple[int, ...]:
    """Keep the elements x with f(x) = f(1_G), charging |X| + 1 queries."""
    logger = logging.getLogger(__name__)
    candidates = sorted(set(elements))
    identity_label = oracle.query(oracle.group.identity, LedgerPhase.SANITIZE)
    kept = tuple(
        element
        for element in candidates
        if oracle.query(element, LedgerPhase.SANITIZE) == identity_label
    )
    if len(kept) != len(candidates):
        logger.warning(
            "Sanitizing removed %(removed)d elements outside H",
            {"removed": len(candidates) - len(kept)},
        )
    return kept
