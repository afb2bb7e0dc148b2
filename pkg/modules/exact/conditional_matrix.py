"""The conditional matrix M of Prob[K_mu | H]."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING

import numpy as np

from modules.cascade.outcomes import first_register_distribution
from modules.cascade.test_operator import prepare_initial, run_cascade
from modules.definitions.types import (
    ExactEngineError,
    ThisShouldNeverHappenError,
)
from modules.exact.linear_algebra import identity_matrix, invert_exact
from modules.groups.subgroups import check_size_descending
from modules.oracle.hidden_oracle import make_hidden_oracle
from modules.utils.output_formatting import format_rational_matrix

if TYPE_CHECKING:
    from collections.abc import Sequence

    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup


@dataclass(frozen=True, eq=False)
class ConditionalMatrix:
    """Rows are hidden subgroups, columns are cascade outcomes K_mu."""

    candidates: tuple[Subgroup, ...]
    entries: np.ndarray
    couplets: int

    @property
    def r(self) -> int:
        """Number of candidates."""
        return len(self.candidates)

    def row(self, index: int) -> tuple[Fraction, ...]:
        """Get the outcome distribution of one hidden candidate."""
        return tuple(self.entries[index])

    @cached_property
    def delta(self) -> np.ndarray:
        """Get I - M."""
        return identity_matrix(self.r) - self.entries

    @cached_property
    def inverse(self) -> np.ndarray:
        """Get the exact inverse of M."""
        return invert_exact(self.entries)

    def serialize(self) -> list[list[str]]:
        """Get the entries as "p/q" strings, row-major."""
        return format_rational_matrix(self.entries)


@lru_cache(maxsize=4096)
def conditional_row(
    group: FiniteGroup,
    hidden: Subgroup,
    candidates: tuple[Subgroup, ...],
    couplets: int,
) -> tuple[Fraction, ...]:
    """Get Prob[K_mu | H] for every candidate K_mu, in candidate order.

    Uses a private oracle, so nothing is charged to a caller's ledger.
    """
    oracle = make_hidden_oracle(group, hidden)
    state = run_cascade(
        prepare_initial(group, oracle, couplets, candidates),
    )
    distribution = first_register_distribution(state)
    if distribution.probability(0) != 0:
        error_message = (
            f"No test fired for hidden {list(hidden.members)} although the "
            f"trivial subgroup is the last candidate"
        )
        raise ThisShouldNeverHappenError(error_message)
    return tuple(
        distribution.probability(outcome)
        for outcome in range(1, len(candidates) + 1)
    )


def check_candidates(candidates: Sequence[Subgroup]) -> None:
    """Require size-descending candidates ending with {1_G}."""
    if not candidates:
        error_message = "The candidate list is empty"
        raise ExactEngineError(error_message)
    if not check_size_descending(candidates):
        error_message = "Candidates violate the |K_mu| >= |K_mu+1| ordering"
        raise ExactEngineError(error_message)
    if not candidates[-1].is_trivial:
        error_message = "The trivial subgroup must be the last candidate"
        raise ExactEngineError(error_message)


def build_conditional_matrix(
    group: FiniteGroup,
    candidates: Sequence[Subgroup],
    couplets: int,
    workers: int = 1,
) -> ConditionalMatrix:
    """Run the cascade for every candidate as hidden subgroup.

    Rows are independent and may be computed on several threads; the
    result does not depend on the number of workers.
    """
    logger = logging.getLogger(__name__)
    candidates = tuple(candidates)
    check_candidates(candidates)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(
                executor.map(
                    lambda hidden: conditional_row(
                        group,
                        hidden,
                        candidates,
                        couplets,
                    ),
                    candidates,
                ),
            )
    else:
        rows = [
            conditional_row(group, hidden, candidates, couplets)
            for hidden in candidates
        ]
    entries = np.empty((len(candidates), len(candidates)), dtype=object)
    for index, row in enumerate(rows):
        entries[index, :] = row
    logger.info(
        "Built the %(r)dx%(r)d conditional matrix of %(group)s with s=%(s)d",
        {"r": len(candidates), "group": group.name, "s": couplets},
    )
    return ConditionalMatrix(
        candidates=candidates,
        entries=entries,
        couplets=couplets,
    )
