"""First-register measurement distributions and sampling."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from modules.cascade.branch_state import register_norms
from modules.definitions.types import ThisShouldNeverHappenError
from modules.utils.output_formatting import format_rational

if TYPE_CHECKING:
    from collections.abc import Mapping

    from modules.cascade.branch_state import BranchState
    from modules.groups.subgroups import Subgroup


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact probabilities of the measured first-register values."""

    probabilities: tuple[tuple[int, Fraction], ...]
    candidates: tuple[Subgroup, ...]

    def __post_init__(self) -> None:  # noqa: D105
        total = sum((value for _, value in self.probabilities), Fraction(0))
        if total != 1 or any(
            not 0 <= value <= 1 for _, value in self.probabilities
        ):
            error_message = (
                f"Outcome probabilities must lie in [0, 1] and sum to 1, "
                f"got total {total}"
            )
            raise ThisShouldNeverHappenError(error_message)

    @classmethod
    def from_mapping(
        cls,
        probabilities: Mapping[int, Fraction],
        candidates: tuple[Subgroup, ...],
    ) -> OutcomeDistribution:
        """Build from an outcome mapping, dropping zero entries."""
        return cls(
            probabilities=tuple(
                (outcome, Fraction(value))
                for outcome, value in sorted(probabilities.items())
                if value != 0
            ),
            candidates=candidates,
        )

    def probability(self, outcome: int) -> Fraction:
        """Get the exact probability of one outcome."""
        return dict(self.probabilities).get(outcome, Fraction(0))

    def as_dict(self) -> dict[int, Fraction]:
        """Get the outcome mapping."""
        return dict(self.probabilities)

    def serialize(self) -> dict[str, str]:
        """Get the JSON form with "p/q" strings."""
        return {
            str(outcome): format_rational(value)
            for outcome, value in self.probabilities
        }


def first_register_distribution(state: BranchState) -> OutcomeDistribution:
    """Get the exact distribution of measuring the output register."""
    probabilities: dict[int, Fraction] = defaultdict(Fraction)
    norms = register_norms(state.branches, state.couplets, state.hidden_order)
    for (output, _), norm in norms.items():
        probabilities[output] += norm
    return OutcomeDistribution.from_mapping(probabilities, state.candidates)


def _draw(distribution: OutcomeDistribution, uniform: float) -> int:
    threshold = Fraction(uniform)
    cumulative = Fraction(0)
    for outcome, value in distribution.probabilities:
        cumulative += value
        if threshold < cumulative:
            return outcome
    return distribution.probabilities[-1][0]


def sample_outcome(distribution: OutcomeDistribution, seed: int) -> int:
    """Draw one outcome, deterministic given the seed."""
    generator = np.random.default_rng(seed)
    return _draw(distribution, float(generator.random()))


def sample_outcomes(
    distribution: OutcomeDistribution,
    seed: int,
    count: int,
) -> list[int]:
    """Draw several outcomes from one seeded generator."""
    generator = np.random.default_rng(seed)
    return [
        _draw(distribution, float(uniform))
        for uniform in generator.random(count)
    ]
