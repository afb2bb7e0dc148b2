"""Sampling statistics for the seeded sanity checks."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from pandas import Series
from scipy.stats import binom

from modules.definitions.constants import SAMPLING_SIGMAS

if TYPE_CHECKING:
    from collections.abc import Sequence


class SamplingComparison:
    """Observed count of one outcome against its binomial expectation."""

    outcome: int
    count: int
    trials: int
    probability: Fraction
    sigma: float

    def __init__(  # noqa: D107
        self,
        outcome: int,
        count: int,
        trials: int,
        probability: Fraction,
    ) -> None:
        self.outcome = outcome
        self.count = count
        self.trials = trials
        self.probability = probability
        self.sigma = float(binom.std(trials, float(probability)))

    @property
    def deviation(self) -> float:
        """Get |count - n p|."""
        return abs(self.count - self.trials * float(self.probability))

    def within(self, sigmas: float = SAMPLING_SIGMAS) -> bool:
        """Test if the count lies within the given number of sigmas."""
        if self.probability in (0, 1):
            return self.count == self.trials * self.probability
        return self.deviation <= sigmas * self.sigma


def count_outcomes(samples: Sequence[int]) -> dict[int, int]:
    """Count how often every sampled outcome occurs."""
    return {
        int(outcome): int(count)
        for outcome, count in Series(samples).value_counts().items()
    }


def compare_samples(
    samples: Sequence[int],
    probabilities: dict[int, Fraction],
) -> list[SamplingComparison]:
    """Compare sample counts with the exact outcome probabilities."""
    counts = count_outcomes(samples)
    outcomes = sorted(set(counts) | set(probabilities))
    return [
        SamplingComparison(
            outcome=outcome,
            count=counts.get(outcome, 0),
            trials=len(samples),
            probability=probabilities.get(outcome, Fraction(0)),
        )
        for outcome in outcomes
    ]
