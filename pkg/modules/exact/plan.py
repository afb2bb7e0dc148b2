"""Bias vectors, ExactTest probabilities and one amplification round."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from modules.definitions.constants import (
    DEFAULT_S_CAP,
    HIGH_TARGET,
    LOW_TARGET,
    S_CAP_ENV,
    TARGET_VALUES,
    get_int_from_env,
)
from modules.definitions.types import (
    EscalationCapError,
    EscalationNeededError,
    ExactEngineError,
    SingularMatrixError,
    ThisShouldNeverHappenError,
)
from modules.exact.conditional_matrix import build_conditional_matrix
from modules.exact.linear_algebra import rational_vector
from modules.utils.output_formatting import format_rational_vector

if TYPE_CHECKING:
    from collections.abc import Collection, Sequence

    from modules.exact.conditional_matrix import ConditionalMatrix
    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup


@dataclass(frozen=True)
class ExactPlan:
    """Targets y over {1/4, 3/4} and the bias vector x = M^-1 y."""

    targets: tuple[Fraction, ...]
    bias: tuple[Fraction, ...]
    couplets: int
    candidates: tuple[Subgroup, ...]

    @property
    def high_indices(self) -> tuple[int, ...]:
        """Candidate positions in Y_3/4."""
        return tuple(
            index
            for index, target in enumerate(self.targets)
            if target == HIGH_TARGET
        )

    def serialize(self) -> dict:
        """Get the JSON form with "p/q" strings."""
        return {
            "s": self.couplets,
            "x": format_rational_vector(self.bias),
            "y": format_rational_vector(self.targets),
        }


def partition_targets(
    r: int,
    high_indices: Collection[int],
) -> tuple[Fraction, ...]:
    """Assign 3/4 to the given positions and 1/4 to the others."""
    return tuple(
        HIGH_TARGET if index in high_indices else LOW_TARGET
        for index in range(r)
    )


def solve_bias_vector(
    matrix: ConditionalMatrix,
    targets: Sequence[Fraction],
) -> ExactPlan:
    """Solve M x = y exactly, asking for a larger s if x leaves [0, 1]."""
    if len(targets) != matrix.r:
        error_message = f"Got {len(targets)} targets for {matrix.r} candidates"
        raise ExactEngineError(error_message)
    if any(target not in TARGET_VALUES for target in targets):
        error_message = "Targets must be drawn from {1/4, 3/4}"
        raise ExactEngineError(error_message)
    targets_vector = rational_vector(targets)
    bias = matrix.inverse.dot(targets_vector)
    if any(not 0 <= value <= 1 for value in bias):
        error_message = (
            f"Bias vector leaves [0, 1] with s={matrix.couplets}"
        )
        raise EscalationNeededError(error_message, matrix.couplets)
    if list(matrix.entries.dot(bias)) != list(targets_vector):
        error_message = "M x differs from y after exact inversion"
        raise ThisShouldNeverHappenError(error_message)
    return ExactPlan(
        targets=tuple(Fraction(target) for target in targets),
        bias=tuple(Fraction(value) for value in bias),
        couplets=matrix.couplets,
        candidates=matrix.candidates,
    )


def exact_test_probability(
    matrix: ConditionalMatrix,
    bias: Sequence[Fraction],
    row_index: int,
) -> Fraction:
    """Get sum_mu x_mu M[nu, mu], the ancilla-1 probability of ExactTest."""
    return row_probability(matrix.row(row_index), bias)


def row_probability(
    row: Sequence[Fraction],
    bias: Sequence[Fraction],
) -> Fraction:
    """Get sum_mu x_mu Prob[K_mu | H] for one conditional row."""
    return sum(
        (
            Fraction(entry) * Fraction(value)
            for entry, value in zip(row, bias, strict=True)
        ),
        Fraction(0),
    )


def amplify_once(probability: Fraction) -> Fraction:
    """Get p (3 - 4p)^2, i.e. sin^2(3 arcsin sqrt p)."""
    probability = Fraction(probability)
    if not 0 <= probability <= 1:
        error_message = f"Probability {probability} is outside [0, 1]"
        raise ExactEngineError(error_message)
    return probability * (3 - 4 * probability) ** 2


def build_plan(  # noqa: PLR0913
    group: FiniteGroup,
    candidates: Sequence[Subgroup],
    targets: Sequence[Fraction],
    couplets: int,
    *,
    s_cap: int | None = None,
    workers: int = 1,
) -> tuple[ConditionalMatrix, ExactPlan]:
    """Build M and solve for x, doubling s until x lies in [0, 1]."""
    logger = logging.getLogger(__name__)
    if s_cap is None:
        s_cap = get_int_from_env(S_CAP_ENV, DEFAULT_S_CAP)
    while True:
        if couplets > s_cap:
            error_message = (
                f"Escalating s to {couplets} would exceed the cap of {s_cap}"
            )
            raise EscalationCapError(error_message)
        matrix = build_conditional_matrix(group, candidates, couplets, workers)
        try:
            return matrix, solve_bias_vector(matrix, targets)
        except (EscalationNeededError, SingularMatrixError) as error:
            logger.warning(
                "Escalating s from %(s)d: %(reason)s",
                {"s": couplets, "reason": error},
            )
            couplets *= 2
