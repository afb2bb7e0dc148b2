"""Global state as a rational combination of tensor-power branches.

A branch (nu, l, c, phi) stands for c |nu>|l> (x) phi^(x)s. The global
normalization |H|^(-s/2) is never materialized; only its square enters
norms and probabilities.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from modules.definitions.types import CascadeError
from modules.utils.output_formatting import format_rational

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from modules.groups.subgroups import Subgroup

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Branch:
    """One counter-tagged tensor-power term of the state."""

    output: int
    counter: int
    coefficient: Fraction
    couplet: Vector


@dataclass(frozen=True)
class BranchState:
    """Global state of the output, counter and s couplet registers."""

    couplets: int
    hidden_order: int
    branches: tuple[Branch, ...]
    candidates: tuple[Subgroup, ...]

    @property
    def r(self) -> int:
        """Number of candidate subgroups."""
        return len(self.candidates)

    def with_branches(self, branches: tuple[Branch, ...]) -> BranchState:
        """Get a copy holding other branches."""
        return BranchState(
            couplets=self.couplets,
            hidden_order=self.hidden_order,
            branches=branches,
            candidates=self.candidates,
        )


def canonical_scale(vector: Sequence[Fraction]) -> tuple[Fraction, Vector]:
    """Split a vector into (scale, vector with first nonzero entry 1).

    The zero vector gets scale 0.
    """
    for entry in vector:
        if entry != 0:
            return entry, tuple(Fraction(value) / entry for value in vector)
    return Fraction(0), tuple(Fraction(value) for value in vector)


def merge_branches(
    terms: Iterable[tuple[int, int, Fraction, Sequence[Fraction]]],
    couplets: int,
) -> tuple[Branch, ...]:
    """Canonicalize (nu, l, c, phi) terms and merge equal tensor powers.

    The s-th power of the extracted scale is folded into the coefficient;
    zero coefficients and zero vectors are pruned.
    """
    merged: dict[tuple[int, int, Vector], Fraction] = defaultdict(Fraction)
    for output, counter, coefficient, vector in terms:
        if coefficient == 0:
            continue
        scale, couplet = canonical_scale(vector)
        if scale == 0:
            continue
        merged[(output, counter, couplet)] += coefficient * scale**couplets
    return tuple(
        Branch(
            output=output,
            counter=counter,
            coefficient=coefficient,
            couplet=couplet,
        )
        for (output, counter, couplet), coefficient in sorted(merged.items())
        if coefficient != 0
    )


def inner_product(
    left: Sequence[Fraction],
    right: Sequence[Fraction],
) -> Fraction:
    """Get the real inner product of two rational vectors."""
    total = Fraction(0)
    for left_entry, right_entry in zip(left, right, strict=True):
        total += left_entry * right_entry
    return total


class _GramCache:
    """Memoized <phi, psi>^s over the distinct couplet vectors."""

    def __init__(self, couplets: int) -> None:
        self.couplets = couplets
        self.powers: dict[tuple[Vector, Vector], Fraction] = {}

    def power(self, left: Vector, right: Vector) -> Fraction:
        key = (left, right) if left <= right else (right, left)
        if key not in self.powers:
            self.powers[key] = inner_product(*key) ** self.couplets
        return self.powers[key]


def register_norms(
    branches: Sequence[Branch],
    couplets: int,
    hidden_order: int,
) -> dict[tuple[int, int], Fraction]:
    """Get the exact squared norm of every (nu, l) register component."""
    grouped: dict[tuple[int, int], list[Branch]] = defaultdict(list)
    for branch in branches:
        grouped[(branch.output, branch.counter)].append(branch)
    gram = _GramCache(couplets)
    normalization = Fraction(1, hidden_order**couplets)
    norms = {}
    for registers, members in sorted(grouped.items()):
        total = Fraction(0)
        for index, branch in enumerate(members):
            total += branch.coefficient**2 * gram.power(
                branch.couplet,
                branch.couplet,
            )
            for other in members[index + 1 :]:
                total += (
                    2
                    * branch.coefficient
                    * other.coefficient
                    * gram.power(branch.couplet, other.couplet)
                )
        norms[registers] = total * normalization
    return norms


def squared_norm(state: BranchState) -> Fraction:
    """Get the exact squared norm of the state (1 for valid states)."""
    return sum(
        register_norms(
            state.branches,
            state.couplets,
            state.hidden_order,
        ).values(),
        Fraction(0),
    )


def squared_distance(first: BranchState, second: BranchState) -> Fraction:
    """Get the exact squared distance between two states."""
    if (first.couplets, first.hidden_order) != (
        second.couplets,
        second.hidden_order,
    ):
        error_message = "States with different s or |H| cannot be compared"
        raise CascadeError(error_message)
    terms = [
        (branch.output, branch.counter, branch.coefficient, branch.couplet)
        for branch in first.branches
    ]
    terms.extend(
        (branch.output, branch.counter, -branch.coefficient, branch.couplet)
        for branch in second.branches
    )
    difference = merge_branches(terms, first.couplets)
    return sum(
        register_norms(
            difference,
            first.couplets,
            first.hidden_order,
        ).values(),
        Fraction(0),
    )


def dump_branches(state: BranchState) -> list[dict]:
    """Get JSON-able records of every branch."""
    return [
        {
            "output": branch.output,
            "counter": branch.counter,
            "coefficient": format_rational(branch.coefficient),
            "couplet": [format_rational(entry) for entry in branch.couplet],
        }
        for branch in state.branches
    ]
