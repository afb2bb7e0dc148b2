"""Initial state, the Test_mu operators and the full cascade."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import TYPE_CHECKING

from modules.cascade.branch_state import Branch, BranchState, merge_branches
from modules.definitions.types import CascadeError, LedgerPhase
from modules.groups.subgroups import check_size_descending

if TYPE_CHECKING:
    from collections.abc import Sequence

    from modules.cascade.branch_state import Vector
    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup
    from modules.oracle.hidden_oracle import HiddenOracle


def counter_step(
    test_index: int,
    output: int,
    counter: int,
) -> tuple[int, int]:
    """Apply Q_mu to reachable register values.

    (0, 0) becomes (mu, 1); once counting started only the counter moves.
    """
    if counter == 0:
        if output != 0:
            error_message = f"Unreachable registers ({output}, {counter})"
            raise CascadeError(error_message)
        return test_index, 1
    return output, counter + 1


def counter_permutation(
    test_index: int,
    r: int,
) -> dict[tuple[int, int], tuple[int, int]]:
    """Complete Q_mu to a permutation of all (r+1)^2 register values.

    Values unreachable from (0, 0) are paired up in sorted order.
    """
    registers = [
        (output, counter) for output in range(r + 1) for counter in range(r + 1)
    ]
    permutation = {}
    for output, counter in registers:
        if counter == 0 and output == 0:
            permutation[(output, counter)] = (test_index, 1)
        elif 0 < counter < r:
            permutation[(output, counter)] = (output, counter + 1)
    free_sources = [
        registers_value
        for registers_value in registers
        if registers_value not in permutation
    ]
    used_targets = set(permutation.values())
    free_targets = [
        registers_value
        for registers_value in registers
        if registers_value not in used_targets
    ]
    permutation.update(zip(free_sources, free_targets, strict=True))
    return permutation


def projector_apply(
    group: FiniteGroup,
    subgroup: Subgroup,
    transversal: Sequence[int],
    vector: Sequence[Fraction],
) -> Vector:
    """Average a vector over every left coset tK of the transversal."""
    if len(vector) != group.order:
        error_message = (
            f"Couplet vector has length {len(vector)}, expected {group.order}"
        )
        raise CascadeError(error_message)
    projected = [Fraction(0)] * group.order
    for representative in transversal:
        coset = [
            group.multiply(representative, member) for member in subgroup
        ]
        average = Fraction(
            sum((Fraction(vector[element]) for element in coset), Fraction(0)),
            subgroup.order,
        )
        for element in coset:
            projected[element] = average
    return tuple(projected)


def prepare_initial(
    group: FiniteGroup,
    oracle: HiddenOracle,
    couplets: int,
    candidates: Sequence[Subgroup] = (),
) -> BranchState:
    """Prepare the initial state, charging s queries.

    Every couplet starts as the indicator vector of H, the conditioned and
    translated form of the uniform superposition over (g, f(g)).
    """
    if couplets < 1:
        error_message = f"The number of couplets must be positive: {couplets}"
        raise CascadeError(error_message)
    oracle.charge(LedgerPhase.PREPARE, couplets)
    indicator = tuple(Fraction(entry) for entry in oracle.hidden.indicator())
    return BranchState(
        couplets=couplets,
        hidden_order=oracle.hidden.order,
        branches=(
            Branch(
                output=0,
                counter=0,
                coefficient=Fraction(1),
                couplet=indicator,
            ),
        ),
        candidates=tuple(candidates),
    )


def apply_test(state: BranchState, test_index: int) -> BranchState:
    """Apply Test_mu = Q_mu (x) P_s,mu + I (x) (I - P_s,mu), mu 1-based.

    Each branch splits into (Q(nu, l), c, P phi), (nu, l, c, phi) and
    (nu, l, -c, P phi) before merging.
    """
    if not 1 <= test_index <= state.r:
        error_message = f"Test index {test_index} is outside 1..{state.r}"
        raise CascadeError(error_message)
    subgroup = state.candidates[test_index - 1]
    group = subgroup.group
    projections: dict[Vector, Vector] = {}
    terms = []
    for branch in state.branches:
        if branch.couplet not in projections:
            projections[branch.couplet] = projector_apply(
                group,
                subgroup,
                subgroup.transversal,
                branch.couplet,
            )
        projected = projections[branch.couplet]
        output, counter = counter_step(
            test_index,
            branch.output,
            branch.counter,
        )
        terms.append((output, counter, branch.coefficient, projected))
        terms.append(
            (branch.output, branch.counter, branch.coefficient, branch.couplet),
        )
        terms.append(
            (branch.output, branch.counter, -branch.coefficient, projected),
        )
    return state.with_branches(merge_branches(terms, state.couplets))


def run_cascade(
    state: BranchState,
    candidates: Sequence[Subgroup] | None = None,
) -> BranchState:
    """Apply Test_1 .. Test_r in order to a freshly prepared state."""
    logger = logging.getLogger(__name__)
    if candidates is not None:
        state = BranchState(
            couplets=state.couplets,
            hidden_order=state.hidden_order,
            branches=state.branches,
            candidates=tuple(candidates),
        )
    if not check_size_descending(state.candidates):
        error_message = "Candidates violate the |K_mu| >= |K_mu+1| ordering"
        raise CascadeError(error_message)
    if any(branch.counter != 0 for branch in state.branches):
        error_message = "The cascade must start from a freshly prepared state"
        raise CascadeError(error_message)
    for test_index in range(1, state.r + 1):
        state = apply_test(state, test_index)
        logger.debug(
            "Test %(index)d leaves %(branches)d branches",
            {"index": test_index, "branches": len(state.branches)},
        )
    return state
