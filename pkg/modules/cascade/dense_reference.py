"""Dense reference simulation keeping every couplet's function register.

The amplitude vector has axes (nu, l, g_1, f_1, ..., g_s, f_s) and holds
integer numerators; the common factor N^(-s/2) / denominator is tracked
separately so the whole run stays exact.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from modules.cascade.outcomes import OutcomeDistribution
from modules.cascade.test_operator import counter_permutation
from modules.definitions.constants import (
    DEFAULT_DENSE_CAP,
    DENSE_CAP_ENV,
    get_int_from_env,
)
from modules.definitions.types import CascadeError, DenseCapError
from modules.groups.subgroups import check_size_descending, is_transversal
from modules.oracle.hidden_oracle import make_hidden_oracle

if TYPE_CHECKING:
    from collections.abc import Sequence

    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup

_REGISTER_AXES = 2


def dense_amplitude_count(
    group: FiniteGroup,
    hidden: Subgroup,
    couplets: int,
    r: int,
) -> int:
    """Get (r+1)^2 (N * range size)^s, the size of the dense state."""
    range_size = group.order // hidden.order
    return (r + 1) ** 2 * (group.order * range_size) ** couplets


def coset_block_matrix(
    group: FiniteGroup,
    subgroup: Subgroup,
    transversal: Sequence[int],
) -> np.ndarray:
    """Get sum_t 1_tK 1_tK^T, the integer form of |K| times Pi_K."""
    if not is_transversal(group, subgroup, transversal):
        error_message = (
            f"{list(transversal)} is not a left transversal of "
            f"{list(subgroup.members)}"
        )
        raise CascadeError(error_message)
    blocks = np.zeros((group.order, group.order), dtype=object)
    blocks[:] = 0
    for representative in transversal:
        coset = [group.multiply(representative, member) for member in subgroup]
        for row in coset:
            for column in coset:
                blocks[row, column] = 1
    return blocks


def _initial_amplitudes(
    group: FiniteGroup,
    labels: Sequence[int],
    range_size: int,
    couplets: int,
    r: int,
) -> np.ndarray:
    couplet = np.zeros((group.order, range_size), dtype=object)
    couplet[:] = 0
    for element in group.elements:
        couplet[element, labels[element]] = 1
    amplitudes = np.ones((), dtype=object)
    for _ in range(couplets):
        amplitudes = np.multiply.outer(amplitudes, couplet)
    state = np.zeros((r + 1, r + 1, *amplitudes.shape), dtype=object)
    state[:] = 0
    state[0, 0] = amplitudes
    return state


def _apply_blocks(
    blocks: np.ndarray,
    amplitudes: np.ndarray,
    couplets: int,
) -> np.ndarray:
    for index in range(couplets):
        axis = _REGISTER_AXES + 2 * index
        amplitudes = np.moveaxis(
            np.tensordot(blocks, amplitudes, axes=([1], [axis])),
            0,
            axis,
        )
    return amplitudes


def _apply_counter(
    amplitudes: np.ndarray,
    test_index: int,
    r: int,
) -> np.ndarray:
    permuted = np.empty_like(amplitudes)
    for source, target in counter_permutation(test_index, r).items():
        permuted[target] = amplitudes[source]
    return permuted


def dense_reference_distribution(  # noqa: PLR0913
    group: FiniteGroup,
    hidden: Subgroup,
    couplets: int,
    candidates: Sequence[Subgroup],
    *,
    coset_labels: Sequence[int] | None = None,
    transversals: Sequence[Sequence[int]] | None = None,
    amplitude_cap: int | None = None,
) -> OutcomeDistribution:
    """Run the cascade on the full amplitude tensor and measure the output.

    Test_mu acts on the numerators as Q(B v) + |K|^s v - B v with B the
    coset block matrix on every group axis; the denominator picks up
    |K|^s per test.
    """
    logger = logging.getLogger(__name__)
    if couplets < 1:
        error_message = f"The number of couplets must be positive: {couplets}"
        raise CascadeError(error_message)
    if not check_size_descending(candidates):
        error_message = "Candidates violate the |K_mu| >= |K_mu+1| ordering"
        raise CascadeError(error_message)
    if amplitude_cap is None:
        amplitude_cap = get_int_from_env(DENSE_CAP_ENV, DEFAULT_DENSE_CAP)
    r = len(candidates)
    size = dense_amplitude_count(group, hidden, couplets, r)
    if size > amplitude_cap:
        error_message = (
            f"Dense state for {group.name} with s={couplets} needs {size} "
            f"amplitudes, above the cap of {amplitude_cap}"
        )
        raise DenseCapError(error_message)
    if transversals is None:
        transversals = [candidate.transversal for candidate in candidates]
    oracle = make_hidden_oracle(group, hidden, coset_labels)
    amplitudes = _initial_amplitudes(
        group,
        oracle.labels,
        oracle.range_size,
        couplets,
        r,
    )
    denominator = 1
    for test_index, (candidate, transversal) in enumerate(
        zip(candidates, transversals, strict=True),
        start=1,
    ):
        blocks = coset_block_matrix(group, candidate, transversal)
        scale = candidate.order**couplets
        projected = _apply_blocks(blocks, amplitudes, couplets)
        amplitudes = (
            _apply_counter(projected, test_index, r)
            + scale * amplitudes
            - projected
        )
        denominator *= scale
    squares = (amplitudes * amplitudes).reshape(r + 1, -1).sum(axis=1)
    normalization = denominator**2 * group.order**couplets
    distribution = OutcomeDistribution.from_mapping(
        {
            output: Fraction(int(squares[output]), normalization)
            for output in range(r + 1)
        },
        tuple(candidates),
    )
    logger.debug(
        "Dense reference for %(group)s used %(size)d amplitudes",
        {"group": group.name, "size": size},
    )
    return distribution
