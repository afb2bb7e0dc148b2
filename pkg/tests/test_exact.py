"""Tests of s selection, exact inversion, M and the bias vectors."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.definitions.types import (
    EscalationCapError,
    EscalationNeededError,
    ExactEngineError,
    SingularMatrixError,
)
from modules.exact.conditional_matrix import (
    ConditionalMatrix,
    build_conditional_matrix,
    check_candidates,
)
from modules.exact.linear_algebra import (
    identity_matrix,
    invert_exact,
    is_identity,
    matrix_power,
    neumann_partial_sum,
    rational_matrix,
)
from modules.exact.parameters import (
    bounded_error_bound,
    ceil_log2,
    choose_s_bounded,
    choose_s_exact,
)
from modules.exact.plan import (
    amplify_once,
    build_plan,
    exact_test_probability,
    partition_targets,
    solve_bias_vector,
)
from tests.conftest import get_catalog, get_group

QUARTER, THREE_QUARTERS = Fraction(1, 4), Fraction(3, 4)


def _order_two_matrix(couplets=2):
    return build_conditional_matrix(
        get_group("Z:2"),
        get_catalog("Z:2").subgroups,
        couplets,
    )


def _matrix(rows):
    entries = rational_matrix(rows)
    return ConditionalMatrix(
        candidates=tuple(get_catalog("Z:4").subgroups[: len(rows)]),
        entries=entries,
        couplets=2,
    )


@pytest.mark.parametrize(("value", "expected"), [(1, 0), (2, 1), (5, 3)])
def test_ceil_log2(value, expected):
    assert ceil_log2(value) == expected


def test_ceil_log2_needs_positive_values():
    with pytest.raises(ExactEngineError):
        ceil_log2(0)


@pytest.mark.parametrize(("r", "expected"), [(2, 10), (6, 20), (10, 24)])
def test_choose_s_exact(r, expected):
    assert choose_s_exact(r) == expected


@pytest.mark.parametrize(
    ("r", "epsilon", "expected"),
    [(2, QUARTER, 10), (6, Fraction(1, 2**20), 50)],
)
def test_choose_s_bounded(r, epsilon, expected):
    couplets = choose_s_bounded(r, epsilon)
    assert couplets == expected
    assert Fraction(4 * r, 2 ** (couplets // 2)) <= epsilon


@pytest.mark.parametrize("epsilon", [Fraction(0), Fraction(1), Fraction(2)])
def test_choose_s_bounded_rejects_epsilon(epsilon):
    with pytest.raises(ExactEngineError):
        choose_s_bounded(2, epsilon)


def test_bounded_error_bound():
    assert bounded_error_bound(2, 10) == Fraction(3, 4)
    assert bounded_error_bound(2, 11) == Fraction(3, 4)


def test_invert_example():
    inverse = invert_exact(rational_matrix([[1, 0], ["1/4", "3/4"]]))
    expected = rational_matrix([[1, 0], ["-1/3", "4/3"]])
    assert bool(np.all(inverse == expected))


def test_singular_matrix():
    with pytest.raises(SingularMatrixError):
        invert_exact(rational_matrix([[1, 2], [2, 4]]))


def test_non_square_matrix():
    with pytest.raises(ExactEngineError):
        invert_exact(np.zeros((2, 3), dtype=object))


@settings(max_examples=30)
@given(
    data=st.data(),
    size=st.integers(1, 5),
)
def test_inverse_of_diagonally_dominant_matrices(data, size):
    entry = st.fractions(min_value=-1, max_value=1, max_denominator=9)
    rows = [
        [data.draw(entry) for _ in range(size)] for _ in range(size)
    ]
    for index, row in enumerate(rows):
        row[index] = sum(abs(value) for value in row) + 1
    matrix = rational_matrix(rows)
    assert is_identity(matrix.dot(invert_exact(matrix)))


def test_neumann_partial_sum_of_order_two_matrix():
    matrix = rational_matrix([[1, 0], ["1/4", "3/4"]])
    partial = neumann_partial_sum(matrix, 2)
    delta = identity_matrix(2) - matrix
    expected = identity_matrix(2) + delta + matrix_power(delta, 2)
    assert bool(np.all(partial == expected))
    assert partial[1, 1] == 1 + QUARTER + QUARTER**2


@pytest.mark.parametrize(
    ("couplets", "second_row"),
    [(2, [QUARTER, THREE_QUARTERS]), (4, ["1/16", "15/16"])],
)
def test_conditional_matrix_of_order_two_group(couplets, second_row):
    matrix = _order_two_matrix(couplets)
    expected = rational_matrix([[1, 0], second_row])
    assert bool(np.all(matrix.entries == expected))
    assert matrix.r == 2


def test_conditional_matrix_serialization():
    assert _order_two_matrix().serialize() == [
        ["1/1", "0/1"],
        ["1/4", "3/4"],
    ]


@pytest.mark.parametrize("spec", ["Z:6", "S:3"])
def test_rows_of_the_conditional_matrix_are_distributions(spec):
    catalog = get_catalog(spec)
    matrix = build_conditional_matrix(get_group(spec), catalog.subgroups, 4)
    for index in range(matrix.r):
        assert sum(matrix.row(index)) == 1
        assert matrix.row(index)[index] > 0


def test_workers_do_not_change_the_matrix():
    catalog = get_catalog("S:3")
    group = get_group("S:3")
    single = build_conditional_matrix(group, catalog.subgroups, 6)
    threaded = build_conditional_matrix(group, catalog.subgroups, 6, workers=3)
    assert single.serialize() == threaded.serialize()


def test_candidates_must_end_with_trivial_subgroup():
    subgroups = get_catalog("Z:6").subgroups
    with pytest.raises(ExactEngineError):
        check_candidates(subgroups[:-1])
    with pytest.raises(ExactEngineError):
        check_candidates(())
    with pytest.raises(ExactEngineError):
        check_candidates(tuple(reversed(subgroups)))


def test_partition_targets():
    assert partition_targets(3, (0,)) == (THREE_QUARTERS, QUARTER, QUARTER)


def test_solve_bias_vector_example():
    plan = solve_bias_vector(_order_two_matrix(), (THREE_QUARTERS, QUARTER))
    assert plan.bias == (THREE_QUARTERS, Fraction(1, 12))
    assert plan.high_indices == (0,)
    assert plan.serialize() == {
        "s": 2,
        "x": ["3/4", "1/12"],
        "y": ["3/4", "1/4"],
    }


def test_exact_test_probability_example():
    matrix = _order_two_matrix()
    plan = solve_bias_vector(matrix, (THREE_QUARTERS, QUARTER))
    assert exact_test_probability(matrix, plan.bias, 0) == THREE_QUARTERS
    assert exact_test_probability(matrix, plan.bias, 1) == QUARTER


def test_bias_outside_unit_interval_needs_escalation():
    matrix = _matrix([[1, 0], [THREE_QUARTERS, QUARTER]])
    with pytest.raises(EscalationNeededError) as error_info:
        solve_bias_vector(matrix, (QUARTER, THREE_QUARTERS))
    assert error_info.value.couplets == 2


def test_targets_must_be_quarters():
    with pytest.raises(ExactEngineError):
        solve_bias_vector(_order_two_matrix(), (Fraction(1, 2), QUARTER))
    with pytest.raises(ExactEngineError):
        solve_bias_vector(_order_two_matrix(), (QUARTER,))


@pytest.mark.parametrize(
    ("probability", "expected"),
    [
        (QUARTER, 1),
        (THREE_QUARTERS, 0),
        (Fraction(0), 0),
        (Fraction(1), 1),
        (Fraction(1, 2), Fraction(1, 2)),
    ],
)
def test_amplify_once(probability, expected):
    assert amplify_once(probability) == expected


@settings(max_examples=100)
@given(st.fractions(min_value=0, max_value=1))
def test_amplification_stays_a_probability(probability):
    assert 0 <= amplify_once(probability) <= 1


def test_amplify_rejects_non_probabilities():
    with pytest.raises(ExactEngineError):
        amplify_once(Fraction(5, 4))


def test_build_plan_for_symmetric_group():
    catalog = get_catalog("S:3")
    targets = partition_targets(catalog.r, (0, 1, 2))
    matrix, plan = build_plan(
        get_group("S:3"),
        catalog.subgroups,
        targets,
        choose_s_exact(catalog.r),
    )
    assert plan.couplets == matrix.couplets >= 20
    assert all(0 <= value <= 1 for value in plan.bias)
    assert is_identity(matrix.entries.dot(matrix.inverse))


def test_build_plan_escalation_cap():
    catalog = get_catalog("Z:2")
    with pytest.raises(EscalationCapError):
        build_plan(
            get_group("Z:2"),
            catalog.subgroups,
            (QUARTER, THREE_QUARTERS),
            16,
            s_cap=8,
        )
