"""Tests comparing the branch cascade with the dense reference."""

from __future__ import annotations

from fractions import Fraction

import pytest

from modules.cascade.dense_reference import (
    coset_block_matrix,
    dense_amplitude_count,
    dense_reference_distribution,
)
from modules.cascade.outcomes import first_register_distribution
from modules.cascade.test_operator import prepare_initial, run_cascade
from modules.definitions.constants import DEFAULT_DENSE_CAP
from modules.definitions.types import CascadeError, DenseCapError
from modules.groups.subgroups import random_left_transversal
from tests.conftest import get_catalog, get_group, get_oracle, get_subgroup


def _branch_distribution(spec, hidden, couplets):
    state = prepare_initial(
        get_group(spec),
        get_oracle(spec, hidden.members),
        couplets,
        get_catalog(spec).subgroups,
    )
    return first_register_distribution(run_cascade(state)).as_dict()


def _dense_distribution(spec, hidden, couplets, **variant):
    return dense_reference_distribution(
        get_group(spec),
        hidden,
        couplets,
        get_catalog(spec).subgroups,
        **variant,
    ).as_dict()


def test_order_two_group_at_two_couplets():
    hidden = get_subgroup("Z:2", (0,))
    assert _dense_distribution("Z:2", hidden, 2) == {
        1: Fraction(1, 4),
        2: Fraction(3, 4),
    }


@pytest.mark.parametrize("couplets", [1, 2, 3])
def test_agreement_on_cyclic_group_of_order_four(couplets):
    for hidden in get_catalog("Z:4"):
        assert _dense_distribution(
            "Z:4",
            hidden,
            couplets,
        ) == _branch_distribution("Z:4", hidden, couplets)


@pytest.mark.parametrize(
    ("spec", "couplets"),
    [("Z:2", 4), ("Z:2", 5), ("Z:2", 6), ("Z:2", 7), ("Z:2", 8), ("Z:4", 4)],
)
def test_agreement_up_to_the_amplitude_cap(spec, couplets):
    catalog = get_catalog(spec)
    for hidden in catalog:
        size = dense_amplitude_count(
            get_group(spec),
            hidden,
            couplets,
            catalog.r,
        )
        assert size <= DEFAULT_DENSE_CAP
        assert _dense_distribution(
            spec,
            hidden,
            couplets,
        ) == _branch_distribution(spec, hidden, couplets)


@pytest.mark.parametrize("spec", ["Z2^2", "S:3"])
def test_agreement_at_one_couplet(spec):
    for hidden in get_catalog(spec):
        assert _dense_distribution(spec, hidden, 1) == _branch_distribution(
            spec,
            hidden,
            1,
        )


def test_distribution_ignores_coset_labels():
    hidden = get_subgroup("Z:6", (0,))
    relabeled = _dense_distribution(
        "Z:6",
        hidden,
        1,
        coset_labels=[5, 3, 1, 0, 2, 4],
    )
    assert relabeled == _branch_distribution("Z:6", hidden, 1)


def test_distribution_ignores_transversal_choice():
    group = get_group("S:3")
    catalog = get_catalog("S:3")
    transversals = [
        random_left_transversal(group, subgroup, seed=11)
        for subgroup in catalog
    ]
    for hidden in catalog:
        assert _dense_distribution(
            "S:3",
            hidden,
            1,
            transversals=transversals,
        ) == _branch_distribution("S:3", hidden, 1)


def test_amplitude_count():
    group = get_group("Z:2")
    assert dense_amplitude_count(group, get_subgroup("Z:2", (0,)), 2, 2) == 144


def test_amplitude_cap():
    hidden = get_subgroup("Z:2", (0,))
    with pytest.raises(DenseCapError):
        _dense_distribution("Z:2", hidden, 9)
    with pytest.raises(DenseCapError):
        _dense_distribution("Z:2", hidden, 2, amplitude_cap=100)


def test_amplitude_cap_from_environment(monkeypatch):
    monkeypatch.setenv("HSPSIM_DENSE_CAP", "100")
    with pytest.raises(DenseCapError):
        _dense_distribution("Z:2", get_subgroup("Z:2", (0,)), 2)


def test_coset_block_matrix_needs_a_transversal():
    group = get_group("Z:4")
    subgroup = get_subgroup("Z:4", (0, 2))
    assert coset_block_matrix(group, subgroup, (0, 1)).sum() == 8
    with pytest.raises(CascadeError):
        coset_block_matrix(group, subgroup, (0, 2))
