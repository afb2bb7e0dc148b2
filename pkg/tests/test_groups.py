"""Tests of group construction, subgroup enumeration and transversals."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.definitions.types import (
    GroupAxiomError,
    GroupError,
    GroupOrderCapError,
    SubgroupError,
)
from modules.groups.finite_group import build_group, group_from_table
from modules.groups.subgroups import (
    brute_force_subgroups,
    closure,
    coset_overlap,
    cyclic_subgroups,
    enumerate_subgroups,
    generating_set,
    is_transversal,
    left_transversal,
    random_left_transversal,
    subgroup_from_members,
)
from tests.conftest import get_catalog, get_group, get_subgroup


def test_cyclic_group_of_order_two():
    group = build_group("Z:2")
    assert group.order == 2
    assert group.products == ((0, 1), (1, 0))
    assert group.inverses == (0, 1)


def test_symmetric_group_element_orders():
    group = build_group("S:3")
    orders = [group.element_order(element) for element in group.elements]
    assert group.order == 6
    assert orders.count(2) == 3
    assert orders.count(3) == 2


def test_quaternion_group_has_one_involution():
    group = build_group("Q8")
    orders = [group.element_order(element) for element in group.elements]
    assert group.order == 8
    assert orders.count(2) == 1
    assert orders.count(4) == 6


def test_dihedral_group_is_not_abelian():
    group = build_group("D:4")
    assert group.order == 8
    assert any(
        group.multiply(left, right) != group.multiply(right, left)
        for left in group.elements
        for right in group.elements
    )


def test_json_table_renumbers_identity_first():
    # Z_3 written with the identity as element 2
    table = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    group = build_group(json.dumps({"name": "shifted", "table": table}))
    assert group.identity == 0
    assert all(
        group.multiply(0, element) == element for element in group.elements
    )
    assert group.name == "shifted"


def test_non_associative_table_reports_failing_triple():
    # Latin square with identity 0 that is not associative
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupAxiomError) as error_info:
        group_from_table(table)
    first, second, third = error_info.value.failing_triple
    left = table[table[first][second]][third]
    right = table[first][table[second][third]]
    assert left != right


def test_table_without_identity_is_rejected():
    # x * y = -x - y mod 3
    with pytest.raises(GroupAxiomError, match="identity"):
        group_from_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]])


@pytest.mark.parametrize(
    "spec",
    ["X:3", "Z:0", "S:5", "Z:", "{not json", '{"order": 2}'],
)
def test_malformed_specs_raise_group_error(spec):
    with pytest.raises(GroupError):
        build_group(spec)


def test_declared_order_must_match_table():
    spec = json.dumps({"order": 3, "table": [[0, 1], [1, 0]]})
    with pytest.raises(GroupError, match="Declared order"):
        build_group(spec)


def test_group_order_cap():
    with pytest.raises(GroupOrderCapError):
        build_group("Z:65")


def test_group_order_cap_from_environment(monkeypatch):
    monkeypatch.setenv("HSPSIM_GROUP_ORDER_CAP", "4")
    with pytest.raises(GroupOrderCapError):
        build_group("Z:5")


@pytest.mark.parametrize(
    ("spec", "r"),
    [
        ("Z:1", 1),
        ("Z:2", 2),
        ("Z:4", 3),
        ("Z:6", 4),
        ("Z:8", 4),
        ("Z2^2", 5),
        ("Z2^3", 16),
        ("S:3", 6),
        ("D:4", 10),
        ("Q8", 6),
    ],
)
def test_catalog_sizes(spec, r):
    assert get_catalog(spec).r == r


def test_cyclic_group_catalog_order():
    catalog = get_catalog("Z:6")
    assert [subgroup.members for subgroup in catalog] == [
        (0, 1, 2, 3, 4, 5),
        (0, 2, 4),
        (0, 3),
        (0,),
    ]


def test_catalog_of_symmetric_group():
    catalog = get_catalog("S:3")
    assert catalog.subgroups[0].members == tuple(range(6))
    assert catalog.subgroups[1].members == (0, 3, 4)
    assert catalog.subgroups[-1].is_trivial
    assert catalog.trivial_index == 5


@pytest.mark.parametrize("spec", ["Z:6", "Z2^2", "S:3", "D:4", "Q8"])
def test_enumeration_matches_brute_force(spec):
    group = get_group(spec)
    brute_force = brute_force_subgroups(group)
    assert brute_force.subgroups == get_catalog(spec).subgroups


def test_brute_force_is_capped():
    with pytest.raises(GroupOrderCapError):
        brute_force_subgroups(build_group("Z:13"))


def test_enumeration_cap():
    with pytest.raises(GroupOrderCapError):
        enumerate_subgroups(get_group("D:4"), order_cap=4)


@settings(max_examples=40, deadline=None)
@given(
    spec=st.sampled_from(["Z:8", "Z2^3", "D:4", "Q8"]),
    data=st.data(),
)
def test_closure_of_any_pair_is_in_catalog(spec, data):
    group = get_group(spec)
    first = data.draw(st.integers(0, group.order - 1))
    second = data.draw(st.integers(0, group.order - 1))
    member_sets = {subgroup.member_set for subgroup in get_catalog(spec)}
    assert closure(group, (first, second)) in member_sets


def test_left_transversal_of_cyclic_subgroup():
    subgroup = get_subgroup("Z:6", (0, 3))
    assert left_transversal(get_group("Z:6"), subgroup) == (0, 1, 2)


@pytest.mark.parametrize("spec", ["S:3", "D:4", "Q8"])
def test_every_transversal_is_a_bijection(spec):
    group = get_group(spec)
    for subgroup in get_catalog(spec):
        assert len(subgroup.transversal) == group.order // subgroup.order
        assert is_transversal(group, subgroup, subgroup.transversal)


def test_random_transversal_is_seeded():
    group = get_group("D:4")
    subgroup = get_catalog("D:4").subgroups[5]
    first = random_left_transversal(group, subgroup, seed=3)
    assert first == random_left_transversal(group, subgroup, seed=3)
    assert is_transversal(group, subgroup, first)


def test_non_subgroups_are_rejected():
    group = get_group("Z:6")
    with pytest.raises(SubgroupError):
        subgroup_from_members(group, (0, 1))
    with pytest.raises(SubgroupError):
        subgroup_from_members(group, (0, 7))


def test_coset_overlap_examples():
    assert coset_overlap(
        get_subgroup("Z:2", (0, 1)),
        get_subgroup("Z:2", (0,)),
    ) == Fraction(1, 2)
    assert coset_overlap(
        get_subgroup("S:3", (0, 3, 4)),
        get_subgroup("S:3", (0, 1)),
    ) == Fraction(1, 3)


def test_coset_overlap_is_one_for_contained_subgroups():
    assert coset_overlap(
        get_subgroup("Z:6", (0, 3)),
        get_subgroup("Z:6", tuple(range(6))),
    ) == 1


def test_coset_overlap_rejects_foreign_subgroups():
    with pytest.raises(SubgroupError):
        coset_overlap(get_subgroup("Z:2", (0,)), get_subgroup("Z:3", (0,)))


def test_generating_sets():
    assert generating_set(get_subgroup("Z:6", tuple(range(6)))) == (1,)
    assert generating_set(get_subgroup("Z:6", (0,))) == ()
    assert len(generating_set(get_subgroup("Z2^2", (0, 1, 2, 3)))) == 2


@pytest.mark.parametrize("spec", ["Z2^3", "S:3", "D:4", "Q8"])
def test_generating_sets_generate(spec):
    group = get_group(spec)
    for subgroup in get_catalog(spec):
        generators = generating_set(subgroup)
        assert closure(group, generators) == subgroup.member_set
        assert 2 ** len(generators) <= subgroup.order


def test_cyclic_subgroups():
    assert [s.members for s in cyclic_subgroups(get_catalog("Z2^2"))] == [
        (0, 1),
        (0, 2),
        (0, 3),
        (0,),
    ]
    assert len(cyclic_subgroups(get_catalog("Z:6"))) == 4
