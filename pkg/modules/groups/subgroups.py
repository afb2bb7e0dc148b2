"""Subgroups, their enumeration, transversals and coset overlaps."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from modules.definitions.constants import (
    BRUTE_FORCE_ENUMERATION_CAP,
    GROUP_ORDER_CAP,
    GROUP_ORDER_CAP_ENV,
    get_int_from_env,
)
from modules.definitions.types import (
    GroupOrderCapError,
    SubgroupError,
    ThisShouldNeverHappenError,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence

    from modules.groups.finite_group import FiniteGroup


@dataclass(frozen=True)
class Subgroup:
    """Subgroup given by its sorted member ids."""

    members: tuple[int, ...]
    group: FiniteGroup = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        """Number of members."""
        return len(self.members)

    @cached_property
    def member_set(self) -> frozenset[int]:
        """Members as a set for membership tests."""
        return frozenset(self.members)

    @cached_property
    def transversal(self) -> tuple[int, ...]:
        """Left transversal of minimal coset representatives."""
        return left_transversal(self.group, self)

    @cached_property
    def is_cyclic(self) -> bool:
        """Whether a single member generates the subgroup."""
        return any(
            self.group.element_order(element) == self.order
            for element in self.members
        )

    @property
    def is_trivial(self) -> bool:
        """Whether this is {1_G}."""
        return self.order == 1

    def contains(self, element: int) -> bool:
        """Test membership of an element id."""
        return element in self.member_set

    def is_subgroup_of(self, other: Subgroup) -> bool:
        """Test containment in another subgroup."""
        return self.member_set <= other.member_set

    def indicator(self) -> tuple[int, ...]:
        """Get the 0/1 indicator vector over the group elements."""
        return tuple(
            1 if element in self.member_set else 0
            for element in self.group.elements
        )

    def left_coset(self, element: int) -> tuple[int, ...]:
        """Get the sorted members of the left coset element * K."""
        return tuple(
            sorted(self.group.multiply(element, member) for member in self)
        )

    def __iter__(self) -> Iterator[int]:  # noqa: D105
        return iter(self.members)

    def __len__(self) -> int:  # noqa: D105
        return len(self.members)


@dataclass(frozen=True)
class SubgroupCatalog:
    """All subgroups K_1..K_r of a group, size-descending."""

    group: FiniteGroup
    subgroups: tuple[Subgroup, ...]

    @property
    def r(self) -> int:
        """Number of subgroups."""
        return len(self.subgroups)

    @property
    def transversals(self) -> tuple[tuple[int, ...], ...]:
        """Left transversal T_mu for every subgroup, in catalog order."""
        return tuple(subgroup.transversal for subgroup in self.subgroups)

    @property
    def trivial_index(self) -> int:
        """Catalog position of {1_G} (always the last one)."""
        return self.r - 1

    def index_of(self, subgroup: Subgroup) -> int:
        """Get the 0-based catalog position of a subgroup."""
        try:
            return self.subgroups.index(subgroup)
        except ValueError as error:
            error_message = (
                f"Subgroup {list(subgroup.members)} is not in the catalog of "
                f"{self.group.name}"
            )
            raise SubgroupError(error_message) from error

    def __iter__(self) -> Iterator[Subgroup]:  # noqa: D105
        return iter(self.subgroups)

    def __len__(self) -> int:  # noqa: D105
        return len(self.subgroups)


def closure(group: FiniteGroup, generators: Iterable[int]) -> frozenset[int]:
    """Get the smallest subgroup containing the generators."""
    generators = tuple(dict.fromkeys(generators))
    members = {group.identity}
    frontier = [group.identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for generator in generators:
                product = group.multiply(element, generator)
                if product not in members:
                    members.add(product)
                    next_frontier.append(product)
        frontier = next_frontier
    return frozenset(members)


def is_closed(group: FiniteGroup, members: Iterable[int]) -> bool:
    """Test if a member set contains 1_G and is closed under products."""
    member_set = set(members)
    if group.identity not in member_set:
        return False
    return all(
        group.multiply(left, right) in member_set
        and group.inverse(left) in member_set
        for left in member_set
        for right in member_set
    )


def subgroup_from_members(
    group: FiniteGroup,
    members: Iterable[int],
) -> Subgroup:
    """Validate a member set and wrap it as a Subgroup."""
    member_list = sorted(set(members))
    for element in member_list:
        if not 0 <= element < group.order:
            error_message = (
                f"Element {element} is not in {group.name} of order "
                f"{group.order}"
            )
            raise SubgroupError(error_message)
    if not is_closed(group, member_list):
        error_message = (
            f"Members {member_list} are not closed under the product of "
            f"{group.name}"
        )
        raise SubgroupError(error_message)
    return Subgroup(members=tuple(member_list), group=group)


def _check_parent(group: FiniteGroup, subgroup: Subgroup) -> None:
    if subgroup.group is not group and subgroup.group != group:
        error_message = (
            f"Subgroup of {subgroup.group.name} used with {group.name}"
        )
        raise SubgroupError(error_message)


def left_transversal(
    group: FiniteGroup,
    subgroup: Subgroup,
) -> tuple[int, ...]:
    """Get the minimal element of every left coset, in id order."""
    if not is_closed(group, subgroup.members):
        error_message = f"Members {list(subgroup.members)} are not closed"
        raise SubgroupError(error_message)
    covered: set[int] = set()
    representatives = []
    for element in group.elements:
        if element in covered:
            continue
        representatives.append(element)
        covered.update(
            group.multiply(element, member) for member in subgroup.members
        )
    return tuple(representatives)


def random_left_transversal(
    group: FiniteGroup,
    subgroup: Subgroup,
    seed: int,
) -> tuple[int, ...]:
    """Get one seeded random representative per left coset."""
    generator = np.random.default_rng(seed)
    return tuple(
        int(generator.choice(subgroup.left_coset(representative)))
        for representative in left_transversal(group, subgroup)
    )


def is_transversal(
    group: FiniteGroup,
    subgroup: Subgroup,
    transversal: Sequence[int],
) -> bool:
    """Test if (t, k) -> t*k is a bijection from T x K onto G."""
    products = [
        group.multiply(representative, member)
        for representative in transversal
        for member in subgroup.members
    ]
    return sorted(products) == list(group.elements)


def coset_overlap(subgroup: Subgroup, hidden: Subgroup) -> Fraction:
    """Get |K n H| / |K| exactly."""
    _check_parent(subgroup.group, hidden)
    shared = len(subgroup.member_set & hidden.member_set)
    return Fraction(shared, subgroup.order)


def generating_set(subgroup: Subgroup) -> tuple[int, ...]:
    """Get a generating set by greedily adding members in id order.

    Every added generator at least doubles the generated subgroup.
    """
    generators: list[int] = []
    generated = frozenset({subgroup.group.identity})
    for element in subgroup.members:
        if element in generated:
            continue
        generators.append(element)
        generated = closure(subgroup.group, generators)
        if len(generated) == subgroup.order:
            break
    if generated != subgroup.member_set:
        error_message = "Greedy generators do not generate the subgroup"
        raise ThisShouldNeverHappenError(error_message)
    return tuple(generators)


def _catalog_sort_key(members: frozenset[int]) -> tuple[int, list[int]]:
    return -len(members), sorted(members)


def _make_catalog(
    group: FiniteGroup,
    member_sets: Iterable[frozenset[int]],
) -> SubgroupCatalog:
    subgroups = tuple(
        Subgroup(members=tuple(sorted(members)), group=group)
        for members in sorted(member_sets, key=_catalog_sort_key)
    )
    return SubgroupCatalog(group=group, subgroups=subgroups)


def enumerate_subgroups(
    group: FiniteGroup,
    order_cap: int | None = None,
) -> SubgroupCatalog:
    """Enumerate all subgroups, size-descending with lexicographic ties.

    Subgroups generated by at most two elements are closed first, then the
    set is saturated by joining with cyclic subgroups until nothing changes.
    """
    logger = logging.getLogger(__name__)
    if order_cap is None:
        order_cap = get_int_from_env(GROUP_ORDER_CAP_ENV, GROUP_ORDER_CAP)
    if group.order > order_cap:
        error_message = (
            f"Cannot enumerate subgroups of {group.name}: order "
            f"{group.order} exceeds the cap of {order_cap}"
        )
        raise GroupOrderCapError(error_message)
    cyclic = {element: closure(group, (element,)) for element in group.elements}
    found = set(cyclic.values())
    for first, second in itertools.combinations(group.elements, 2):
        found.add(closure(group, (first, second)))
    frontier = set(found)
    while frontier:
        joined = set()
        for members in frontier:
            for element, cyclic_members in cyclic.items():
                if cyclic_members <= members:
                    continue
                candidate = closure(group, (*members, element))
                if candidate not in found:
                    joined.add(candidate)
        found |= joined
        frontier = joined
    catalog = _make_catalog(group, found)
    logger.info(
        "Enumerated %(r)d subgroups of %(group)s",
        {"r": catalog.r, "group": group.name},
    )
    return catalog


def brute_force_subgroups(group: FiniteGroup) -> SubgroupCatalog:
    """Enumerate subgroups by testing every subset containing 1_G."""
    if group.order > BRUTE_FORCE_ENUMERATION_CAP:
        error_message = (
            f"Brute-force enumeration is limited to order "
            f"{BRUTE_FORCE_ENUMERATION_CAP}, {group.name} has {group.order}"
        )
        raise GroupOrderCapError(error_message)
    others = [
        element for element in group.elements if element != group.identity
    ]
    found = set()
    for size in range(len(others) + 1):
        for chosen in itertools.combinations(others, size):
            members = (group.identity, *chosen)
            if is_closed(group, members):
                found.add(frozenset(members))
    return _make_catalog(group, found)


def cyclic_subgroups(catalog: SubgroupCatalog) -> tuple[Subgroup, ...]:
    """Get the cyclic subgroups in catalog order (trivial subgroup last)."""
    return tuple(subgroup for subgroup in catalog if subgroup.is_cyclic)


def check_size_descending(candidates: Sequence[Subgroup]) -> bool:
    """Test the |K_mu| >= |K_mu+1| ordering of a candidate list."""
    return all(
        first.order >= second.order
        for first, second in itertools.pairwise(candidates)
    )
