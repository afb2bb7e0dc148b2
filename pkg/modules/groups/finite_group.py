"""Finite groups given by multiplication tables."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from modules.definitions.constants import (
    GROUP_ORDER_CAP,
    GROUP_ORDER_CAP_ENV,
    IDENTITY,
    MAX_SYMMETRIC_DEGREE,
    QUATERNION_GROUP_SPEC,
    get_int_from_env,
)
from modules.definitions.types import (
    GroupAxiomError,
    GroupError,
    GroupOrderCapError,
)
from modules.groups.builtin_groups import (
    cyclic_table,
    dihedral_table,
    elementary_abelian_table,
    quaternion_table,
    symmetric_table,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

_CYCLIC_SPEC = re.compile(r"^Z:(\d+)$")
_ELEMENTARY_ABELIAN_SPEC = re.compile(r"^Z2\^(\d+)$")
_DIHEDRAL_SPEC = re.compile(r"^D:(\d+)$")
_SYMMETRIC_SPEC = re.compile(r"^S:(\d+)$")


@dataclass(frozen=True)
class FiniteGroup:
    """Finite group with identity 0, given by product and inverse tables."""

    name: str
    products: tuple[tuple[int, ...], ...]
    inverses: tuple[int, ...]
    element_names: tuple[str, ...]

    @property
    def order(self) -> int:
        """Number of elements N."""
        return len(self.products)

    @property
    def identity(self) -> int:
        """Element id of the identity."""
        return IDENTITY

    @property
    def elements(self) -> range:
        """All element ids in id order."""
        return range(self.order)

    def multiply(self, left: int, right: int) -> int:
        """Get the id of left * right."""
        return self.products[left][right]

    def inverse(self, element: int) -> int:
        """Get the id of the inverse element."""
        return self.inverses[element]

    def element_order(self, element: int) -> int:
        """Get the order of an element."""
        power = element
        order = 1
        while power != self.identity:
            power = self.multiply(power, element)
            order += 1
        return order


def _check_shape(table: Sequence[Sequence[int]]) -> int:
    if not isinstance(table, list | tuple) or len(table) == 0:
        error_message = "Group table must be a non-empty list of rows"
        raise GroupError(error_message)
    order = len(table)
    for row_index, row in enumerate(table):
        if not isinstance(row, list | tuple) or len(row) != order:
            error_message = (
                f"Group table row {row_index} must have {order} entries"
            )
            raise GroupError(error_message)
        for entry in row:
            if (
                not isinstance(entry, int)
                or isinstance(entry, bool)
                or not 0 <= entry < order
            ):
                error_message = (
                    f"Group table row {row_index} has invalid entry {entry!r}"
                )
                raise GroupError(error_message)
    return order


def _check_latin_square(table: Sequence[Sequence[int]], order: int) -> None:
    expected = set(range(order))
    for index in range(order):
        if set(table[index]) != expected:
            error_message = f"Row {index} is not a permutation of the elements"
            raise GroupAxiomError(error_message)
        if {table[row][index] for row in range(order)} != expected:
            error_message = (
                f"Column {index} is not a permutation of the elements"
            )
            raise GroupAxiomError(error_message)


def _find_identity(table: Sequence[Sequence[int]], order: int) -> int:
    for candidate in range(order):
        is_identity = all(
            table[candidate][element] == element
            and table[element][candidate] == element
            for element in range(order)
        )
        if is_identity:
            return candidate
    error_message = "Group table has no two-sided identity"
    raise GroupAxiomError(error_message)


def _check_associativity(table: Sequence[Sequence[int]], order: int) -> None:
    for first in range(order):
        for second in range(order):
            first_second = table[first][second]
            for third in range(order):
                left = table[first_second][third]
                right = table[first][table[second][third]]
                if left != right:
                    error_message = (
                        f"Product is not associative for ({first}, {second}, "
                        f"{third}): ({first}*{second})*{third} = {left} but "
                        f"{first}*({second}*{third}) = {right}"
                    )
                    raise GroupAxiomError(
                        error_message,
                        failing_triple=(first, second, third),
                    )


def _renumber_identity_first(
    table: Sequence[Sequence[int]],
    identity: int,
    names: list[str],
) -> tuple[list[list[int]], list[str]]:
    if identity == IDENTITY:
        return [list(row) for row in table], names
    relabel = list(range(len(table)))
    relabel[identity], relabel[IDENTITY] = IDENTITY, identity
    renumbered = [[0] * len(table) for _ in table]
    for left, row in enumerate(table):
        for right, product in enumerate(row):
            renumbered[relabel[left]][relabel[right]] = relabel[product]
    renamed = list(names)
    renamed[identity], renamed[IDENTITY] = names[IDENTITY], names[identity]
    return renumbered, renamed


def _get_order_cap() -> int:
    return get_int_from_env(GROUP_ORDER_CAP_ENV, GROUP_ORDER_CAP)


def group_from_table(
    table: Sequence[Sequence[int]],
    name: str = "table",
    element_names: Sequence[str] | None = None,
) -> FiniteGroup:
    """Validate a multiplication table and build the group.

    Row i, column j holds the id of element_i * element_j. The elements are
    renumbered so that the identity gets id 0.
    """
    order = _check_shape(table)
    order_cap = _get_order_cap()
    if order > order_cap:
        error_message = f"Group order {order} exceeds the cap of {order_cap}"
        raise GroupOrderCapError(error_message)
    _check_latin_square(table, order)
    identity = _find_identity(table, order)
    _check_associativity(table, order)
    names = (
        list(element_names)
        if element_names is not None
        else [str(element) for element in range(order)]
    )
    if len(names) != order:
        error_message = f"Expected {order} element names, got {len(names)}"
        raise GroupError(error_message)
    products, names = _renumber_identity_first(table, identity, names)
    inverses = [row.index(IDENTITY) for row in products]
    return FiniteGroup(
        name=name,
        products=tuple(tuple(row) for row in products),
        inverses=tuple(inverses),
        element_names=tuple(names),
    )


def _group_from_json(spec: str) -> FiniteGroup:
    try:
        document = json.loads(spec)
    except json.JSONDecodeError as error:
        error_message = f"Group table document is not valid JSON: {error}"
        raise GroupError(error_message) from error
    if not isinstance(document, dict) or "table" not in document:
        error_message = 'Group table document needs a "table" entry'
        raise GroupError(error_message)
    table = document["table"]
    declared_order = document.get("order")
    if declared_order is not None and (
        not isinstance(table, list) or declared_order != len(table)
    ):
        error_message = (
            f"Declared order {declared_order} does not match the table size"
        )
        raise GroupError(error_message)
    return group_from_table(
        table,
        name=document.get("name", "table"),
        element_names=document.get("names"),
    )


def _check_order_cap(spec: str, order: int) -> None:
    order_cap = _get_order_cap()
    if order > order_cap:
        error_message = (
            f"Group {spec} of order {order} exceeds the cap of {order_cap}"
        )
        raise GroupOrderCapError(error_message)


def _get_builtin_table(spec: str) -> tuple[list[list[int]], list[str]]:
    if spec == QUATERNION_GROUP_SPEC:
        return quaternion_table()
    if match := _CYCLIC_SPEC.match(spec):
        order = int(match.group(1))
        if order >= 1:
            _check_order_cap(spec, order)
            return cyclic_table(order)
    elif match := _ELEMENTARY_ABELIAN_SPEC.match(spec):
        rank = int(match.group(1))
        _check_order_cap(spec, 2**rank)
        return elementary_abelian_table(rank)
    elif match := _DIHEDRAL_SPEC.match(spec):
        sides = int(match.group(1))
        if sides >= 1:
            _check_order_cap(spec, 2 * sides)
            return dihedral_table(sides)
    elif match := _SYMMETRIC_SPEC.match(spec):
        degree = int(match.group(1))
        if 1 <= degree <= MAX_SYMMETRIC_DEGREE:
            return symmetric_table(degree)
    error_message = (
        f"Malformed group spec {spec!r}; expected Z:<n>, Z2^<k>, D:<n>, "
        f"S:<n> (n <= {MAX_SYMMETRIC_DEGREE}), Q8 or a JSON table"
    )
    raise GroupError(error_message)


def build_group(spec: str) -> FiniteGroup:
    """Build a group from a builtin family name or a JSON table document."""
    logger = logging.getLogger(__name__)
    spec = spec.strip()
    if spec.startswith("{"):
        group = _group_from_json(spec)
    else:
        table, names = _get_builtin_table(spec)
        group = group_from_table(table, name=spec, element_names=names)
    logger.debug(
        "Built group %(name)s of order %(order)d",
        {"name": group.name, "order": group.order},
    )
    return group
