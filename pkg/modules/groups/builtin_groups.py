"""Multiplication tables of the builtin group families."""

from __future__ import annotations

import itertools

Table = list[list[int]]

_QUATERNION_NEGATIVE = 4
# Unit quaternions 1, i, j, k as indices 0..3; product is (sign, unit)
_QUATERNION_UNITS = ("1", "i", "j", "k")
_QUATERNION_PRODUCTS = {
    (0, 0): (1, 0),
    (0, 1): (1, 1),
    (0, 2): (1, 2),
    (0, 3): (1, 3),
    (1, 0): (1, 1),
    (1, 1): (-1, 0),
    (1, 2): (1, 3),
    (1, 3): (-1, 2),
    (2, 0): (1, 2),
    (2, 1): (-1, 3),
    (2, 2): (-1, 0),
    (2, 3): (1, 1),
    (3, 0): (1, 3),
    (3, 1): (1, 2),
    (3, 2): (-1, 1),
    (3, 3): (-1, 0),
}


def cyclic_table(order: int) -> tuple[Table, list[str]]:
    """Get the table of Z_n with element k standing for k mod n."""
    table = [
        [(left + right) % order for right in range(order)]
        for left in range(order)
    ]
    return table, [str(element) for element in range(order)]


def elementary_abelian_table(rank: int) -> tuple[Table, list[str]]:
    """Get the table of Z_2^k, elements are bit vectors added by XOR."""
    order = 2**rank
    table = [[left ^ right for right in range(order)] for left in range(order)]
    names = [
        format(element, f"0{rank}b") if rank > 0 else "e"
        for element in range(order)
    ]
    return table, names


def dihedral_table(sides: int) -> tuple[Table, list[str]]:
    """Get the table of the dihedral group of order 2n.

    Element r^i s^j has id i + n*j, with s r s = r^-1.
    """
    order = 2 * sides

    def _split(element: int) -> tuple[int, int]:
        return element % sides, element // sides

    table = []
    for left in range(order):
        left_rotation, left_reflection = _split(left)
        row = []
        for right in range(order):
            right_rotation, right_reflection = _split(right)
            sign = -1 if left_reflection else 1
            rotation = (left_rotation + sign * right_rotation) % sides
            reflection = (left_reflection + right_reflection) % 2
            row.append(rotation + sides * reflection)
        table.append(row)
    names = []
    for element in range(order):
        rotation, reflection = _split(element)
        names.append(f"r{rotation}" + ("s" if reflection else ""))
    return table, names


def symmetric_table(degree: int) -> tuple[Table, list[str]]:
    """Get the table of S_n, permutations in lexicographic order.

    The product p*q is the composition p(q(i)).
    """
    permutations = list(itertools.permutations(range(degree)))
    index = {permutation: i for i, permutation in enumerate(permutations)}
    table = [
        [
            index[tuple(left[right[point]] for point in range(degree))]
            for right in permutations
        ]
        for left in permutations
    ]
    names = [
        "".join(str(point) for point in permutation)
        for permutation in permutations
    ]
    return table, names


def _signed_unit(element: int) -> tuple[int, int]:
    return (-1 if element >= _QUATERNION_NEGATIVE else 1), element % 4


def quaternion_table() -> tuple[Table, list[str]]:
    """Get the table of Q8, element id is unit index + 4 for negatives."""
    table = []
    for left in range(8):
        left_sign, left_unit = _signed_unit(left)
        row = []
        for right in range(8):
            right_sign, right_unit = _signed_unit(right)
            sign, unit = _QUATERNION_PRODUCTS[(left_unit, right_unit)]
            sign *= left_sign * right_sign
            row.append(unit + (4 if sign < 0 else 0))
        table.append(row)
    names = [
        ("-" if element >= _QUATERNION_NEGATIVE else "")
        + _QUATERNION_UNITS[element % 4]
        for element in range(8)
    ]
    return table, names
