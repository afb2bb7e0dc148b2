"""Formatting utils for report outputs."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from modules.definitions.constants import MEMBER_SEPARATOR, RATIONAL_SEPARATOR

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    import numpy as np


def format_float(value: float, ndigits: int = 2) -> float:
    """Round float to number of digits (default 2), keeping nonzero values."""
    rounded_value = round(value, ndigits=ndigits)
    while rounded_value == 0.0 and value != 0.0:
        ndigits += 1
        rounded_value = round(value, ndigits=ndigits)
    return rounded_value


def format_rational(value: Fraction | int) -> str:
    """Format a rational losslessly as "p/q" (denominator always shown)."""
    value = Fraction(value)
    return f"{value.numerator}{RATIONAL_SEPARATOR}{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer or a decimal string into a Fraction."""
    return Fraction(text.strip())


def format_rational_vector(values: Iterable[Fraction]) -> list[str]:
    """Format every entry of a vector."""
    return [format_rational(value) for value in values]


def format_rational_matrix(
    matrix: np.ndarray | Sequence[Sequence[Fraction]],
) -> list[list[str]]:
    """Format a matrix row by row."""
    return [format_rational_vector(row) for row in matrix]


def format_members(members: Iterable[int]) -> list[int]:
    """Get plain ints for a member listing."""
    return [int(member) for member in members]


def parse_members(text: str) -> tuple[int, ...]:
    """Parse a comma-separated member list such as "0,3"."""
    return tuple(
        sorted(
            {
                int(part)
                for part in text.split(MEMBER_SEPARATOR)
                if part.strip()
            },
        ),
    )
