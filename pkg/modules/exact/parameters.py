"""Choice of the number of couplets s."""

from __future__ import annotations

from fractions import Fraction

from modules.definitions.types import ExactEngineError


def ceil_log2(value: int) -> int:
    """Get the smallest k with 2^k >= value, for value >= 1."""
    if value < 1:
        error_message = f"ceil_log2 needs a positive integer, got {value}"
        raise ExactEngineError(error_message)
    return (value - 1).bit_length()


def _ceil_log2_rational(value: Fraction) -> int:
    exponent = 0
    while value.denominator << exponent < value.numerator:
        exponent += 1
    return exponent


def choose_s_bounded(r: int, epsilon: Fraction) -> int:
    """Get the smallest even s with 4r / 2^(s/2) <= epsilon."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        error_message = f"Epsilon must lie strictly between 0 and 1: {epsilon}"
        raise ExactEngineError(error_message)
    if r < 1:
        error_message = f"The number of subgroups must be positive: {r}"
        raise ExactEngineError(error_message)
    return 2 * _ceil_log2_rational(4 * r / epsilon)


def choose_s_exact(r: int) -> int:
    """Get s = ceil(2 log2(4 r^3)), i.e. the smallest s with 2^s >= 16 r^6."""
    if r < 1:
        error_message = f"The number of subgroups must be positive: {r}"
        raise ExactEngineError(error_message)
    return ceil_log2(16 * r**6)


def bounded_error_bound(r: int, couplets: int) -> Fraction:
    """Get a rational lower bound on 1 - 4r / 2^(s/2).

    For odd s the bound uses 2^floor(s/2).
    """
    return 1 - Fraction(4 * r, 2 ** (couplets // 2))
