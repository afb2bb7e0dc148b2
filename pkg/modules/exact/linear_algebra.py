"""Exact linear algebra on numpy object arrays of Fractions."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from modules.definitions.types import ExactEngineError, SingularMatrixError

if TYPE_CHECKING:
    from collections.abc import Sequence


def identity_matrix(size: int) -> np.ndarray:
    """Get the exact size x size identity."""
    return np.array(
        [
            [Fraction(int(row == column)) for column in range(size)]
            for row in range(size)
        ],
        dtype=object,
    ).reshape(size, size)


def rational_matrix(
    rows: Sequence[Sequence[Fraction | int | str]],
) -> np.ndarray:
    """Convert nested rows into a square object array of Fractions."""
    size = len(rows)
    matrix = np.empty((size, size), dtype=object)
    for row_index, row in enumerate(rows):
        if len(row) != size:
            error_message = (
                f"Row {row_index} has {len(row)} entries, not {size}"
            )
            raise ExactEngineError(error_message)
        for column_index, value in enumerate(row):
            matrix[row_index, column_index] = Fraction(value)
    return matrix


def rational_vector(values: Sequence[Fraction | int | str]) -> np.ndarray:
    """Convert values into an object array of Fractions."""
    vector = np.empty(len(values), dtype=object)
    for index, value in enumerate(values):
        vector[index] = Fraction(value)
    return vector


def _check_square(matrix: np.ndarray) -> int:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:  # noqa: PLR2004
        error_message = f"Matrix is not square (shape = {matrix.shape})"
        raise ExactEngineError(error_message)
    return matrix.shape[0]


def invert_exact(matrix: np.ndarray) -> np.ndarray:
    """Invert by Gauss-Jordan elimination with partial pivoting."""
    size = _check_square(matrix)
    reduced = matrix.copy()
    inverse = identity_matrix(size)
    for column in range(size):
        pivot = max(
            range(column, size),
            key=lambda row: abs(reduced[row, column]),
        )
        if reduced[pivot, column] == 0:
            error_message = f"Matrix is singular at column {column}"
            raise SingularMatrixError(error_message)
        if pivot != column:
            reduced[[column, pivot]] = reduced[[pivot, column]]
            inverse[[column, pivot]] = inverse[[pivot, column]]
        pivot_value = reduced[column, column]
        reduced[column, :] /= pivot_value
        inverse[column, :] /= pivot_value
        for row in range(size):
            if row == column or reduced[row, column] == 0:
                continue
            factor = reduced[row, column]
            reduced[row, :] -= factor * reduced[column, :]
            inverse[row, :] -= factor * inverse[column, :]
    return inverse


def is_identity(matrix: np.ndarray) -> bool:
    """Test exact equality with the identity."""
    size = _check_square(matrix)
    return bool(np.all(matrix == identity_matrix(size)))


def matrix_power(matrix: np.ndarray, exponent: int) -> np.ndarray:
    """Get an exact non-negative power."""
    size = _check_square(matrix)
    result = identity_matrix(size)
    for _ in range(exponent):
        result = result.dot(matrix)
    return result


def neumann_partial_sum(matrix: np.ndarray, terms: int) -> np.ndarray:
    """Get I + D + D^2 + ... + D^terms for D = I - matrix."""
    size = _check_square(matrix)
    delta = identity_matrix(size) - matrix
    power = identity_matrix(size)
    total = identity_matrix(size)
    for _ in range(terms):
        power = power.dot(delta)
        total = total + power
    return total
