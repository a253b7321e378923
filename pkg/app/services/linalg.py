"""Exact linear algebra over GF(2), the integers and the rationals.

Integer rank and determinant use fraction-free (Bareiss) elimination on
object-dtype numpy arrays, so every entry stays a Python int and every
division is exact. Rational inputs are cleared of denominators row by row
first. Inverses use Gauss-Jordan over ``Fraction``. Pivots are the first
nonzero entry in column order. Floats never appear.
"""

import logging
from fractions import Fraction
from math import lcm, prod

import numpy as np

from app.errors import InvariantViolation, ShapeError, SingularMatrixError
from app.models.matrix import Gf2Matrix, IntMatrix, RatMatrix

logger = logging.getLogger(__name__)

ExactMatrix = IntMatrix | RatMatrix

# =============================================================================
# GF(2)
# =============================================================================


def _gf2_echelon(bits: list[int]) -> list[int]:
    """Reduced rows (nonzero only) of a bit-mask matrix; pivot is the lowest set bit."""
    pivots: dict[int, int] = {}
    for row in bits:
        while row:
            low = row & -row
            if low not in pivots:
                pivots[low] = row
                break
            row ^= pivots[low]
    return list(pivots.values())


def gf2_rank(m: Gf2Matrix) -> int:
    return len(_gf2_echelon(list(m.bits)))


def gf2_nullity(m: Gf2Matrix) -> int:
    """Dimension of the right null space: columns minus rank."""
    return len(m.cols) - gf2_rank(m)


def gf2_matmul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    if len(a.cols) != len(b.rows):
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    product = (a.to_array().astype(np.int64) @ b.to_array().astype(np.int64)) % 2
    return Gf2Matrix.from_array(a.rows, b.cols, product)


def gf2_identity(labels) -> Gf2Matrix:
    labels = tuple(labels)
    return Gf2Matrix(rows=labels, cols=labels, bits=tuple(1 << i for i in range(len(labels))))


def gf2_inverse(m: Gf2Matrix) -> Gf2Matrix:
    n = len(m.rows)
    if n != len(m.cols):
        raise ShapeError(f"inverse of a non-square {m.shape} matrix")
    # Augmented rows: low n bits hold m, high n bits the growing inverse.
    rows = [m.bits[i] | (1 << (n + i)) for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if (rows[r] >> col) & 1), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        for r in range(n):
            if r != col and (rows[r] >> col) & 1:
                rows[r] ^= rows[col]
    inverse = Gf2Matrix(rows=m.cols, cols=m.rows, bits=tuple(r >> n for r in rows))
    if gf2_matmul(m, inverse).bits != gf2_identity(m.rows).bits:
        raise InvariantViolation("GF(2) inverse check failed")
    return inverse


def gf2_row_space_equal(a: Gf2Matrix, b: Gf2Matrix) -> bool:
    if a.cols != b.cols:
        raise ShapeError("row spaces over different column indices")
    stacked = _gf2_echelon(list(a.bits) + list(b.bits))
    return gf2_rank(a) == gf2_rank(b) == len(stacked)


# =============================================================================
# Integers and rationals
# =============================================================================


def _as_integer_array(m: ExactMatrix) -> np.ndarray:
    """Object array with integer entries; rational rows are scaled by their lcm."""
    array = m.to_array()
    if isinstance(m, RatMatrix):
        for i in range(array.shape[0]):
            scale = lcm(*(x.denominator for x in array[i])) if array.shape[1] else 1
            array[i] = [int(x * scale) for x in array[i]]
    return array


def _bareiss(array: np.ndarray) -> tuple[int, int]:
    """Fraction-free elimination in place; returns (rank, signed last pivot).

    For a square matrix of full rank the second value is the determinant.
    """
    n_rows, n_cols = array.shape
    previous = 1
    rank = 0
    sign = 1
    last = 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        candidates = [r for r in range(rank, n_rows) if array[r, col] != 0]
        if not candidates:
            continue
        pivot_row = candidates[0]
        if pivot_row != rank:
            array[[rank, pivot_row]] = array[[pivot_row, rank]]
            sign = -sign
        pivot = array[rank, col]
        for r in range(rank + 1, n_rows):
            array[r, col + 1 :] = (
                array[r, col + 1 :] * pivot - array[r, col] * array[rank, col + 1 :]
            ) // previous
            array[r, col] = 0
        previous = pivot
        last = pivot
        rank += 1
    return rank, sign * last


def rat_rank(m: ExactMatrix) -> int:
    if 0 in m.shape:
        return 0
    rank, _ = _bareiss(_as_integer_array(m))
    return rank


def rat_nullity(m: ExactMatrix) -> int:
    return len(m.cols) - rat_rank(m)


def int_det(m: IntMatrix) -> int:
    n = len(m.rows)
    if n != len(m.cols):
        raise ShapeError(f"determinant of a non-square {m.shape} matrix")
    if n == 0:
        return 1
    rank, last = _bareiss(m.to_array())
    return last if rank == n else 0


def rat_det(m: ExactMatrix) -> Fraction:
    if isinstance(m, IntMatrix):
        return Fraction(int_det(m))
    n = len(m.rows)
    if n != len(m.cols):
        raise ShapeError(f"determinant of a non-square {m.shape} matrix")
    if n == 0:
        return Fraction(1)
    scales = [lcm(*(x.denominator for x in row)) for row in m.entries]
    rank, last = _bareiss(_as_integer_array(m))
    if rank < n:
        return Fraction(0)
    return Fraction(last, prod(scales))


def identity(labels) -> IntMatrix:
    labels = tuple(labels)
    n = len(labels)
    return IntMatrix(
        rows=labels,
        cols=labels,
        entries=tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
    )


def int_matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if len(a.cols) != len(b.rows):
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        zero = np.zeros((len(a.rows), len(b.cols)), dtype=np.int64)
        return IntMatrix.from_array(a.rows, b.cols, zero)
    return IntMatrix.from_array(a.rows, b.cols, a.to_array().dot(b.to_array()))


def _fractions(m: ExactMatrix) -> np.ndarray:
    array = np.empty(m.shape, dtype=object)
    for i, row in enumerate(m.entries):
        for j, x in enumerate(row):
            array[i, j] = Fraction(x)
    return array


def rat_matmul(a: ExactMatrix, b: ExactMatrix) -> RatMatrix:
    if len(a.cols) != len(b.rows):
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        zero = np.full((len(a.rows), len(b.cols)), Fraction(0), dtype=object)
        return RatMatrix.from_array(a.rows, b.cols, zero)
    return RatMatrix.from_array(a.rows, b.cols, _fractions(a).dot(_fractions(b)))


def _fraction_identity(n: int) -> np.ndarray:
    array = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            array[i, j] = Fraction(int(i == j))
    return array


def rat_inverse(m: ExactMatrix) -> RatMatrix:
    """Exact inverse by Gauss-Jordan; the product with ``m`` is checked to be I."""
    n = len(m.rows)
    if n != len(m.cols):
        raise ShapeError(f"inverse of a non-square {m.shape} matrix")
    x = _fractions(m)
    y = _fraction_identity(n)
    for i in range(n):
        pivot = next((r for r in range(i, n) if x[r, i] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"{n}x{n} matrix is singular")
        if pivot != i:
            x[[i, pivot]] = x[[pivot, i]]
            y[[i, pivot]] = y[[pivot, i]]
        factor = x[i, i]
        x[i, :] = x[i, :] / factor
        y[i, :] = y[i, :] / factor
        for r in range(n):
            if r != i and x[r, i] != 0:
                f = x[r, i]
                x[r, :] = x[r, :] - f * x[i, :]
                y[r, :] = y[r, :] - f * y[i, :]
    inverse = RatMatrix.from_array(m.cols, m.rows, y)
    if n and not (_fractions(m).dot(y) == _fraction_identity(n)).all():
        raise InvariantViolation("inverse check failed")
    return inverse


def row_space_equal(a: ExactMatrix, b: ExactMatrix) -> bool:
    """True iff the rows of ``a`` and ``b`` span the same rational space."""
    if a.cols != b.cols:
        raise ShapeError("row spaces over different column indices")
    stacked = RatMatrix(
        rows=tuple(f"a{i}" for i in range(len(a.rows))) + tuple(f"b{i}" for i in range(len(b.rows))),
        cols=a.cols,
        entries=tuple(tuple(Fraction(x) for x in row) for row in a.entries + b.entries),
    )
    return rat_rank(a) == rat_rank(b) == rat_rank(stacked)


def is_integral(m: ExactMatrix) -> bool:
    return isinstance(m, IntMatrix) or m.is_integral()


def mod2(m: IntMatrix) -> Gf2Matrix:
    return m.mod2()
