"""Tests for exact linear algebra over GF(2), Z and Q."""

from fractions import Fraction

import pytest

from app.errors import ShapeError, SingularMatrixError
from app.models.matrix import Gf2Matrix, IntMatrix, RatMatrix
from app.services.linalg import (
    gf2_identity,
    gf2_inverse,
    gf2_matmul,
    gf2_nullity,
    gf2_rank,
    gf2_row_space_equal,
    identity,
    int_det,
    int_matmul,
    is_integral,
    rat_det,
    rat_inverse,
    rat_matmul,
    rat_nullity,
    rat_rank,
    row_space_equal,
)
from tests import golden

LABELS = ("a", "b", "c", "d", "e")


def _make_int(entries, rows=None, cols=None) -> IntMatrix:
    rows = rows or LABELS[: len(entries)]
    cols = cols or LABELS[: len(entries[0])]
    return IntMatrix(rows=rows, cols=cols, entries=tuple(tuple(r) for r in entries))


def _make_gf2(entries) -> Gf2Matrix:
    labels = LABELS[: len(entries)]
    return Gf2Matrix.from_lists(labels, labels, entries)


# ---------------------------------------------------------------------------
# GF(2)
# ---------------------------------------------------------------------------


class TestGf2:
    def test_rank_of_all_ones(self):
        m = _make_gf2(golden.ALL_ONES_3)
        assert gf2_rank(m) == 1
        assert gf2_nullity(m) == 2

    def test_even_entries_vanish(self):
        m = _make_gf2([[2, 0], [0, 3]])
        assert m.to_lists() == [[0, 0], [0, 1]]

    def test_inverse(self):
        m = _make_gf2([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        assert gf2_matmul(m, gf2_inverse(m)) == gf2_identity(m.rows)

    def test_singular_inverse(self):
        with pytest.raises(SingularMatrixError):
            gf2_inverse(_make_gf2(golden.ALL_ONES_3))

    def test_row_space(self):
        a = _make_gf2([[1, 1, 0], [0, 1, 1], [0, 0, 0]])
        b = _make_gf2([[1, 0, 1], [1, 1, 0], [1, 1, 0]])
        assert gf2_row_space_equal(a, b)
        assert not gf2_row_space_equal(a, gf2_identity(a.rows))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            gf2_matmul(_make_gf2([[1, 0], [0, 1]]), gf2_identity(("a", "b", "c")))


# ---------------------------------------------------------------------------
# Integers and rationals
# ---------------------------------------------------------------------------


class TestRank:
    def test_all_ones(self):
        m = _make_int(golden.ALL_ONES_3)
        assert rat_rank(m) == 1
        assert rat_nullity(m) == 2

    def test_parity_does_not_matter_over_q(self):
        m = _make_int([[1, 1], [1, -1]])
        assert rat_rank(m) == 2
        assert gf2_rank(m.mod2()) == 1

    def test_rational_entries(self):
        m = RatMatrix(
            rows=("a", "b"),
            cols=("a", "b"),
            entries=((Fraction(1, 2), Fraction(1, 3)), (Fraction(3, 2), Fraction(1))),
        )
        assert rat_rank(m) == 1

    def test_empty(self):
        m = IntMatrix(rows=(), cols=("a",), entries=())
        assert rat_rank(m) == 0
        assert rat_nullity(m) == 1


class TestDeterminant:
    @pytest.mark.parametrize(
        "entries, det",
        [
            (golden.K5_FIRST_STANDARD, -1),
            (golden.K5_SECOND_STANDARD, 3),
            (golden.TRANSPOSITION_STANDARD, -3),
            (golden.TRANSPOSITION_CD_STANDARD, -1),
            (golden.ALL_ONES_3, 0),
        ],
    )
    def test_known_determinants(self, entries, det):
        assert int_det(_make_int(entries)) == det

    def test_pivot_swap(self):
        assert int_det(_make_int([[0, 1], [1, 0]])) == -1

    def test_rational_determinant(self):
        m = RatMatrix(
            rows=("a", "b"),
            cols=("a", "b"),
            entries=((Fraction(1, 2), Fraction(0)), (Fraction(5), Fraction(2, 3))),
        )
        assert rat_det(m) == Fraction(1, 3)

    def test_empty_matrix(self):
        assert int_det(IntMatrix(rows=(), cols=(), entries=())) == 1

    def test_non_square(self):
        with pytest.raises(ShapeError):
            int_det(_make_int([[1, 2, 3]]))


class TestInverse:
    def test_unimodular_inverse_is_integral(self):
        inverse = rat_inverse(_make_int(golden.K5_FIRST_STANDARD))
        assert is_integral(inverse)
        assert inverse.to_int().entries == golden.K5_FIRST_INVERSE

    def test_thirds(self):
        inverse = rat_inverse(_make_int(golden.K5_SECOND_STANDARD))
        assert not is_integral(inverse)
        assert {x.denominator for row in inverse.entries for x in row} == {1, 3}
        assert inverse.scaled(3).to_int().entries == golden.K5_SECOND_INVERSE_TIMES_3

    def test_product_is_identity(self):
        m = _make_int(golden.TRANSPOSITION_STANDARD)
        product = rat_matmul(m, rat_inverse(m))
        assert product.to_int() == identity(LABELS)

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            rat_inverse(_make_int(golden.ALL_ONES_3))

    def test_labels_swap(self):
        m = _make_int([[1, 1], [0, 1]], rows=("x", "y"), cols=("a", "b"))
        inverse = rat_inverse(m)
        assert inverse.rows == ("a", "b")
        assert inverse.cols == ("x", "y")


class TestRowSpace:
    def test_row_operations_keep_space(self):
        a = _make_int([[1, 2, 0], [0, 1, 1]])
        b = _make_int([[1, 3, 1], [2, 4, 0]])
        assert row_space_equal(a, b)

    def test_different_spaces(self):
        a = _make_int([[1, 0, 0]])
        b = _make_int([[0, 1, 0]])
        assert not row_space_equal(a, b)

    def test_column_labels_must_agree(self):
        a = _make_int([[1, 0]], cols=("a", "b"))
        b = _make_int([[1, 0]], cols=("x", "y"))
        with pytest.raises(ShapeError):
            row_space_equal(a, b)

    def test_int_matmul_with_identity(self):
        m = _make_int(golden.EIGHT_STANDARD, rows=tuple("abcdefgh"), cols=tuple("abcdefgh"))
        assert int_matmul(m, identity(m.cols)) == m
