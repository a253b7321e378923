from fractions import Fraction
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from app.errors import ShapeError


class Gf2Matrix(BaseModel):
    """GF(2) matrix stored as one integer bit mask per row (bit j is column j)."""

    model_config = ConfigDict(frozen=True)

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    bits: tuple[int, ...]

    @model_validator(mode="after")
    def check_shape(self) -> "Gf2Matrix":
        if len(self.bits) != len(self.rows):
            raise ShapeError("one bit row is required per row index")
        limit = 1 << len(self.cols)
        if any(not 0 <= b < limit for b in self.bits):
            raise ShapeError("bit row wider than the column index")
        return self

    @classmethod
    def from_lists(cls, rows, cols, entries) -> Self:
        bits = []
        for row in entries:
            if len(row) != len(cols):
                raise ShapeError("row length does not match the column index")
            bits.append(sum(1 << j for j, x in enumerate(row) if int(x) % 2))
        return cls(rows=tuple(rows), cols=tuple(cols), bits=tuple(bits))

    @classmethod
    def from_array(cls, rows, cols, array: np.ndarray) -> Self:
        return cls.from_lists(rows, cols, array.tolist())

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def entry(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(b >> j) & 1 for j in range(len(self.cols))] for b in self.bits]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(self.shape)

    def submatrix(self, rows, cols) -> "Gf2Matrix":
        ri = [self.rows.index(r) for r in rows]
        ci = [self.cols.index(c) for c in cols]
        entries = self.to_lists()
        return Gf2Matrix.from_lists(rows, cols, [[entries[i][j] for j in ci] for i in ri])

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix.from_array(self.cols, self.rows, self.to_array().T)


class IntMatrix(BaseModel):
    """Integer matrix with labelled rows and columns."""

    model_config = ConfigDict(frozen=True)

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_shape(self) -> "IntMatrix":
        if len(self.entries) != len(self.rows):
            raise ShapeError("one entry row is required per row index")
        if any(len(row) != len(self.cols) for row in self.entries):
            raise ShapeError("row length does not match the column index")
        return self

    @classmethod
    def from_array(cls, rows, cols, array: np.ndarray) -> Self:
        entries = tuple(tuple(int(x) for x in row) for row in array.tolist())
        if not entries:
            entries = ()
        return cls(rows=tuple(rows), cols=tuple(cols), entries=entries)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_array(self) -> np.ndarray:
        """Object-dtype copy; entries stay Python ints."""
        array = np.empty(self.shape, dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                array[i, j] = x
        return array

    def at(self, row: str, col: str) -> int:
        return self.entries[self.rows.index(row)][self.cols.index(col)]

    def row(self, label: str) -> tuple[int, ...]:
        return self.entries[self.rows.index(label)]

    def mod2(self) -> Gf2Matrix:
        return Gf2Matrix.from_lists(self.rows, self.cols, self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            rows=self.cols,
            cols=self.rows,
            entries=tuple(zip(*self.entries)) if self.entries else (),
        )

    def submatrix(self, rows, cols) -> "IntMatrix":
        ri = [self.rows.index(r) for r in rows]
        ci = [self.cols.index(c) for c in cols]
        return IntMatrix(
            rows=tuple(rows),
            cols=tuple(cols),
            entries=tuple(tuple(self.entries[i][j] for j in ci) for i in ri),
        )

    def values(self) -> set[int]:
        return {x for row in self.entries for x in row}


class RatMatrix(BaseModel):
    """Rational matrix; entries are normalized ``Fraction`` values."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @model_validator(mode="after")
    def check_shape(self) -> "RatMatrix":
        if len(self.entries) != len(self.rows):
            raise ShapeError("one entry row is required per row index")
        if any(len(row) != len(self.cols) for row in self.entries):
            raise ShapeError("row length does not match the column index")
        return self

    @classmethod
    def from_array(cls, rows, cols, array: np.ndarray) -> Self:
        entries = tuple(tuple(Fraction(x) for x in row) for row in array.tolist())
        return cls(rows=tuple(rows), cols=tuple(cols), entries=entries)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_array(self) -> np.ndarray:
        array = np.empty(self.shape, dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                array[i, j] = x
        return array

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def to_int(self) -> IntMatrix:
        if not self.is_integral():
            raise ShapeError("matrix has non-integral entries")
        return IntMatrix(
            rows=self.rows,
            cols=self.cols,
            entries=tuple(tuple(int(x) for x in row) for row in self.entries),
        )

    def scaled(self, factor: int | Fraction) -> "RatMatrix":
        return RatMatrix(
            rows=self.rows,
            cols=self.cols,
            entries=tuple(tuple(Fraction(x * factor) for x in row) for row in self.entries),
        )


class FundamentalCircuitPair(BaseModel):
    """The two closed trails obtained by splitting a circuit at ``vertex``.

    ``c1`` runs from the minus passage to the plus passage, so it enters
    ``vertex`` on h1 and leaves on h4; ``c2`` is the rest of the circuit.
    Both use the leave/enter trace layout and start by leaving ``vertex``.
    """

    model_config = ConfigDict(frozen=True)

    vertex: str
    c1: tuple[int, ...]
    c2: tuple[int, ...]
    c1_word: tuple[str, ...]
    c2_word: tuple[str, ...]


class BlockDecomposition(BaseModel):
    """Standard-form blocks after ordering rows and columns phi, chi, psi."""

    model_config = ConfigDict(frozen=True)

    phi: tuple[str, ...]
    chi: tuple[str, ...]
    psi: tuple[str, ...]
    blocks: dict[str, IntMatrix]
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures
