"""Rectangular matrices over any of the exact entry types.

One generic carrier serves scalar, polynomial and form entries: the entry
types share +, unary - and *.  Form-valued matrices multiply entrywise by
the wedge, which carries the graded sign.
"""

from __future__ import annotations

from ..errors import SizeMismatch


class Matrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = [list(row) for row in entries]
        if not entries or not entries[0]:
            raise SizeMismatch("matrices must have positive dimensions")
        width = len(entries[0])
        if any(len(row) != width for row in entries):
            raise SizeMismatch("ragged matrix rows")
        self.rows = len(entries)
        self.cols = width
        self.entries = entries

    @staticmethod
    def build(rows: int, cols: int, fn) -> "Matrix":
        return Matrix([[fn(r, c) for c in range(cols)] for r in range(rows)])

    @staticmethod
    def identity(n: int, one, zero) -> "Matrix":
        return Matrix.build(n, n, lambda r, c: one if r == c else zero)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def shape(self):
        return (self.rows, self.cols)

    def _check_same_shape(self, other: "Matrix"):
        if self.shape() != other.shape():
            raise SizeMismatch(f"shape mismatch {self.shape()} vs {other.shape()}")

    def __add__(self, other):
        self._check_same_shape(other)
        return Matrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __neg__(self):
        return Matrix([[-a for a in row] for row in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value) -> "Matrix":
        return Matrix([[a * value for a in row] for row in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise SizeMismatch(
                f"cannot multiply {self.shape()} by {other.shape()}"
            )
        out = []
        for r in range(self.rows):
            row = []
            for c in range(other.cols):
                acc = self.entries[r][0] * other.entries[0][c]
                for k in range(1, self.cols):
                    acc = acc + self.entries[r][k] * other.entries[k][c]
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def apply(self, vector: list) -> list:
        if len(vector) != self.cols:
            raise SizeMismatch("vector length does not match matrix width")
        out = []
        for r in range(self.rows):
            acc = self.entries[r][0] * vector[0]
            for k in range(1, self.cols):
                acc = acc + self.entries[r][k] * vector[k]
            out.append(acc)
        return out

    def transpose(self) -> "Matrix":
        return Matrix([[self.entries[r][c] for r in range(self.rows)]
                       for c in range(self.cols)])

    def map(self, fn) -> "Matrix":
        return Matrix([[fn(a) for a in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(_entry_is_zero(a) for row in self.entries for a in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape() == other.shape() and all(
            a == b
            for r1, r2 in zip(self.entries, other.entries)
            for a, b in zip(r1, r2)
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(a) for a in row) for row in self.entries
        )
        return f"Matrix[{body}]"


def _entry_is_zero(a) -> bool:
    probe = getattr(a, "is_zero", None)
    if probe is not None:
        return probe()
    return a == 0
