"""Exact linear algebra over the Gaussian rationals.

The elimination core works on sparse rows of Gaussian integers (pairs of
Python ints) with per-row gcd normalization, which keeps coefficient growth
polynomial while staying exact.  Everything downstream -- solving, kernel
bases, ranks, incremental span tracking -- reduces to this core.

Row operations never rescale columns, so solution sets are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..errors import SizeMismatch
from .matrix import Matrix
from .scalar import Scalar

_RHS = -1  # sentinel column index for the right-hand side


def _row_from_scalars(entries) -> dict:
    """Clear denominators of one row of Scalars; return {col: (int, int)}."""
    denom = 1
    for s in entries.values():
        denom = denom * s.re.denominator // gcd(denom, s.re.denominator)
        denom = denom * s.im.denominator // gcd(denom, s.im.denominator)
    row = {}
    for col, s in entries.items():
        a = int(s.re * denom)
        b = int(s.im * denom)
        if a or b:
            row[col] = (a, b)
    return row


def _normalize(row: dict) -> dict:
    g = 0
    for a, b in row.values():
        g = gcd(g, a)
        g = gcd(g, b)
        if g == 1:
            return row
    if g > 1:
        return {c: (a // g, b // g) for c, (a, b) in row.items()}
    return row


def _combine(row: dict, p: tuple, other: dict, q: tuple) -> dict:
    """p*row - q*other over Gaussian integers, gcd-normalized."""
    pa, pb = p
    qa, qb = q
    out = {}
    for c, (a, b) in row.items():
        out[c] = (pa * a - pb * b, pa * b + pb * a)
    for c, (a, b) in other.items():
        xa = qa * a - qb * b
        xb = qa * b + qb * a
        if c in out:
            ya, yb = out[c]
            ya -= xa
            yb -= xb
            if ya or yb:
                out[c] = (ya, yb)
            else:
                del out[c]
        else:
            out[c] = (-xa, -xb)
    return _normalize(out)


def _to_scalar(pair: tuple, denom_pair: tuple) -> Scalar:
    """Exact division of Gaussian integers: pair / denom_pair."""
    a, b = pair
    c, d = denom_pair
    n = c * c + d * d
    return Scalar(Fraction(a * c + b * d, n), Fraction(b * c - a * d, n))


class _Eliminator:
    """Sparse Gaussian elimination with deterministic pivoting."""

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        self.rows: list[dict] = []
        self.pivot_of_col: dict[int, int] = {}

    def ingest(self, rows: list[dict]):
        for row in rows:
            self.add_row(row)

    def add_row(self, row: dict) -> bool:
        """Reduce a row against current pivots; keep it if independent.

        Returns True when the row added a new pivot.
        """
        row = _normalize(dict(row))
        while row:
            lead = min(c for c in row if c != _RHS) if any(
                c != _RHS for c in row
            ) else _RHS
            if lead == _RHS:
                break  # inconsistent row: 0 = nonzero; caller inspects
            holder = self.pivot_of_col.get(lead)
            if holder is None:
                self.rows.append(row)
                self.pivot_of_col[lead] = len(self.rows) - 1
                return True
            pivot_row = self.rows[holder]
            row = _combine(row, pivot_row[lead], pivot_row, row[lead])
        if row:
            # pure right-hand-side residue survives reduction
            self.rows.append(row)
            return True
        return False

    def rank(self) -> int:
        return len(self.pivot_of_col)

    def inconsistent(self) -> bool:
        return any(
            set(r.keys()) == {_RHS} for r in self.rows
        )

    def _fully_reduce(self):
        """Back-eliminate pivot columns from earlier rows (Gauss-Jordan)."""
        order = sorted(self.pivot_of_col.items(), reverse=True)
        for col, holder in order:
            pivot_row = self.rows[holder]
            for idx, row in enumerate(self.rows):
                if idx == holder or col not in row:
                    continue
                self.rows[idx] = _combine(row, pivot_row[col], pivot_row, row[col])
        self.pivot_of_col = {}
        for idx, row in enumerate(self.rows):
            cols = [c for c in row if c != _RHS]
            if cols:
                self.pivot_of_col[min(cols)] = idx

    def solution(self) -> tuple[list[Scalar], list[list[Scalar]]] | None:
        """Particular solution (free vars = 0) and kernel basis, or None."""
        if self.inconsistent():
            return None
        self._fully_reduce()
        particular = [Scalar(0)] * self.n_cols
        for col, holder in self.pivot_of_col.items():
            row = self.rows[holder]
            rhs = row.get(_RHS)
            if rhs is not None:
                particular[col] = _to_scalar(rhs, row[col])
        kernel = []
        pivot_cols = set(self.pivot_of_col)
        for free in range(self.n_cols):
            if free in pivot_cols:
                continue
            vec = [Scalar(0)] * self.n_cols
            vec[free] = Scalar(1)
            for col, holder in self.pivot_of_col.items():
                row = self.rows[holder]
                coeff = row.get(free)
                if coeff is not None:
                    vec[col] = -_to_scalar(coeff, row[col])
            kernel.append(vec)
        return particular, kernel


def _iter_rows(M):
    if isinstance(M, Matrix):
        for row in M.entries:
            yield {c: v for c, v in enumerate(row) if not v.is_zero()}
    else:
        for row in M:
            yield {c: v for c, v in enumerate(row) if not v.is_zero()}


def _n_cols(M) -> int:
    if isinstance(M, Matrix):
        return M.cols
    return len(M[0]) if M else 0


@dataclass
class LinearSolution:
    particular: list
    kernel: list


def solve_sparse(rows: list[dict], rhs: list, n_cols: int) -> LinearSolution | None:
    """Solve a sparse system given as {col: Scalar} rows."""
    if len(rhs) != len(rows):
        raise SizeMismatch("right-hand side length does not match row count")
    elim = _Eliminator(n_cols)
    for row, r in zip(rows, rhs):
        r = Scalar.coerce(r)
        full = {c: v for c, v in row.items() if not v.is_zero()}
        if not r.is_zero():
            full[_RHS] = r
        elim.add_row(_row_from_scalars(full))
    result = elim.solution()
    if result is None:
        return None
    particular, kernel = result
    return LinearSolution(particular, kernel)


def kernel_sparse(rows: list[dict], n_cols: int) -> list[list[Scalar]]:
    elim = _Eliminator(n_cols)
    for row in rows:
        entries = {c: v for c, v in row.items() if not v.is_zero()}
        if entries:
            elim.add_row(_row_from_scalars(entries))
    _, kernel = elim.solution()
    return kernel


def rank_sparse(rows: list[dict], n_cols: int) -> int:
    elim = _Eliminator(n_cols)
    for row in rows:
        entries = {c: v for c, v in row.items() if not v.is_zero()}
        if entries:
            elim.add_row(_row_from_scalars(entries))
    return elim.rank()


def solve_linear(M, b) -> LinearSolution | None:
    """Solve M x = b exactly; returns a particular solution and a kernel
    basis, or None when the system is inconsistent."""
    n = _n_cols(M)
    rows = list(_iter_rows(M))
    if len(b) != len(rows):
        raise SizeMismatch("right-hand side length does not match row count")
    elim = _Eliminator(n)
    for row, rhs in zip(rows, b):
        rhs = Scalar.coerce(rhs)
        srow = {c: v for c, v in row.items()}
        full = dict(srow)
        if not rhs.is_zero():
            full[_RHS] = rhs
        elim.add_row(_row_from_scalars(full))
    result = elim.solution()
    if result is None:
        return None
    particular, kernel = result
    return LinearSolution(particular, kernel)


def kernel_basis(M) -> list[list[Scalar]]:
    n = _n_cols(M)
    elim = _Eliminator(n)
    for row in _iter_rows(M):
        elim.add_row(_row_from_scalars(row))
    _, kernel = elim.solution()
    return kernel


def matrix_rank(M) -> int:
    elim = _Eliminator(_n_cols(M))
    for row in _iter_rows(M):
        elim.add_row(_row_from_scalars(row))
    return elim.rank()


class SpanTracker:
    """Incremental span of exact vectors, for quotient-space bookkeeping."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        self._elim = _Eliminator(dimension)

    def add(self, vector) -> bool:
        """Insert a vector; True when it enlarged the span."""
        if len(vector) != self.dimension:
            raise SizeMismatch("vector has wrong dimension for this span")
        entries = {
            c: Scalar.coerce(v)
            for c, v in enumerate(vector)
            if not Scalar.coerce(v).is_zero()
        }
        if not entries:
            return False
        return self._elim.add_row(_row_from_scalars(entries))

    def contains(self, vector) -> bool:
        # membership test must not mutate: reduce a copy via a scratch add
        entries = {
            c: Scalar.coerce(v)
            for c, v in enumerate(vector)
            if not Scalar.coerce(v).is_zero()
        }
        if not entries:
            return True
        row = _row_from_scalars(entries)
        row = _normalize(dict(row))
        while row:
            lead = min(row)
            holder = self._elim.pivot_of_col.get(lead)
            if holder is None:
                return False
            pivot_row = self._elim.rows[holder]
            row = _combine(row, pivot_row[lead], pivot_row, row[lead])
        return True

    @property
    def rank(self) -> int:
        return self._elim.rank()
