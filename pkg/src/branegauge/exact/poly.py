"""Truncated multivariate polynomials over Gaussian rationals.

A polynomial lives in a fixed ambient `Ring(n_vars, trunc_degree)`.  Terms
map exponent tuples (one entry per variable, total degree <= trunc_degree)
to nonzero scalars.  Products whose operand degrees sum beyond the
truncation bound raise DegreeOverflow: results are exact or refused, never
silently cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from ..errors import DegreeOverflow, SizeMismatch
from .scalar import Scalar


@dataclass(frozen=True)
class Ring:
    n_vars: int
    trunc_degree: int

    def __post_init__(self):
        if self.n_vars < 1:
            raise SizeMismatch("n_vars must be positive")
        if self.trunc_degree < 1:
            raise SizeMismatch("trunc_degree must be positive")


def monomials_upto(n_vars: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= max_degree, in a fixed order."""
    result = []
    for d in range(max_degree + 1):
        for combo in combinations_with_replacement(range(n_vars), d):
            exp = [0] * n_vars
            for v in combo:
                exp[v] += 1
            result.append(tuple(exp))
    return result


class TruncPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms=None):
        self.ring = ring
        clean = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = Scalar.coerce(coeff)
                if coeff.is_zero():
                    continue
                if len(exp) != ring.n_vars:
                    raise SizeMismatch(f"exponent {exp} has wrong arity")
                if sum(exp) > ring.trunc_degree:
                    raise DegreeOverflow(
                        f"monomial of degree {sum(exp)} exceeds bound {ring.trunc_degree}"
                    )
                clean[tuple(exp)] = coeff
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(ring: Ring) -> "TruncPoly":
        return TruncPoly(ring)

    @staticmethod
    def constant(ring: Ring, value) -> "TruncPoly":
        return TruncPoly(ring, {(0,) * ring.n_vars: Scalar.coerce(value)})

    @staticmethod
    def variable(ring: Ring, index: int) -> "TruncPoly":
        exp = [0] * ring.n_vars
        exp[index] = 1
        return TruncPoly(ring, {tuple(exp): Scalar(1)})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree of the stored terms; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.ring.n_vars, Scalar(0))

    def _check_ring(self, other: "TruncPoly"):
        if self.ring != other.ring:
            raise SizeMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = TruncPoly.constant(self.ring, other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        self._check_ring(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, Scalar(0)) + c
            if s.is_zero():
                terms.pop(exp, None)
            else:
                terms[exp] = s
        out = TruncPoly.__new__(TruncPoly)
        out.ring, out.terms = self.ring, terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = TruncPoly.__new__(TruncPoly)
        out.ring = self.ring
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = TruncPoly.constant(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "TruncPoly":
        value = Scalar.coerce(value)
        out = TruncPoly.__new__(TruncPoly)
        out.ring = self.ring
        if value.is_zero():
            out.terms = {}
        else:
            out.terms = {e: c * value for e, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        self._check_ring(other)
        if self.is_zero() or other.is_zero():
            return TruncPoly.zero(self.ring)
        if self.degree() + other.degree() > self.ring.trunc_degree:
            raise DegreeOverflow(
                f"product degree {self.degree()}+{other.degree()} exceeds "
                f"bound {self.ring.trunc_degree}"
            )
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exp, Scalar(0)) + c1 * c2
                if s.is_zero():
                    terms.pop(exp, None)
                else:
                    terms[exp] = s
        out = TruncPoly.__new__(TruncPoly)
        out.ring, out.terms = self.ring, terms
        return out

    __rmul__ = __mul__

    def derivative(self, var: int) -> "TruncPoly":
        terms: dict = {}
        for exp, c in self.terms.items():
            k = exp[var]
            if k == 0:
                continue
            new = list(exp)
            new[var] = k - 1
            terms[tuple(new)] = c * k
        out = TruncPoly.__new__(TruncPoly)
        out.ring, out.terms = self.ring, terms
        return out

    def evaluate(self, point: list[Scalar]) -> Scalar:
        if len(point) != self.ring.n_vars:
            raise SizeMismatch("evaluation point has wrong arity")
        total = Scalar(0)
        for exp, c in self.terms.items():
            value = c
            for x, k in zip(point, exp):
                for _ in range(k):
                    value = value * x
            total = total + value
        return total

    def conjugate_coeffs(self) -> "TruncPoly":
        out = TruncPoly.__new__(TruncPoly)
        out.ring = self.ring
        out.terms = {e: c.conjugate() for e, c in self.terms.items()}
        return out

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = TruncPoly.constant(self.ring, other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[exp]
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}"
                for i, k in enumerate(exp)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == Scalar(1):
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TruncPoly({self})"
