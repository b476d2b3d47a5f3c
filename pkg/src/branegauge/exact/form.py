"""Exterior forms with truncated-polynomial coefficients.

A degree-k form stores a map from strictly increasing k-tuples of variable
indices (the frame element dx_I) to polynomial coefficients.  The exterior
derivative, the wedge and the flat polytorus pairing are all exact.

`form_vars` normally equals the ring's variable count; it may be smaller
when the trailing variables are formal parameters that carry no frame
direction (they are then treated as constants by the derivative).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..errors import DegreeMismatch, SizeMismatch
from .poly import Ring, TruncPoly
from .scalar import Scalar


def _merge_sign(I: tuple, J: tuple):
    """Sorted union of disjoint index tuples and the interleaving sign."""
    inversions = 0
    for a in I:
        for b in J:
            if a == b:
                return None, 0
            if a > b:
                inversions += 1
    return tuple(sorted(I + J)), (-1) ** inversions


class ExteriorForm:
    __slots__ = ("ring", "degree", "components", "form_vars")

    def __init__(self, ring: Ring, degree: int, components=None, form_vars=None):
        self.ring = ring
        self.form_vars = ring.n_vars if form_vars is None else form_vars
        if degree < 0:
            raise DegreeMismatch(f"form degree {degree} negative")
        if degree > self.form_vars and components:
            raise DegreeMismatch(
                f"nonzero form of degree {degree} impossible with "
                f"{self.form_vars} frame directions"
            )
        self.degree = degree
        clean = {}
        if components:
            for idx, poly in components.items():
                idx = tuple(idx)
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise SizeMismatch(f"index set {idx} invalid for degree {degree}")
                if idx and idx[-1] >= self.form_vars:
                    raise SizeMismatch(f"index set {idx} outside frame range")
                if isinstance(poly, (int, Fraction, Scalar)):
                    poly = TruncPoly.constant(ring, poly)
                if not poly.is_zero():
                    clean[idx] = poly
        self.components = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ring: Ring, degree: int, form_vars=None) -> "ExteriorForm":
        return ExteriorForm(ring, degree, {}, form_vars)

    @staticmethod
    def from_poly(poly: TruncPoly, form_vars=None) -> "ExteriorForm":
        return ExteriorForm(poly.ring, 0, {(): poly}, form_vars)

    @staticmethod
    def dx(ring: Ring, index: int, form_vars=None) -> "ExteriorForm":
        return ExteriorForm(
            ring, 1, {(index,): TruncPoly.constant(ring, 1)}, form_vars
        )

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.components

    def poly_degree(self) -> int:
        return max((p.degree() for p in self.components.values()), default=-1)

    def component(self, idx) -> TruncPoly:
        return self.components.get(tuple(idx), TruncPoly.zero(self.ring))

    def _check_compatible(self, other: "ExteriorForm"):
        if self.ring != other.ring or self.form_vars != other.form_vars:
            raise SizeMismatch("forms live over different rings")

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExteriorForm):
            return NotImplemented
        self._check_compatible(other)
        if self.degree != other.degree:
            raise DegreeMismatch(
                f"cannot add forms of degree {self.degree} and {other.degree}"
            )
        comps = dict(self.components)
        for idx, p in other.components.items():
            s = comps.get(idx, TruncPoly.zero(self.ring)) + p
            if s.is_zero():
                comps.pop(idx, None)
            else:
                comps[idx] = s
        return self._make(self.degree, comps)

    def __neg__(self):
        return self._make(self.degree, {i: -p for i, p in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value) -> "ExteriorForm":
        """Multiply by a scalar or polynomial (degree-0) factor."""
        comps = {}
        for idx, p in self.components.items():
            q = p * value if isinstance(value, TruncPoly) else p.scale(value)
            if not q.is_zero():
                comps[idx] = q
        return self._make(self.degree, comps)

    def _make(self, degree, comps) -> "ExteriorForm":
        out = ExteriorForm.__new__(ExteriorForm)
        out.ring, out.degree, out.form_vars = self.ring, degree, self.form_vars
        out.components = comps
        return out

    # -- graded multiplication ------------------------------------------------

    def wedge(self, other: "ExteriorForm") -> "ExteriorForm":
        self._check_compatible(other)
        degree = self.degree + other.degree
        if degree > self.form_vars:
            return self._make(degree, {})
        comps: dict = {}
        for I, p in self.components.items():
            for J, q in other.components.items():
                idx, sign = _merge_sign(I, J)
                if idx is None:
                    continue
                term = p * q
                if sign < 0:
                    term = -term
                s = comps.get(idx, TruncPoly.zero(self.ring)) + term
                if s.is_zero():
                    comps.pop(idx, None)
                else:
                    comps[idx] = s
        return self._make(degree, comps)

    def __mul__(self, other):
        if isinstance(other, ExteriorForm):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, other):
        # poly * form and scalar * form act by coefficient scaling
        return self.scale(other)

    # -- calculus ---------------------------------------------------------

    def exterior_d(self) -> "ExteriorForm":
        """Exterior derivative; differentiation only lowers polynomial degree,
        so the result is always exact."""
        if self.degree >= self.form_vars:
            return self._make(self.degree + 1, {})
        comps: dict = {}
        for I, p in self.components.items():
            for j in range(self.form_vars):
                if j in I:
                    continue
                dp = p.derivative(j)
                if dp.is_zero():
                    continue
                idx, sign = _merge_sign((j,), I)
                term = dp if sign > 0 else -dp
                s = comps.get(idx, TruncPoly.zero(self.ring)) + term
                if s.is_zero():
                    comps.pop(idx, None)
                else:
                    comps[idx] = s
        return self._make(self.degree + 1, comps)

    # -- pairing ------------------------------------------------------------

    def torus_pairing(self, other: "ExteriorForm", mode: str = "hermitian") -> Scalar:
        """Flat L2 pairing on the unit polytorus.

        The frame elements dx_I are orthonormal and distinct monomials are
        orthogonal; hermitian mode conjugates the first argument.
        """
        self._check_compatible(other)
        if self.degree != other.degree:
            raise DegreeMismatch(
                f"pairing of degree {self.degree} with degree {other.degree}"
            )
        if mode not in ("hermitian", "bilinear"):
            raise ValueError(f"unknown pairing mode {mode!r}")
        total = Scalar(0)
        for idx, p in self.components.items():
            q = other.components.get(idx)
            if q is None:
                continue
            for exp, a in p.terms.items():
                b = q.terms.get(exp)
                if b is None:
                    continue
                total = total + (a.conjugate() * b if mode == "hermitian" else a * b)
        return total

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ExteriorForm):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.form_vars == other.form_vars
            and self.degree == other.degree
            and self.components == other.components
        )

    def __hash__(self):
        return hash(
            (self.ring, self.degree, frozenset(self.components.items()))
        )

    def __str__(self):
        if not self.components:
            return "0"
        parts = []
        for idx in sorted(self.components):
            frame = "^".join(f"dx{i + 1}" for i in idx)
            coeff = str(self.components[idx])
            if not idx:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(frame)
            else:
                parts.append(f"({coeff}) {frame}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ExteriorForm({self})"


def basis_index_sets(form_vars: int, degree: int) -> list[tuple[int, ...]]:
    return list(combinations(range(form_vars), degree))
