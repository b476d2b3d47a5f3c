"""The polynomial string grammar shared by every file format.

Terms are joined by '+'/'-'.  A term is an optional coefficient, an
optional monomial, or both joined by '*'.  Coefficients are integers,
rationals 'a/b', or parenthesized complex combinations '(a/b+c/d i)'.
Monomials are '*'-joined factors 'x<k>' with an optional '^e'.
Whitespace is insignificant.

Errors carry a caret position into the original string.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ModelParseError
from .poly import Ring, TruncPoly
from .scalar import Scalar

_FRACTION = re.compile(r"(-?\d+)(?:/(\d+))?")
_VARIABLE = re.compile(r"x(\d+)(?:\^(\d+))?")


class _Cursor:
    def __init__(self, text: str):
        self.raw = text
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ModelParseError:
        pointer = f"col {self.pos + 1} of {self.raw!r}"
        return ModelParseError(message, location=pointer)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, char: str) -> bool:
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def match(self, pattern: re.Pattern):
        m = pattern.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m


def parse_scalar(text: str) -> Scalar:
    """Parse a standalone coefficient string such as '3/2', '-1/2i',
    or '(3/2+1/2i)'."""
    cur = _Cursor("".join(text.split()))
    value = _parse_coefficient(cur)
    if value is None or cur.pos != len(cur.text):
        raise cur.error("invalid scalar literal")
    return value


def _parse_simple_part(cur: _Cursor) -> Scalar | None:
    m = cur.match(_FRACTION)
    if not m:
        return None
    q = Fraction(int(m.group(1)), int(m.group(2)) if m.group(2) else 1)
    if cur.take("i"):
        return Scalar(0, q)
    return Scalar(q)


def _parse_coefficient(cur: _Cursor) -> Scalar | None:
    if cur.take("("):
        first = _parse_simple_part(cur)
        if first is None:
            raise cur.error("expected a rational inside parentheses")
        total = first
        while cur.peek() in "+-":
            sign = -1 if cur.take("-") else (cur.take("+") and 1)
            part = _parse_simple_part(cur)
            if part is None:
                raise cur.error("expected a rational after sign")
            total = total + (part if sign == 1 else -part)
        if not cur.take(")"):
            raise cur.error("unbalanced parenthesis in coefficient")
        return total
    return _parse_simple_part(cur)


def _parse_monomial(cur: _Cursor, ring: Ring) -> dict | None:
    exps = None
    while True:
        m = cur.match(_VARIABLE)
        if not m:
            break
        index = int(m.group(1))
        if not 1 <= index <= ring.n_vars:
            raise cur.error(
                f"variable x{index} outside x1..x{ring.n_vars}"
            )
        power = int(m.group(2)) if m.group(2) else 1
        if exps is None:
            exps = [0] * ring.n_vars
        exps[index - 1] += power
        mark = cur.pos
        if not cur.take("*"):
            break
        if not _VARIABLE.match(cur.text, cur.pos):
            cur.pos = mark  # the '*' belongs to the next construct
            break
    return None if exps is None else {"exps": tuple(exps)}


def parse_poly(text: str, ring: Ring) -> TruncPoly:
    cur = _Cursor("".join(str(text).split()))
    if not cur.text:
        raise cur.error("empty polynomial string")
    total = TruncPoly.zero(ring)
    first = True
    while cur.pos < len(cur.text):
        negative = False
        if cur.take("-"):
            negative = True
        elif cur.take("+"):
            if first:
                raise cur.error("leading '+' not allowed")
        elif not first:
            raise cur.error("expected '+' or '-' between terms")
        first = False

        coeff = _parse_coefficient(cur)
        if coeff is not None:
            cur.take("*")
        mono = _parse_monomial(cur, ring)
        if coeff is None and mono is None:
            raise cur.error("expected a coefficient or monomial")
        if coeff is None:
            coeff = Scalar(1)
        exps = mono["exps"] if mono else (0,) * ring.n_vars
        if sum(exps) > ring.trunc_degree:
            raise cur.error(
                f"monomial degree {sum(exps)} exceeds truncation bound "
                f"{ring.trunc_degree}"
            )
        if negative:
            coeff = -coeff
        total = total + TruncPoly(ring, {exps: coeff})
    return total


def format_scalar(value: Scalar) -> str:
    return str(value)


def format_poly(poly: TruncPoly) -> str:
    """Canonical string form; parses back to an equal polynomial."""
    if poly.is_zero():
        return "0"
    parts = []
    for exp in sorted(poly.terms, key=lambda e: (sum(e), e)):
        coeff = poly.terms[exp]
        mono = "*".join(
            f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}"
            for i, k in enumerate(exp)
            if k
        )
        if mono and coeff == Scalar(1):
            body = mono
        elif mono:
            body = f"{coeff}*{mono}"
        else:
            body = str(coeff)
        parts.append(body)
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-") and "(" not in part.split("*")[0]:
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out
