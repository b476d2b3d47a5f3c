import pytest

from branegauge.errors import ModelParseError
from branegauge.exact import (
    Ring,
    Scalar,
    TruncPoly,
    format_poly,
    parse_poly,
    parse_scalar,
)
from fractions import Fraction

R = Ring(3, 4)


def test_readme_example():
    p = parse_poly("(3/2+1/2i)*x1^2*x2 - x3", R)
    assert p.terms[(2, 1, 0)] == Scalar(Fraction(3, 2), Fraction(1, 2))
    assert p.terms[(0, 0, 1)] == Scalar(-1)


def test_whitespace_insignificant():
    assert parse_poly(" x1 * x2  +  3/2 ", R) == parse_poly("x1*x2+3/2", R)


def test_bare_monomial_and_powers():
    p = parse_poly("x2^3", R)
    assert p.terms == {(0, 3, 0): Scalar(1)}


def test_negative_leading_term():
    p = parse_poly("-x1 + 2", R)
    assert p.terms[(1, 0, 0)] == Scalar(-1)


def test_scalar_forms():
    assert parse_scalar("3/2") == Scalar(Fraction(3, 2))
    assert parse_scalar("(3/2-1/2i)") == Scalar(Fraction(3, 2), Fraction(-1, 2))
    assert parse_scalar("-2i") == Scalar(0, -2)
    assert parse_scalar("(1/2i)") == Scalar(0, Fraction(1, 2))


def test_roundtrip_format_parse():
    samples = [
        "x1*x2 - x3",
        "(3/2+1/2i)*x1^2*x2 - x3 + 1/3",
        "0",
        "-1/2i*x2",
    ]
    for s in samples:
        p = parse_poly(s, R)
        assert parse_poly(format_poly(p), R) == p


def test_errors_carry_position():
    with pytest.raises(ModelParseError) as err:
        parse_poly("x1 + x9", R)
    assert "col" in str(err.value)
    with pytest.raises(ModelParseError):
        parse_poly("x1 x2", R)
    with pytest.raises(ModelParseError):
        parse_poly("", R)
    with pytest.raises(ModelParseError):
        parse_poly("x1^5", R)  # beyond truncation bound
