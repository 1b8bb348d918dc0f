from fractions import Fraction

import pytest
from hypothesis import given

from conftest import polynomials
from mfwb.errors import ContextError, ParseError
from mfwb.polyring import (
    Polynomial,
    RingContext,
    format_monomial,
    grlex_key,
    monomials_up_to,
    parse_polynomial,
)

XY = ("x", "y")
P = polynomials(XY)


def test_parse_basic():
    p = parse_polynomial("3*x^2*y - y + 1/2", XY)
    assert p.coefficient((2, 1)) == 3
    assert p.coefficient((0, 1)) == -1
    assert p.constant_term() == Fraction(1, 2)


def test_parse_implicit_forms():
    assert parse_polynomial("-(x + y)^2", XY) == parse_polynomial("-x^2 - 2*x*y - y^2", XY)
    assert parse_polynomial("2^3*x", XY) == parse_polynomial("8*x", XY)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as ei:
        parse_polynomial("x + * y", XY)
    assert ei.value.position == 4
    with pytest.raises(ParseError):
        parse_polynomial("z", XY)
    with pytest.raises(ParseError):
        parse_polynomial("x^-1", XY)
    with pytest.raises(ParseError):
        parse_polynomial("x / y", XY)


@given(P)
def test_parse_round_trip(p):
    assert parse_polynomial(str(p), XY) == p


@given(P, P, P)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(XY)


@given(P, P)
def test_leibniz(a, b):
    for i in range(2):
        assert (a * b).derivative(i) == a.derivative(i) * b + a * b.derivative(i)


@given(P)
def test_truncate_and_homogeneous_parts(p):
    parts = [p.homogeneous_part(d) for d in range(4)]
    assert sum(parts, Polynomial.zero(XY)) == p
    assert p.truncate(2) == parts[0] + parts[1]


def test_context_mismatch():
    with pytest.raises(ContextError):
        Polynomial.variable(("x",), "x") + Polynomial.variable(XY, "x")


def test_grlex_order_and_monomials():
    monos = monomials_up_to(2, 2)
    assert len(monos) == 6
    assert sorted(monos, key=grlex_key, reverse=True)[0] == (2, 0)
    assert format_monomial((1, 2), XY) == "x*y^2"
    assert format_monomial((0, 0), XY) == "1"


def test_ring_context():
    ctx = RingContext.from_strings(["x", "y"], "x^3 + y^3")
    assert ctx.n == 2
    assert ctx.w == ctx.parse("x^3+y^3")
    assert ctx.one() * ctx.var("x") == ctx.var(0)
