from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quotcert import GREVLEX, LEX, MonomialOrder, PolynomialRing, parse_polynomial
from quotcert.errors import PolynomialSyntaxError, RingMismatchError, UnknownVariableError
from quotcert.poly import product, rational

from conftest import R2, R3, points, polys

R = PolynomialRing(["a", "b", "c", "d"])


def test_parse_and_print_canonical():
    f = R.parse("a*d - b*c")
    assert str(f) == "-b*c + a*d"
    assert str(R2.parse("3/2*x^2*y - x + 1")) == "3/2*x^2*y - x + 1"
    assert R2.parse("(x+y)^2") == R2.parse("x^2 + 2*x*y + y^2")
    assert R2.parse("-x") == -R2.var("x")


def test_rational_coefficients_are_exact():
    f = R2.parse("1/3*x + 1/6*x")
    assert f == R2.parse("1/2*x")
    assert f.coefficients() == {(1, 0): Fraction(1, 2)}


def test_syntax_error_reports_offset():
    with pytest.raises(PolynomialSyntaxError) as info:
        R2.parse("x + * y")
    assert info.value.offset == 4


def test_unknown_variable():
    with pytest.raises(UnknownVariableError) as info:
        R2.parse("x + q")
    assert info.value.name == "q"


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        R2.var("x") + R3.var("x")


def test_invalid_ring_names():
    with pytest.raises(ValueError):
        PolynomialRing(["x", "x"])
    with pytest.raises(ValueError):
        PolynomialRing(["1x"])


def test_orders():
    x2, xy3 = (2, 0), (1, 3)
    assert min([x2, xy3], key=LEX.sort_key) == x2
    assert min([x2, xy3], key=GREVLEX.sort_key) == xy3
    block = MonomialOrder.elimination(1)
    assert min([(1, 0), (0, 5)], key=block.sort_key) == (1, 0)


def test_leading_terms():
    f = R2.parse("x*y^2 + 3*x^3 - 2")
    assert f.leading_monomial(GREVLEX) == (3, 0)
    assert f.leading_coefficient(LEX) == 3
    assert f.monic() == R2.parse("x^3 + 1/3*x*y^2 - 2/3")


def test_exact_division():
    f = R2.parse("x^2 - y^2")
    assert f.exact_div(R2.parse("x - y")) == R2.parse("x + y")
    with pytest.raises(ValueError):
        f.exact_div(R2.parse("x + 2"))


def test_substitute_and_partial_evaluate():
    S = PolynomialRing(["t"])
    f = R2.parse("x^3 - y^2")
    g = f.substitute({"x": S.parse("t^2"), "y": S.parse("t^3")})
    assert g.is_zero()
    assert f.partial_evaluate({"x": 2}) == R2.parse("8 - y^2")


def test_homogeneity():
    assert R2.parse("x*y + y^2").is_homogeneous_for([[1], [1]]) is None
    assert R2.parse("x^2 + y").is_homogeneous_for([[1], [1]]) == ((2,), (1,))


def test_product_and_rational():
    assert product([R2.var("x"), R2.var("y")], R2) == R2.parse("x*y")
    assert rational("3/4") == rational(Fraction(3, 4))


@given(polys(R3), polys(R3), polys(R3))
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == 0


@given(polys(R3))
def test_print_parse_round_trip(f):
    assert parse_polynomial(R3, str(f)) == f


@given(polys(R2), polys(R2), points(R2))
def test_evaluation_is_a_homomorphism(f, g, p):
    assert (f * g).evaluate(p) == f.evaluate(p) * g.evaluate(p)
    assert (f + g).evaluate(p) == f.evaluate(p) + g.evaluate(p)


@given(polys(R2), polys(R2))
def test_leibniz_for_partials(f, g):
    assert (f * g).diff("x") == f.diff("x") * g + f * g.diff("x")
