import pytest
import sympy
from hypothesis import given, strategies as st

from quotcert import GREVLEX, LEX, Ideal, MonomialOrder, PolynomialRing
from quotcert.errors import ResourceLimitExceeded
from quotcert.groebner import STATS, groebner, is_groebner, normal_form
from quotcert.factor import _from_sympy

from conftest import R2, R3, nonzero_polys, polys


def sympy_basis(gens, ring, order):
    syms = sympy.symbols(ring.variables)
    exprs = [sympy.sympify(str(g).replace("^", "**"), locals=dict(zip(ring.variables, syms))) for g in gens]
    G = sympy.groebner(exprs, *syms, order=order, domain="QQ")
    return sorted(str(_from_sympy(sympy.Poly(e, *syms, domain="QQ"), ring).monic(
        MonomialOrder.lex() if order == "lex" else GREVLEX)) for e in G.exprs)


def ours(gens, ring, order):
    return sorted(str(g) for g in Ideal(ring, gens).groebner_basis(order))


def test_textbook_lex_basis():
    I = Ideal(R2, ["x^2 - y", "x*y - x"])
    assert [str(g) for g in I.groebner_basis(LEX)] == ["x^2 - y", "x*y - x", "y^2 - y"]


def test_unit_ideal():
    assert Ideal(R2, ["x", "x - 1"]).groebner_basis() == [R2.one()]


def test_constant_term_does_not_stop_the_computation():
    # a reduced S-polynomial with a constant term used to end Buchberger early
    R = PolynomialRing(["t", "x", "y"])
    I = Ideal(R, ["x^2 - y", "x*y - 1", "t*x - 1"])
    assert I.check_groebner(MonomialOrder.elimination(1))
    assert I.check_groebner(GREVLEX)


def test_step_cap(monkeypatch):
    # cyclic-4 needs 29 reduction steps
    R = PolynomialRing(["a", "b", "c", "d"])
    gens = ["a+b+c+d", "a*b+b*c+c*d+d*a", "a*b*c+b*c*d+c*d*a+d*a*b", "a*b*c*d-1"]
    polys_ = [dict(R.parse(s).terms) for s in gens]
    monkeypatch.setenv("QUOTCERT_STEP_CAP", "10")
    with pytest.raises(ResourceLimitExceeded):
        groebner(polys_, GREVLEX)
    assert len(groebner(polys_, GREVLEX, cap=100)) == 7


def test_stats_are_recorded():
    STATS.reset()
    Ideal(R3, ["x*y - z", "y*z - x"]).groebner_basis()
    snap = STATS.snapshot()
    assert snap["groebner_computations"] >= 1 and snap["max_basis_size"] >= 2


@given(st.lists(nonzero_polys(R3, max_terms=3), min_size=1, max_size=3))
def test_grevlex_matches_sympy(gens):
    assert ours(gens, R3, GREVLEX) == sympy_basis(gens, R3, "grevlex")


@given(st.lists(nonzero_polys(R2, max_terms=3), min_size=1, max_size=3))
def test_lex_matches_sympy(gens):
    assert ours(gens, R2, LEX) == sympy_basis(gens, R2, "lex")


@given(st.lists(nonzero_polys(R3, max_terms=3), min_size=1, max_size=3), st.integers(0, 3))
def test_buchberger_certificate(gens, block):
    order = MonomialOrder.elimination(block) if block else GREVLEX
    I = Ideal(R3, gens)
    basis = I.groebner_basis(order)
    assert is_groebner([dict(g.terms) for g in basis], order)
    # every generator reduces to zero, every basis element is monic and reduced
    for g in gens:
        assert not normal_form(dict(g.terms), [dict(b.terms) for b in basis], order)
    for b in basis:
        assert b.leading_coefficient(order) == 1


@given(st.lists(nonzero_polys(R3, max_terms=3), min_size=1, max_size=3), polys(R3), polys(R3))
def test_ideal_membership_of_combinations(gens, a, b):
    I = Ideal(R3, gens)
    f = a * gens[0] + b * gens[-1]
    assert I.contains(f)
