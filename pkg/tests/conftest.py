import os

from hypothesis import HealthCheck, settings, strategies as st

from quotcert import PolynomialRing
from quotcert.poly import Polynomial

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

R2 = PolynomialRing(["x", "y"])
R3 = PolynomialRing(["x", "y", "z"])


def polys(ring, max_terms=4, max_deg=2, coeff=5):
    """Random small polynomials with integer coefficients."""
    mono = st.tuples(*[st.integers(0, max_deg) for _ in ring.variables])
    terms = st.dictionaries(mono, st.integers(-coeff, coeff).filter(bool), max_size=max_terms)
    return terms.map(lambda t: Polynomial.from_terms(ring, t))


def nonzero_polys(ring, **kw):
    return polys(ring, **kw).filter(lambda p: not p.is_zero())


def points(ring, lo=-2, hi=2):
    return st.lists(st.integers(lo, hi), min_size=ring.arity, max_size=ring.arity)
