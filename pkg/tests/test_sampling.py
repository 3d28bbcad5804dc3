import random

from hypothesis import given, strategies as st

from quotcert import PolynomialRing
from quotcert.constructible import ConstructibleSet, Stratum
from quotcert.sampling import random_value, sample_set, sample_stratum

from conftest import R2, nonzero_polys

UVW = PolynomialRing(["u", "v", "w"])


def test_point_on_curve():
    s = Stratum.make(R2, ["y^2 - x^3"], ["x"])
    rng = random.Random(0)
    for _ in range(20):
        p = sample_stratum(s, rng)
        assert p is not None and s.contains_point(p)


def test_empty_strata_give_none():
    rng = random.Random(0)
    assert sample_stratum(Stratum.make(R2, ["x", "x - 1"]), rng) is None
    assert sample_stratum(Stratum.make(R2, ["x"], ["x"]), rng, attempts=5) is None
    assert sample_set(ConstructibleSet.empty(R2), rng) is None


def test_irrational_only_points_are_not_invented():
    # x^2 = 2 has no rational points; the search must give up rather than round
    assert sample_stratum(Stratum.make(R2, ["x^2 - 2", "y"]), random.Random(1), attempts=5) is None


def test_seeded_runs_repeat():
    S = ConstructibleSet(UVW, [Stratum.make(UVW, [], ["u", "v"])])
    a = [sample_set(S, random.Random(3)) for _ in range(3)]
    b = [sample_set(S, random.Random(3)) for _ in range(3)]
    assert a == b


@given(st.randoms(use_true_random=False))
def test_random_values_are_rational(rng):
    v = random_value(rng)
    assert -12 <= v <= 12


@given(nonzero_polys(R2, max_terms=3), st.randoms(use_true_random=False))
def test_samples_satisfy_hypersurface(f, rng):
    s = Stratum(Stratum.make(R2, []).vanishing + f, Stratum.make(R2).nonvanishing)
    p = sample_stratum(s, rng, attempts=3)
    if p is not None:
        assert f.evaluate(p) == 0
