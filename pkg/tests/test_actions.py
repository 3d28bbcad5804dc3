import pytest
from hypothesis import given, strategies as st

from quotcert import PolynomialRing
from quotcert.actions import (
    ActionSpec,
    Derivation,
    apply_derivation,
    exp_action,
    flow_map,
    nilpotency_index,
    verify_invariants,
)
from quotcert.errors import NilpotencyBoundExceeded, RingMismatchError
from quotcert.scenario import load_corpus, load_scenario

from conftest import R3, polys

ABCD = PolynomialRing(["a", "b", "c", "d"])
D41 = Derivation(ABCD, {"a": "c", "b": "d"})


def P(ring, s):
    return ring.parse(s)


def test_apply_examples():
    assert D41(P(ABCD, "a*d - b*c")).is_zero()
    assert D41(ABCD.const(7)).is_zero()
    rob = load_scenario("roberts_m2")
    (D,) = rob.derivations
    assert D(P(rob.ring, "x*v - (y*z)^2*s")).is_zero()


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        apply_derivation(D41, R3.var("x"))


@pytest.mark.parametrize("name", ["ex41_matrices", "winkelmann", "sl2_minors", "quadric", "roberts_m2", "p1p1"])
def test_corpus_invariants_pass(name):
    report = verify_invariants(load_scenario(name).action_spec())
    assert report.ok, report.to_json()


def test_winkelmann_divisibility_witness():
    sc = load_scenario("winkelmann")
    f = dict(sc.invariants)
    lhs = f["y1"] * f["y4"]
    rhs = f["y3"] ** 2 - f["y2"] * (1 - f["y2"]) ** 2
    assert lhs == rhs


def test_non_invariant_is_reported():
    spec = ActionSpec(ABCD, [D41], [("a", ABCD.var("a")), ("c", ABCD.var("c"))])
    report = verify_invariants(spec)
    assert not report.ok
    assert [(x.invariant, str(x.derivative)) for x in report.failures] == [("a", "c")]


def test_invariance_modulo_domain():
    from quotcert import Ideal
    from conftest import R2

    D = Derivation(R2, {"x": "y"})
    f = [("x", R2.var("x"))]
    assert not verify_invariants(ActionSpec(R2, [D], f)).ok
    assert verify_invariants(ActionSpec(R2, [D], f, Ideal(R2, ["y"]))).ok
    # membership is ideal-theoretic, not radical
    assert not verify_invariants(ActionSpec(R2, [D], f, Ideal(R2, ["y^2"]))).ok


def test_exp_examples():
    img, big = exp_action(D41, ABCD.var("a"))
    assert img == P(big, "a + lam*c")
    sc = load_scenario("winkelmann")
    (D,) = sc.derivations
    img, big = exp_action(D, sc.ring.var("x3"))
    assert img == P(big, "x3 + lam*x2 + 1/2*lam^2*x1")
    img, big = exp_action(D41, P(ABCD, "a*d - b*c"))
    assert "lam" not in {v for v in img.support()}


def test_nilpotency():
    assert nilpotency_index(D41, ABCD.var("a")) == 2
    assert nilpotency_index(D41, ABCD.var("c")) == 1
    assert nilpotency_index(D41, ABCD.zero()) == 0
    sc = load_scenario("winkelmann")
    (D,) = sc.derivations
    assert nilpotency_index(D, sc.ring.var("x4")) == 2


def test_nilpotency_bound():
    R = PolynomialRing(["x"])
    euler = Derivation(R, {"x": "x"})
    with pytest.raises(NilpotencyBoundExceeded) as info:
        nilpotency_index(euler, R.var("x"), bound=5)
    assert info.value.survivor == R.var("x")
    with pytest.raises(NilpotencyBoundExceeded):
        exp_action(euler, R.var("x"), bound=5)


def test_param_name_clash():
    R = PolynomialRing(["lam", "x"])
    D = Derivation(R, {"x": "lam"})
    img, big = exp_action(D, R.var("x"))
    assert len(big.variables) == 3 and img.support() == {"x", "lam", big.variables[-1]}


# triangular derivations of Q[x, y, z] are locally nilpotent
triangular = st.tuples(polys(R3, max_terms=2, max_deg=2), polys(R3, max_terms=2, max_deg=2)).map(
    lambda t: Derivation(
        R3,
        {
            "y": t[0].partial_evaluate({"y": 0, "z": 0}),
            "z": t[1].partial_evaluate({"z": 0}),
        },
    )
)


@given(polys(R3, max_terms=3), polys(R3, max_terms=3), polys(R3, max_terms=3), polys(R3, max_terms=3))
def test_leibniz(f, g, p, q):
    D = Derivation(R3, {"x": p, "y": q})
    assert D(f * g) == f * D(g) + g * D(f)
    assert D(f + g) == D(f) + D(g)


@given(triangular, polys(R3, max_terms=3))
def test_action_cocycle(D, f):
    once, big1 = exp_action(D, f, param="l1")
    twice, big2 = exp_action(D.extend(big1), once, param="l2")
    shifted = {v: big2.var(v) for v in big1.variables}
    shifted["l1"] = big2.var("l1") + big2.var("l2")
    assert once.substitute(shifted) == twice


@given(triangular, polys(R3, max_terms=3))
def test_invariant_iff_lambda_free(D, f):
    img, big = exp_action(D, f)
    assert D(f).is_zero() == ("lam" not in img.support())


@pytest.mark.parametrize("scenario", load_corpus(), ids=lambda s: s.name)
def test_corpus_flows(scenario):
    """Cocycle and lambda-freeness on every corpus derivation that is locally nilpotent."""
    for D in scenario.derivations:
        try:
            images, big = flow_map(D)
        except NilpotencyBoundExceeded:
            continue  # the SL(2) root vectors are nilpotent; nothing in the corpus trips this
        for v, img in zip(scenario.ring.variables, images):
            once, b1 = exp_action(D, scenario.ring.var(v), param="l1")
            twice, b2 = exp_action(D.extend(b1), once, param="l2")
            binding = {w: b2.var(w) for w in b1.variables}
            binding["l1"] = b2.var("l1") + b2.var("l2")
            assert once.substitute(binding) == twice
        for name, f in scenario.invariants:
            img, big = exp_action(D, f)
            lam = big.variables[-1]
            assert lam not in img.support(), name
