import pytest

from quotcert import Ideal, PolynomialRing
from quotcert.actions import ActionSpec, Derivation
from quotcert.certify import (
    certify_constructible_quotient,
    certify_variety_quotient,
    construction_pipeline,
    invariant_map,
    locus_is_invariant,
    quadric_counterexample_check,
)
from quotcert.cones import cone
from quotcert.constructible import ConstructibleSet, Stratum
from quotcert.errors import NotInvariantError
from quotcert.gitfan import GradingData
from quotcert.scenario import load_scenario

UVW = PolynomialRing(["u", "v", "w"])
P1P1 = GradingData(UVW, None, [(1, 0), (0, 1), (1, 1)])


def spec(name, **kw):
    return load_scenario(name).action_spec(**kw)


def boundary(v):
    return [([str(g) for g in c.ideal.generators], c.codimension, c.meets_image) for c in v.boundary_components]


def test_example_verdicts():
    s = spec("ex41_matrices")
    v = certify_variety_quotient(s)
    assert v.constructible_quotient_exists is True
    assert v.variety_quotient_exists is False
    # the closure of the boundary passes through the origin, which is in the image
    assert boundary(v) == [(["u", "v"], 2, True)]
    assert v.certificate_rechecked is True
    R = s.ring
    assert v.maximal_locus_upstairs.equals(ConstructibleSet(R, [Stratum.make(R, [], ["c", "d"])]))
    assert v.open_kernel.equals(ConstructibleSet(UVW, [Stratum.make(UVW, [], ["u", "v"])]))
    assert locus_is_invariant(v.maximal_locus_upstairs, s.derivations)


def test_sl2_verdicts():
    s = spec("sl2_minors")
    v = certify_variety_quotient(s)
    assert (v.constructible_quotient_exists, v.variety_quotient_exists) == (True, False)
    R = v.image.ring
    D12, D13, _ = R.variables
    assert boundary(v) == [([D12, D13], 2, True)]
    assert locus_is_invariant(v.maximal_locus_upstairs, s.derivations)


def test_winkelmann_verdicts():
    s = spec("winkelmann")
    v = certify_variety_quotient(s)
    assert v.constructible_quotient_exists is True
    assert v.variety_quotient_exists is False
    assert boundary(v) == [(["y1", "y2 - 1", "y3"], 2, True)]
    assert locus_is_invariant(v.maximal_locus_upstairs, s.derivations)


def test_trivial_action_is_identity_quotient():
    R = PolynomialRing(["x", "y"])
    s = ActionSpec(R, [], [("p", R.var("x")), ("q", R.var("y"))])
    v = certify_variety_quotient(s)
    assert v.constructible_quotient_exists and v.variety_quotient_exists
    assert v.image.equals(ConstructibleSet.whole(v.image.ring))
    assert v.open_kernel.equals(v.image)
    assert v.boundary_components == []


def test_non_invariant_input_is_rejected():
    R = PolynomialRing(["a", "b", "c", "d"])
    s = ActionSpec(R, [Derivation(R, {"a": "c"})], [("p", R.var("a"))])
    with pytest.raises(NotInvariantError):
        certify_constructible_quotient(s)


def test_divisorial_boundary_meeting_image_gives_false():
    # (x, y) -> (x, x*y): the image misses the y-axis except the origin, a divisor meeting the image
    R = PolynomialRing(["x", "y"])
    s = ActionSpec(R, [], [("p", R.var("x")), ("q", R.parse("x*y"))])
    v = certify_variety_quotient(s)
    assert v.constructible_quotient_exists is False
    assert v.variety_quotient_exists is False
    assert boundary(v) == [(["p"], 1, True)]


def test_removable_divisor_gives_true():
    # (x, y) -> (x, x*y) on x != 0: image is p != 0, the divisor p = 0 misses it
    R = PolynomialRing(["x", "y"])
    s = ActionSpec(R, [], [("p", R.var("x")), ("q", R.parse("x*y"))], charts=[R.var("x")])
    v = certify_variety_quotient(s)
    assert v.constructible_quotient_exists is True
    assert v.variety_quotient_exists is True
    assert boundary(v) == [(["p"], 1, False)]
    assert v.certificate_rechecked is True


def test_localize_restricts_to_principal_open():
    s = spec("ex41_matrices", localize="c")
    v = certify_variety_quotient(s)
    assert v.variety_quotient_exists is True  # image is u != 0, open
    assert v.image.equals(ConstructibleSet(UVW, [Stratum.make(UVW, [], ["u"])]))


@pytest.mark.parametrize("name", ["ex41_matrices", "winkelmann", "sl2_minors", "quadric", "p1p1"])
def test_verdict_implication(name):
    v = certify_variety_quotient(spec(name))
    if v.variety_quotient_exists:
        assert v.constructible_quotient_exists
    assert v.variety_quotient_exists == v.open_kernel.equals(v.image)


def test_quadric_counterexample():
    r = quadric_counterexample_check(spec("quadric"))
    assert r.witness == [[0, 0, 1, 0], [0, 0, 0, 1]]
    assert r.same_image and r.distinct_ratios
    assert r.fiber_dimension_at_origin == 2
    assert r.surjectivity_samples == 25 and r.surjective_on_samples
    assert r.ok
    phi = invariant_map(spec("quadric"))
    assert phi([0, 0, 1, 0]) == phi([0, 0, 0, 1]) == [0, 0]


def test_pipeline_examples():
    r = construction_pipeline(P1P1, (2, 1))
    assert r.chamber.equals(cone((1, 0), (1, 1)))
    assert r.semistable.equals(ConstructibleSet(UVW, [Stratum.make(UVW, [], ["u*v", "u*w"])]))
    assert r.all_stable and r.condition_star == "satisfied_via_stability"
    assert sorted(map(str, r.chart_functions)) == ["u*v", "u*v*w", "u*w"]
    wall = construction_pipeline(P1P1, (1, 1))
    assert not wall.all_stable and wall.condition_star == "unknown"
    assert ["w"] in wall.failing_faces


def test_pipeline_symmetry():
    left = construction_pipeline(P1P1, (2, 1))
    right = construction_pipeline(P1P1, (1, 2))
    u, v, w = UVW.gens()
    swap = [v, u, w]
    assert right.weight == left.weight[::-1]
    assert right.chamber.equals(cone(*(g[::-1] for g in left.chamber.generators)))
    assert right.semistable.equals(left.semistable.preimage(swap, UVW))
    assert (right.all_stable, right.condition_star) == (left.all_stable, left.condition_star)
    binding = dict(zip(UVW.variables, swap))
    assert sorted(map(str, right.chart_functions)) == sorted(str(f.substitute(binding)) for f in left.chart_functions)
