import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from quotcert.cones import MAX_RANK, RationalCone, cone, primitive
from quotcert.errors import ConeRankError

Q = cone((1, 0), (0, 1))


def test_dual_examples():
    assert Q.dual_description() == (((0, 1), (1, 0)), ())
    assert set(cone((1, 0), (1, 1)).facets) == {(0, 1), (1, -1)}
    facets, eqs = cone((1, 1)).dual_description()
    assert facets == ((1, 1),) and eqs == ((-1, 1),)


def test_predicates_examples():
    wall = cone((1, 0), (1, 1)).intersect(cone((0, 1), (1, 1)))
    assert wall == cone((1, 1))
    assert Q.relint_contains((2, 1))
    assert not cone((1, 0), (1, 1)).relint_contains((1, 0))
    assert cone((1, 0), (1, 1)).dim() == 2
    assert RationalCone.zero(2).dim() == 0


def test_normalisation_and_json():
    C = cone((2, 4), (1, 2), (0, 3))
    assert C.generators == ((0, 1), (1, 2))
    assert cone((1, 0), (1, 1), (2, 1)).to_json() == {"generators": [[1, 0], [1, 1]]}
    assert primitive((0, -6, 4)) == (0, -3, 2)


def test_non_pointed():
    half = cone((1, 0), (-1, 0), (0, 1))
    assert half.facets == ((0, 1),)
    assert half.contains((-7, 2)) and not half.contains((0, -1))
    line = cone((1, 1), (-1, -1))
    assert line.dim() == 1 and line.facets == ()
    plane = cone((1, 0), (-1, 0), (0, 1), (0, -1))
    assert plane.contains((3, -4)) and plane.relint_contains((0, 0))


def test_faces():
    C = cone((1, 0), (1, 1))
    assert cone((1, 0)).is_face_of(C)
    assert RationalCone.zero(2).is_face_of(C)
    assert not cone((2, 1)).is_face_of(C)
    assert C.face_containing((1, 0)) == cone((1, 0))


def test_errors():
    with pytest.raises(ConeRankError):
        RationalCone(MAX_RANK + 1, [])
    with pytest.raises(ValueError):
        Q.contains((1, 2, 3))
    with pytest.raises(ValueError):
        RationalCone(2, [(1, 2, 3)])


def oracle_contains(gens, w):
    """Caratheodory: w is in the cone iff it is a nonnegative combination of independent generators."""
    if not any(w):
        return True
    k = len(w)
    for size in range(1, k + 1):
        for sub in itertools.combinations(gens, size):
            M = sympy.Matrix(sub).T
            if M.rank() < size:
                continue
            aug = M.row_join(sympy.Matrix(w))
            if aug.rank() != size:
                continue
            sol = (M.T * M).LUsolve(M.T * sympy.Matrix(w))
            if all(x >= 0 for x in sol):
                return True
    return False


vec = lambda k: st.lists(st.integers(-5, 5), min_size=k, max_size=k).map(tuple)
cones = st.integers(1, 3).flatmap(
    lambda k: st.lists(vec(k), max_size=4).map(lambda gs: RationalCone(k, gs))
)
pairs = st.integers(1, 3).flatmap(
    lambda k: st.tuples(*(st.lists(vec(k), max_size=4).map(lambda gs, k=k: RationalCone(k, gs)) for _ in range(2)))
)


@given(cones)
def test_round_trip(C):
    facets, eqs = C.dual_description()
    assert RationalCone.from_inequalities(C.rank, facets, eqs).equals(C)


@given(cones, st.data())
def test_contains_matches_oracle(C, data):
    for g in C.generators:
        assert C.contains(g)
    w = data.draw(vec(C.rank))
    assert C.contains(w) == oracle_contains(C.generators, w)


@given(cones)
def test_interior_point(C):
    p = C.interior_point()
    assert C.relint_contains(p)


@given(pairs)
def test_intersection_laws(pair):
    A, B = pair
    assert A.intersect(B).equals(B.intersect(A))
    assert A.intersect(A).equals(A)
    M = A.intersect(B)
    assert A.contains_cone(M) and B.contains_cone(M)
