"""Random rational points on strata, for cross-checks that avoid the image algorithm."""

from __future__ import annotations

import random

from gmpy2 import mpq

from .factor import rational_roots
from .ideal import Ideal
from .poly import LEX

_POOL = [0, 0, 0, 1, -1, 2, -2, 3, 4, mpq(1, 2), mpq(-1, 3)]


def random_value(rng: random.Random):
    if rng.random() < 0.6:
        return mpq(rng.choice(_POOL))
    return mpq(rng.randint(-12, 12))


def _solve(polys, ring, assigned: dict, rng, depth=0):
    polys = [p for p in polys if p]
    if any(p.is_constant() for p in polys):
        return None
    free = [v for v in ring.variables if v not in assigned]
    if not polys:
        for v in free:
            assigned[v] = random_value(rng)
        return assigned
    I = Ideal(ring, polys)
    if I.is_trivial():
        return None
    for g in reversed(I.groebner_basis(LEX)):
        sup = g.support()
        if len(sup) == 1:
            (v,) = sup
            roots = rational_roots(g, v)
            if not roots:
                return None
            r = rng.choice(roots)
            return _solve([p.partial_evaluate({v: r}) for p in I.groebner_basis(LEX)], ring, {**assigned, v: r}, rng, depth + 1)
    candidates = [v for v in I.independent_set() if v not in assigned] or free
    v = rng.choice(candidates)
    r = random_value(rng)
    return _solve([p.partial_evaluate({v: r}) for p in polys], ring, {**assigned, v: r}, rng, depth + 1)


def sample_stratum(stratum, rng: random.Random, attempts: int = 40):
    """A rational point of V(I) minus V(J), or None when the search gives up."""
    ring = stratum.ring
    if stratum.vanishing.is_trivial():
        return None
    for _ in range(attempts):
        sol = _solve(list(stratum.vanishing.generators), ring, {}, rng)
        if sol is None:
            continue
        point = [sol[v] for v in ring.variables]
        if stratum.contains_point(point):
            return point
    return None


def sample_set(S, rng: random.Random, attempts: int = 40):
    strata = list(S.strata)
    rng.shuffle(strata)
    for s in strata:
        p = sample_stratum(s, rng, attempts)
        if p is not None:
            return p
    return None
