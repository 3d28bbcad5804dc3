"""Torus GIT on an affine variety given by a grading matrix.

The combinatorics is the a-face calculus: a subset gamma of coordinates is an
a-face when the stratum {x_i != 0 exactly for i in gamma} meets V(I); the
cones spanned by the weights of a-faces are the orbit cones, and the GIT
chamber of a weight w is the intersection of the orbit cones containing it.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .cones import RationalCone
from .constructible import ConstructibleSet, Stratum
from .errors import ConeRankError, GradingError, InvariantViolation, WeightOutsideConeError
from .ideal import Ideal
from .poly import PolynomialRing, product

MAX_ARITY = 12
MAX_FAN_RANK = 3


class GradingData:
    """Coordinates, a homogeneous ideal, and one integer weight row per coordinate."""

    def __init__(self, ring: PolynomialRing, ideal: Ideal | None, weights: Sequence[Sequence[int]]):
        rows = [tuple(int(x) for x in r) for r in weights]
        if len(rows) != ring.arity:
            raise GradingError(f"grading has {len(rows)} rows for {ring.arity} variables")
        if not rows or len({len(r) for r in rows}) != 1:
            raise GradingError("grading rows must be nonempty and of one length")
        self.ring = ring
        self.ideal = ideal if ideal is not None else Ideal.zero(ring)
        self.weights = rows
        self.rank = len(rows[0])
        for g in self.ideal.generators:
            clash = g.is_homogeneous_for(rows)
            if clash is not None:
                raise GradingError(f"generator {g} is not homogeneous: term weights {clash[0]} and {clash[1]}")
        self._faces: dict = {}
        self._lock = threading.Lock()

    def weight_cone(self) -> RationalCone:
        return RationalCone(self.rank, self.weights)

    def cone_of(self, gamma: Sequence[int]) -> RationalCone:
        return RationalCone(self.rank, [self.weights[i] for i in gamma])

    def monomial(self, gamma: Sequence[int]):
        return product([self.ring.gens()[i] for i in gamma], self.ring)

    def stratum(self, gamma: Sequence[int]) -> Stratum:
        """{x in V(I) : x_i != 0 for i in gamma, x_j = 0 otherwise}."""
        out = [self.ring.var(v) for j, v in enumerate(self.ring.variables) if j not in gamma]
        return Stratum(self.ideal + out, Ideal(self.ring, [self.monomial(gamma)]))

    def face_names(self, gamma) -> list:
        return [self.ring.variables[i] for i in gamma]


def all_subsets(n: int):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def is_a_face(G: GradingData, gamma: Sequence[int]) -> bool:
    gamma = tuple(sorted(set(gamma)))
    if any(i < 0 or i >= G.ring.arity for i in gamma):
        raise ValueError(f"face {gamma} has indices outside 0..{G.ring.arity - 1}")
    hit = G._faces.get(gamma)
    if hit is None:
        s = G.stratum(gamma)
        hit = not s.vanishing.saturate(G.monomial(gamma)).is_trivial()
        with G._lock:
            G._faces[gamma] = hit
    return hit


def a_faces(G: GradingData) -> list:
    if G.ring.arity > MAX_ARITY:
        raise ConeRankError(f"a-face enumeration is capped at {MAX_ARITY} variables")
    return [g for g in all_subsets(G.ring.arity) if is_a_face(G, g)]


def orbit_cones(G: GradingData) -> list:
    out: list = []
    for gamma in a_faces(G):
        c = G.cone_of(gamma)
        if not any(c.equals(d) for d in out):
            out.append(c)
    return out


def _weight(G: GradingData, w) -> tuple:
    w = tuple(int(x) for x in w)
    if len(w) != G.rank:
        raise ValueError(f"weight {w} does not have length {G.rank}")
    return w


def git_chamber(G: GradingData, w) -> RationalCone:
    w = _weight(G, w)
    if not G.weight_cone().contains(w):
        raise WeightOutsideConeError(f"weight {w} lies outside the weight cone")
    result = G.weight_cone()
    for c in orbit_cones(G):
        if c.contains(w):
            result = result.intersect(c)
    return result


@dataclass
class Chamber:
    cone: RationalCone
    supports: list  # indices into GITFan.orbit_cones containing the chamber

    def to_json(self) -> dict:
        return {"dim": self.cone.dim(), **self.cone.to_json(), "orbit_cones": self.supports}


@dataclass
class GITFan:
    orbit_cones: list
    chambers: list = field(default_factory=list)

    def full_dimensional(self) -> list:
        return [c for c in self.chambers if c.cone.is_full_dimensional()]

    def to_json(self) -> dict:
        return {
            "orbit_cones": [c.to_json() for c in self.orbit_cones],
            "chambers": [c.to_json() for c in self.chambers],
        }


def _arrangement_rays(G: GradingData, cones: list) -> list:
    k = G.rank
    normals = []
    for c in cones + [G.weight_cone()]:
        facets, eqs = c.dual_description()
        for n in list(facets) + list(eqs):
            if n not in normals and tuple(-x for x in n) not in normals:
                normals.append(n)
    wc = G.weight_cone()
    rays = [g for g in wc.generators]
    for subset in itertools.combinations(normals, k - 1):
        sol = RationalCone.from_inequalities(k, [], subset).generators
        if len(sol) != 2:
            continue
        for r in sol:
            if wc.contains(r) and r not in rays:
                rays.append(r)
    return sorted(rays)


def enumerate_git_fan(G: GradingData) -> GITFan:
    """All GIT chambers, found by sampling every cell of the wall arrangement."""
    if G.rank > MAX_FAN_RANK:
        raise ConeRankError(f"fan enumeration is capped at rank {MAX_FAN_RANK}")
    cones = orbit_cones(G)
    rays = _arrangement_rays(G, cones)
    samples = [(0,) * G.rank]
    for size in range(1, min(len(rays), G.rank + 1) + 1):
        for subset in itertools.combinations(rays, size):
            samples.append(tuple(sum(r[i] for r in subset) for i in range(G.rank)))
    chambers: list = []
    for w in samples:
        if not G.weight_cone().contains(w):
            continue
        ch = git_chamber(G, w)
        if any(ch.equals(c.cone) for c in chambers):
            continue
        supports = [i for i, c in enumerate(cones) if c.contains_cone(ch)]
        chambers.append(Chamber(ch, supports))
    chambers.sort(key=lambda c: (c.cone.dim(), c.cone.canonical()))
    fan = GITFan(cones, chambers)
    _check_fan(G, fan)
    return fan


def _check_fan(G: GradingData, fan: GITFan):
    for a, b in itertools.combinations(fan.chambers, 2):
        meet = a.cone.intersect(b.cone)
        if not (meet.is_face_of(a.cone) and meet.is_face_of(b.cone)):
            raise InvariantViolation(f"chambers {a.cone} and {b.cone} do not meet in a common face")
    for c in fan.chambers:
        if not git_chamber(G, c.cone.interior_point()).equals(c.cone):
            raise InvariantViolation(f"chamber {c.cone} differs from the chamber of its interior point")


def qualifying_faces(G: GradingData, w) -> list:
    w = _weight(G, w)
    return [g for g in a_faces(G) if G.cone_of(g).contains(w)]


def semistable_locus(G: GradingData, w) -> ConstructibleSet:
    """Union of the a-face strata whose weight cone contains w."""
    return ConstructibleSet(G.ring, [G.stratum(g) for g in qualifying_faces(G, w)])


@dataclass
class StabilityReport:
    all_stable: bool
    failing_faces: list

    def to_json(self, G: GradingData | None = None) -> dict:
        faces = [G.face_names(f) for f in self.failing_faces] if G else [list(f) for f in self.failing_faces]
        return {"all_stable": self.all_stable, "failing_faces": faces}


def stable_check(G: GradingData, w) -> StabilityReport:
    w = _weight(G, w)
    failing = []
    for g in qualifying_faces(G, w):
        c = G.cone_of(g)
        if not (c.relint_contains(w) and c.dim() == G.rank):
            failing.append(g)
    return StabilityReport(not failing, failing)
