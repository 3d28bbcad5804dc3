"""Quotient existence verdicts with checkable certificates.

A constructible quotient exists when every component of codimension at most
one of the boundary closure(Y) minus Y avoids the image Y (the image then
has small complement in an open subset of Spec A).  A quotient in the
category of varieties exists exactly when Y is open in its closure.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

from . import sampling
from .actions import ActionSpec, exp_action, verify_invariants
from .constructible import ConstructibleSet, Stratum
from .errors import DecompositionIncomplete, ImageUnresolved, InvariantViolation, NotInvariantError
from .gitfan import GradingData, git_chamber, qualifying_faces, semistable_locus, stable_check
from .ideal import Ideal, decompose
from .image import PolynomialMap, constructible_image, fiber_dimension, image_closure
from .poly import PolynomialRing

log = logging.getLogger(__name__)


def invariant_map(spec: ActionSpec) -> PolynomialMap:
    target = PolynomialRing(spec.invariant_names)
    return PolynomialMap(spec.ring, target, spec.invariant_polys, spec.domain_ideal, spec.charts)


@dataclass
class BoundaryComponent:
    ideal: Ideal
    codimension: int
    meets_image: bool
    certified_prime: bool

    def to_json(self) -> dict:
        return {
            "ideal": [str(g) for g in self.ideal.generators],
            "codimension": self.codimension,
            "meets_image": self.meets_image,
            "certified_prime": self.certified_prime,
        }


@dataclass
class QuotientVerdict:
    """``None`` in either verdict field means the computation could not decide."""

    constructible_quotient_exists: bool | None
    variety_quotient_exists: bool | None = None
    image: ConstructibleSet | None = None
    image_closure: Ideal | None = None
    boundary_components: list = field(default_factory=list)
    open_kernel: ConstructibleSet | None = None
    maximal_locus_upstairs: ConstructibleSet | None = None
    certificate_rechecked: bool | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        def cs(S):
            return None if S is None else S.to_json()

        return {
            "constructible_quotient_exists": _tri(self.constructible_quotient_exists),
            "variety_quotient_exists": _tri(self.variety_quotient_exists),
            "image": cs(self.image),
            "image_closure": None if self.image_closure is None else [str(g) for g in self.image_closure.generators],
            "boundary_components": [c.to_json() for c in self.boundary_components],
            "open_kernel": cs(self.open_kernel),
            "maximal_locus_upstairs": cs(self.maximal_locus_upstairs),
            "certificate_rechecked": self.certificate_rechecked,
            "notes": list(self.notes),
        }


def _tri(v):
    return "unknown" if v is None else v


def _require_invariance(spec: ActionSpec):
    report = verify_invariants(spec)
    if not report.ok:
        raise NotInvariantError(report.failures)


def _boundary(Z: Ideal, Y: ConstructibleSet, removed: Sequence[Ideal] = ()):
    """Components of the closure of (V(Z) minus removed) minus Y."""
    ambient = ConstructibleSet.closed(Z)
    for C in removed:
        ambient = ambient.difference(ConstructibleSet.closed(C))
    missing = ambient.difference(Y)
    if missing.is_empty():
        return []
    comps, certified = decompose(missing.closure())
    dim_z = Z.dimension()
    out = []
    for C, ok in zip(comps, certified):
        meets = not Y.intersection(ConstructibleSet.closed(C)).is_empty()
        out.append(BoundaryComponent(C, dim_z - C.dimension(), meets, ok))
    return out


def certify_constructible_quotient(spec: ActionSpec) -> QuotientVerdict:
    _require_invariance(spec)
    phi = invariant_map(spec)
    try:
        Y = constructible_image(phi)
    except ImageUnresolved as exc:
        return QuotientVerdict(None, notes=[f"image unresolved: {exc}"])
    Z = image_closure(phi)
    v = QuotientVerdict(None, image=Y, image_closure=Z)
    try:
        v.boundary_components = _boundary(Z, Y)
    except DecompositionIncomplete as exc:
        v.notes.append(f"boundary decomposition incomplete: {exc}; residual {exc.residual}")
        return v
    small = [c for c in v.boundary_components if c.codimension <= 1]
    if not any(c.meets_image for c in small):
        v.constructible_quotient_exists = True
        # re-check: removing the divisorial pieces leaves only a small boundary
        try:
            rest = _boundary(Z, Y, [c.ideal for c in small])
            v.certificate_rechecked = all(c.codimension >= 2 for c in rest)
        except DecompositionIncomplete:
            v.certificate_rechecked = None
        if v.certificate_rechecked is False:
            raise InvariantViolation("removing the divisorial boundary left a divisorial boundary")
    elif all(c.certified_prime for c in small if c.meets_image):
        v.constructible_quotient_exists = False
    else:
        v.notes.append("a divisorial boundary component meeting the image is not proved irreducible")
    return v


def certify_variety_quotient(spec: ActionSpec) -> QuotientVerdict:
    v = certify_constructible_quotient(spec)
    if v.image is None:
        return v
    phi = invariant_map(spec)
    kernel = v.image.open_kernel()
    v.open_kernel = kernel
    v.variety_quotient_exists = kernel.equals(v.image)
    v.maximal_locus_upstairs = kernel.preimage(phi.components, spec.ring).intersection(phi.domain())
    if v.variety_quotient_exists and v.constructible_quotient_exists is False:
        raise InvariantViolation("variety quotient found without a constructible quotient")
    return v


def locus_is_invariant(locus: ConstructibleSet, derivations: Sequence) -> bool:
    """Pull the locus back along each flow exp(lam D) and compare in the ring extended by lam."""
    ring = locus.ring
    for D in derivations:
        images, big = [], None
        for var in ring.variables:
            img, big = exp_action(D, ring.var(var))
            images.append(img)
        lifted = ConstructibleSet(big, [Stratum(s.vanishing.to_ring(big), s.nonvanishing.to_ring(big)) for s in locus.strata])
        if not locus.preimage(images, big).equals(lifted):
            return False
    return True


# ---------------------------------------------------------------- the quadric example


@dataclass
class QuadricReport:
    witness: list
    same_image: bool
    distinct_ratios: bool
    fiber_dimension_at_origin: int
    surjectivity_samples: int
    surjective_on_samples: bool

    @property
    def ok(self) -> bool:
        return (
            self.same_image
            and self.distinct_ratios
            and self.fiber_dimension_at_origin == 2
            and self.surjective_on_samples
        )

    def to_json(self) -> dict:
        return {
            "witness": [[str(c) for c in p] for p in self.witness],
            "same_image": self.same_image,
            "distinct_ratios": self.distinct_ratios,
            "fiber_dimension_at_origin": self.fiber_dimension_at_origin,
            "surjectivity_samples": self.surjectivity_samples,
            "surjective_on_samples": self.surjective_on_samples,
            "ok": self.ok,
        }


def quadric_counterexample_check(spec: ActionSpec, samples: int = 25, seed: int = 0) -> QuadricReport:
    """The ratio map [x1:x2] = [x3:x4] is invariant but does not factor through the invariants."""
    if spec.ring.arity != 4:
        raise ValueError("the quadric check expects coordinates x1..x4")
    phi = invariant_map(spec)
    p, q = [0, 0, 1, 0], [0, 0, 0, 1]
    for pt in (p, q):
        if not phi.domain().contains_point(pt):
            raise ValueError(f"witness {pt} is not in the domain")
    same = phi(p) == phi(q)
    # the ratio is [x1:x2] where defined, else [x3:x4]; both witnesses use [x3:x4]
    distinct = p[2] * q[3] - p[3] * q[2] != 0
    origin = [0] * phi.target_ring.arity
    fdim = fiber_dimension(phi, origin)
    rng = random.Random(seed)
    surj = all(fiber_dimension(phi, [sampling.random_value(rng) for _ in range(phi.target_ring.arity)]) >= 0 for _ in range(samples))
    return QuadricReport([p, q], same, distinct, fdim, samples, surj)


# ---------------------------------------------------------------- GIT pipeline


@dataclass
class PipelineReport:
    weight: tuple
    chamber: object
    semistable: ConstructibleSet
    all_stable: bool
    failing_faces: list
    chart_functions: list

    @property
    def condition_star(self) -> str:
        return "satisfied_via_stability" if self.all_stable else "unknown"

    def to_json(self) -> dict:
        return {
            "weight": list(self.weight),
            "chamber": self.chamber.to_json(),
            "semistable": self.semistable.to_json(),
            "all_stable": self.all_stable,
            "failing_faces": self.failing_faces,
            "condition_star": self.condition_star,
            "chart_functions": [str(f) for f in self.chart_functions],
        }


def construction_pipeline(G: GradingData, w) -> PipelineReport:
    w = tuple(int(x) for x in w)
    chamber = git_chamber(G, w)
    ss = semistable_locus(G, w)
    st = stable_check(G, w)
    charts = [G.monomial(g) for g in qualifying_faces(G, w) if g]
    return PipelineReport(w, chamber, ss, st.all_stable, [G.face_names(f) for f in st.failing_faces], charts)
