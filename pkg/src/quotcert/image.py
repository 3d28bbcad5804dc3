"""Images of polynomial maps restricted to chart-covered subsets of V(I).

The exact image is built by repeated block elimination.  For a graph ideal
J in Q[x, y] with reduced basis G under an order eliminating x, every point
p of V(J meet Q[y]) at which all x-leading coefficients of G∖Q[y] are nonzero
has a nonempty fibre (the specialised basis stays a Groebner basis whose
leading monomials are all nonconstant).  The image is that open piece plus
the image of the map restricted over the vanishing locus of the
coefficients, which is handled recursively.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

from .constructible import ConstructibleSet, Stratum
from .errors import ImageUnresolved, InvariantViolation
from .factor import irreducible_factors
from .ideal import Ideal
from .poly import MonomialOrder, Polynomial, PolynomialRing, product
from . import sampling

log = logging.getLogger(__name__)

MAX_PROJECTION_STEPS = 400


@dataclass
class PolynomialMap:
    """phi = (f_1..f_m) on the union over charts h of V(domain_ideal) minus V(h)."""

    source_ring: PolynomialRing
    target_ring: PolynomialRing
    components: Sequence[Polynomial]
    domain_ideal: Ideal = None
    charts: Sequence[Polynomial] = None

    def __post_init__(self):
        self.components = [self._lift(c) for c in self.components]
        if len(self.components) != self.target_ring.arity:
            raise ValueError("need one component per target variable")
        if self.domain_ideal is None:
            self.domain_ideal = Ideal.zero(self.source_ring)
        self.charts = [self._lift(h) for h in (self.charts or [self.source_ring.one()])]
        if not self.charts:
            raise ValueError("chart list must be nonempty")
        clash = set(self.source_ring.variables) & set(self.target_ring.variables)
        if clash:
            raise ValueError(f"source and target share variable names {sorted(clash)}")

    def _lift(self, p):
        if isinstance(p, str):
            return self.source_ring.parse(p)
        return p

    def __call__(self, point) -> list:
        return [f.evaluate(point) for f in self.components]

    def graph_ring(self, extra: Sequence[str] = ()) -> PolynomialRing:
        return PolynomialRing(tuple(extra) + self.source_ring.variables + self.target_ring.variables)

    def graph_ideal(self, chart: Polynomial | None = None):
        """Graph ideal in Q[t?, x, y]; ``t`` inverts the chart polynomial when given."""
        extra = []
        if chart is not None and not chart.is_constant():
            extra = [self.source_ring.fresh_name("aux_t")]
            while extra[0] in self.target_ring:
                extra = [extra[0] + "_"]
        big = self.graph_ring(extra)
        gens = [g.to_ring(big) for g in self.domain_ideal.generators]
        gens += [big.var(y) - f.to_ring(big) for y, f in zip(self.target_ring.variables, self.components)]
        if extra:
            gens.append(big.var(extra[0]) * chart.to_ring(big) - 1)
        return Ideal(big, gens), len(extra) + self.source_ring.arity

    def domain(self) -> ConstructibleSet:
        return ConstructibleSet(
            self.source_ring, [Stratum(self.domain_ideal, Ideal(self.source_ring, [h])) for h in self.charts]
        )

    def restrict_to_charts(self, charts) -> "PolynomialMap":
        return PolynomialMap(self.source_ring, self.target_ring, self.components, self.domain_ideal, list(charts))


def image_closure(phi: PolynomialMap) -> Ideal:
    """Ideal of the Zariski closure of phi(domain), intersected over charts."""
    result = Ideal.unit(phi.target_ring)
    for h in phi.charts:
        graph, _ = phi.graph_ideal()
        if not h.is_constant():
            graph = graph.saturate(h.to_ring(graph.ring))
        result = result.intersect(graph.eliminate(phi.target_ring.variables))
    return result


def _x_leading_coefficient(g: Polynomial, k: int, order: MonomialOrder, target: PolynomialRing) -> Polynomial:
    lm = g.leading_monomial(order)
    head = lm[:k]
    terms = {m[k:]: c for m, c in g.terms.items() if m[:k] == head}
    return Polynomial(target, terms)


def project(ideal: Ideal, k: int, target: PolynomialRing, max_steps: int = MAX_PROJECTION_STEPS) -> ConstructibleSet:
    """Exact projection of V(ideal) onto the trailing variables (the first k are dropped)."""
    order = MonomialOrder.elimination(k)
    big = ideal.ring
    strata: list = []
    work = [ideal]
    steps = 0
    while work:
        steps += 1
        if steps > max_steps:
            raise ImageUnresolved(
                f"projection did not finish within {max_steps} steps",
                partial=ConstructibleSet(target, strata),
                residual=work,
            )
        J = work.pop()
        log.debug("project step %d: %s", steps, J)
        G = J.groebner_basis(order)
        J = Ideal(big, G)
        below = [g for g in G if all(not any(m[:k]) for m in g.terms)]
        Jy = Ideal(target, [Polynomial(target, {m[k:]: c for m, c in g.terms.items()}) for g in below])
        if Jy.is_trivial():
            continue
        coeffs = []
        for g in G:
            if g in below:
                continue
            c = _x_leading_coefficient(g, k, order, target)
            if not c.is_constant():
                coeffs.append(c.monic())
        coeffs = list(dict.fromkeys(coeffs))
        if not coeffs:
            strata.append(Stratum.closed(Jy))
            continue
        factors = []
        for c in coeffs:
            for f in irreducible_factors(c):
                if f not in factors:
                    factors.append(f)
        vanishing = [f for f in factors if Jy.radical_contains(f)]
        if vanishing:
            # same variety, strictly larger ideal
            work.append(J + [f.to_ring(big) for f in vanishing])
            continue
        h = product(factors, target)
        if Jy.radical_contains(h):
            # V(J) is reducible along the coefficient hypersurfaces: split it
            work.extend(_split(J, [f.to_ring(big) for f in factors]))
            continue
        strata.append(Stratum(Jy, Ideal(target, [h])))
        work.append(J + h.to_ring(big))
    return ConstructibleSet(target, strata).reduced()


def _split(J: Ideal, factors: list) -> list:
    """Write V(J) as V(J + f) union V(J : f^inf) with both pieces proper."""
    for f in factors:
        sat = J.saturate(f)
        if not all(J.radical_contains(g) for g in sat.generators):
            return [J + f, sat]
    raise InvariantViolation("no coefficient factor splits the residual variety")


def constructible_image(phi: PolynomialMap, max_steps: int = MAX_PROJECTION_STEPS) -> ConstructibleSet:
    """Exact image phi(domain) over the algebraic closure, as a union over charts."""
    result = ConstructibleSet.empty(phi.target_ring)
    for h in phi.charts:
        graph, k = phi.graph_ideal(h)
        part = project(graph, k, phi.target_ring, max_steps)
        result = result.union(part)
    return result.reduced()


def fiber_ideals(phi: PolynomialMap, point) -> list:
    pt = list(point)
    if len(pt) != phi.target_ring.arity:
        raise ValueError("point length must equal the target arity")
    base = phi.domain_ideal + [f - c for f, c in zip(phi.components, pt)]
    return [base if h.is_constant() else base.saturate(h) for h in phi.charts]


def fiber_dimension(phi: PolynomialMap, point) -> int:
    """Dimension of the fibre over ``point`` (max over charts); -1 if empty."""
    return max(I.dimension() for I in fiber_ideals(phi, point))


@dataclass
class ImageCheck:
    passed: bool
    closure_ok: bool
    witnesses: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "closure_ok": self.closure_ok,
            "witnesses": self.witnesses,
            "warnings": self.warnings,
        }


def verify_image_candidate(phi: PolynomialMap, S: ConstructibleSet, samples: int = 50, seed: int = 0) -> ImageCheck:
    """Cross-check a claimed image by closure containment and random sampling."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = random.Random(seed)
    Z = image_closure(phi)
    closure_ok = S.is_subset(ConstructibleSet.closed(Z))
    witnesses, warnings = [], []
    dom = phi.domain()
    for _ in range(samples):
        p = sampling.sample_set(dom, rng)
        if p is None:
            warnings.append("no rational point found on the domain")
            break
        q = phi(p)
        if not S.contains_point(q):
            witnesses.append({"kind": "domain_point_outside", "source": [str(c) for c in p], "image": [str(c) for c in q]})
            break
    for _ in range(samples):
        q = sampling.sample_set(S, rng)
        if q is None:
            warnings.append("sampling exhausted: no rational point found on the candidate")
            break
        if fiber_dimension(phi, q) < 0:
            witnesses.append({"kind": "empty_fiber", "point": [str(c) for c in q]})
            break
    return ImageCheck(closure_ok and not witnesses, closure_ok, witnesses, warnings)
