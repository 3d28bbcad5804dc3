"""Group actions presented infinitesimally by derivations."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Mapping, Sequence

from gmpy2 import mpq

from .errors import NilpotencyBoundExceeded, RingMismatchError
from .ideal import Ideal
from .poly import Polynomial, PolynomialRing

DEFAULT_NILPOTENCY_BOUND = 64


class Derivation:
    """A Q-linear derivation fixed by its values on the variables."""

    def __init__(self, ring: PolynomialRing, images: Mapping[str, object]):
        self.ring = ring
        table = {}
        for name, img in images.items():
            ring.index(name)
            if isinstance(img, str):
                img = ring.parse(img)
            elif not isinstance(img, Polynomial):
                img = ring.const(img)
            if img.ring != ring:
                raise RingMismatchError(f"image of {name} is not in {ring}")
            if img:
                table[name] = img
        self.images = table

    def image(self, name: str) -> Polynomial:
        return self.images.get(name, self.ring.zero())

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_derivation(self, f)

    def extend(self, ring: PolynomialRing) -> "Derivation":
        """Same derivation on a larger ring, zero on the new variables."""
        return Derivation(ring, {v: p.to_ring(ring) for v, p in self.images.items()})

    def to_json(self) -> dict:
        return {v: str(p) for v, p in self.images.items()}

    def __repr__(self):
        body = " + ".join(f"({p})*d/d{v}" for v, p in self.images.items()) or "0"
        return f"Derivation({body})"


def apply_derivation(D: Derivation, f: Polynomial) -> Polynomial:
    if f.ring != D.ring:
        raise RingMismatchError(f"{f.ring} vs {D.ring}")
    out = D.ring.zero()
    for v, img in D.images.items():
        df = f.diff(v)
        if df:
            out = out + img * df
    return out


def nilpotency_index(D: Derivation, f: Polynomial, bound: int = DEFAULT_NILPOTENCY_BOUND) -> int:
    """Least k with D^k(f) = 0."""
    cur = f
    for k in range(bound + 1):
        if cur.is_zero():
            return k
        cur = apply_derivation(D, cur)
    raise NilpotencyBoundExceeded(bound, cur)


def exp_action(D: Derivation, f: Polynomial, bound: int = DEFAULT_NILPOTENCY_BOUND, param: str = "lam"):
    """sum_k lam^k D^k(f) / k! in the ring extended by ``param``.

    Returns ``(polynomial, extended_ring)``.
    """
    ring = D.ring
    name = param if param not in ring else ring.fresh_name(param)
    big = ring.extend(name)
    lam = big.var(name)
    total = big.zero()
    cur = f
    for k in range(bound + 1):
        if cur.is_zero():
            return total, big
        total = total + cur.to_ring(big).scale(mpq(1, factorial(k))) * lam ** k
        cur = apply_derivation(D, cur)
    raise NilpotencyBoundExceeded(bound, cur)


@dataclass
class InvarianceFailure:
    invariant: str
    derivation: int
    derivative: Polynomial

    def to_json(self) -> dict:
        return {"invariant": self.invariant, "derivation": self.derivation, "derivative": str(self.derivative)}


@dataclass
class InvarianceReport:
    checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"checked": self.checked, "all_pass": self.ok, "failures": [f.to_json() for f in self.failures]}


@dataclass
class ActionSpec:
    """Derivations, named invariant generators, domain (ideal + charts) and optional grading."""

    ring: PolynomialRing
    derivations: list
    invariants: list  # (name, Polynomial) pairs, in order
    domain_ideal: Ideal = None
    charts: list = None
    grading: list | None = None

    def __post_init__(self):
        if self.domain_ideal is None:
            self.domain_ideal = Ideal.zero(self.ring)
        if not self.charts:
            self.charts = [self.ring.one()]
        for D in self.derivations:
            if D.ring != self.ring:
                raise RingMismatchError("derivation ring differs from the action ring")
        names = [n for n, _ in self.invariants]
        if len(set(names)) != len(names):
            raise ValueError("invariant names must be distinct")
        if self.grading is not None and len(self.grading) != len(self.invariants):
            raise ValueError("grading needs one weight row per invariant")

    @property
    def invariant_names(self) -> list:
        return [n for n, _ in self.invariants]

    @property
    def invariant_polys(self) -> list:
        return [p for _, p in self.invariants]


def verify_invariants(spec: ActionSpec) -> InvarianceReport:
    """Every derivation must kill every invariant modulo the domain ideal."""
    failures = []
    for name, f in spec.invariants:
        for k, D in enumerate(spec.derivations):
            d = spec.domain_ideal.normal_form(apply_derivation(D, f))
            if d:
                failures.append(InvarianceFailure(name, k, d))
    return InvarianceReport(len(spec.invariants) * len(spec.derivations), failures)


def flow_map(D: Derivation, bound: int = DEFAULT_NILPOTENCY_BOUND, param: str = "lam"):
    """exp(lam D) applied to each variable: the action as a polynomial map.

    Returns ``(images, extended_ring)`` with one image per ring variable.
    """
    images, big = [], None
    for v in D.ring.variables:
        img, big = exp_action(D, D.ring.var(v), bound, param)
        images.append(img)
    return images, big


__all__: Sequence[str] = [
    "ActionSpec",
    "Derivation",
    "InvarianceReport",
    "apply_derivation",
    "exp_action",
    "flow_map",
    "nilpotency_index",
    "verify_invariants",
]
