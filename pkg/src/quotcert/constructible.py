"""Constructible subsets of affine space as finite unions of V(I) minus V(J).

There is no canonical form: equality and inclusion are decided
extensionally through emptiness of differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .factor import irreducible_factors
from .ideal import Ideal
from .poly import Polynomial, PolynomialRing, product

MAX_SPLIT = 64


@dataclass(frozen=True, eq=False)
class Stratum:
    """The locally closed set V(vanishing) minus V(nonvanishing)."""

    vanishing: Ideal
    nonvanishing: Ideal

    @property
    def ring(self) -> PolynomialRing:
        return self.vanishing.ring

    @classmethod
    def closed(cls, ideal: Ideal) -> "Stratum":
        return cls(ideal, Ideal.unit(ideal.ring))

    @classmethod
    def make(cls, ring, vanishing: Iterable = (), nonvanishing: Iterable = ("1",)) -> "Stratum":
        return cls(Ideal(ring, vanishing), Ideal(ring, nonvanishing))

    def is_closed(self) -> bool:
        return any(g.is_constant() for g in self.nonvanishing.generators)

    def is_empty(self) -> bool:
        I = self.vanishing
        if I.is_trivial():
            return True
        return all(I.radical_contains(g) for g in self.nonvanishing.generators)

    def simplified(self) -> "Stratum | None":
        """Drop nonvanishing generators that vanish on V(I); None if empty."""
        I = self.vanishing
        if I.is_trivial():
            return None
        if self.is_closed():
            return Stratum.closed(Ideal(I.ring, I.groebner_basis()))
        live = [g for g in self.nonvanishing.generators if not I.radical_contains(g)]
        if not live:
            return None
        live = [I.normal_form(g).monic() for g in live]
        return Stratum(Ideal(I.ring, I.groebner_basis()), Ideal(I.ring, live))

    def split(self) -> list:
        """Same point set as a list of simpler strata.

        Reducible vanishing generators are split into one branch per factor,
        and each nonvanishing generator keeps only the factors that can vanish
        on the branch.  Products pile up quickly under repeated complements,
        and this keeps the degrees of the ideals handed to the engine small.
        """
        todo, done = [self.vanishing], []
        while todo:
            I = todo.pop()
            if I.is_trivial():
                continue
            if len(todo) + len(done) >= MAX_SPLIT:
                done.append(I)
                continue
            for g in I.groebner_basis():
                facs = irreducible_factors(g)
                if len(facs) > 1:
                    todo.extend(I + f for f in reversed(facs))
                    break
                if len(facs) == 1 and facs[0] != g.monic():
                    todo.append(I + facs[0])  # a power: same variety
                    break
            else:
                done.append(I)
        if self.is_closed():
            return [Stratum.closed(I) for I in done]
        out = []
        for I in done:
            live = []
            for g in self.nonvanishing.generators:
                facs = [f for f in irreducible_factors(g) if not (I + f).is_trivial()]
                if not facs:
                    live = None  # g is a unit on V(I)
                    break
                live.append(product(facs, I.ring))
            out.append(Stratum.closed(I) if live is None else Stratum(I, Ideal(I.ring, live)))
        return out

    def closure(self) -> Ideal:
        """Ideal of the Zariski closure: intersection of (I : g^inf) over generators g of J."""
        I = self.vanishing
        if self.is_closed():
            return I
        result = Ideal.unit(I.ring)
        for g in self.nonvanishing.generators:
            result = result.intersect(I.saturate(g))
        return result

    def contains_point(self, point) -> bool:
        if any(g.evaluate(point) != 0 for g in self.vanishing.generators):
            return False
        return any(g.evaluate(point) != 0 for g in self.nonvanishing.generators)

    def key(self) -> tuple:
        """Syntactic fingerprint; equal keys mean equal sets (not conversely)."""
        I = self.vanishing
        gb = tuple(sorted(str(g) for g in I.groebner_basis()))
        if self.is_closed():
            return gb, ("1",)
        nv = sorted(str(I.normal_form(g).monic()) for g in self.nonvanishing.generators)
        return gb, tuple(nv)

    def covered_by(self, other: "Stratum") -> bool:
        """Sufficient test for self being a subset of other."""
        if not other.vanishing.radical_subset(self.vanishing):
            return False
        if other.is_closed():
            return True
        if self.is_closed():
            base = self.vanishing + other.nonvanishing
            return base.is_trivial()
        base = self.vanishing + other.nonvanishing
        return all(base.radical_contains(g) for g in self.nonvanishing.generators)

    def intersection(self, other: "Stratum") -> "Stratum":
        return Stratum(self.vanishing + other.vanishing, self.nonvanishing * other.nonvanishing)

    def to_json(self) -> dict:
        return {
            "vanishing": [str(g) for g in self.vanishing.generators],
            "nonvanishing": [str(g) for g in self.nonvanishing.generators],
        }

    def __str__(self):
        if self.is_closed():
            return f"V{self.vanishing}"
        return f"V{self.vanishing} \\ V{self.nonvanishing}"


class ConstructibleSet:
    """Finite union of strata sharing one ring; empty list is the empty set."""

    def __init__(self, ring: PolynomialRing, strata: Iterable[Stratum] = ()):
        self.ring = ring
        self.strata = tuple(strata)
        for s in self.strata:
            if s.ring != ring:
                raise ValueError("stratum ring differs from the set's ring")

    # -- constructors

    @classmethod
    def empty(cls, ring):
        return cls(ring, [])

    @classmethod
    def whole(cls, ring):
        return cls(ring, [Stratum.closed(Ideal.zero(ring))])

    @classmethod
    def closed(cls, ideal: Ideal):
        return cls(ideal.ring, [Stratum.closed(ideal)])

    @classmethod
    def principal_open(cls, ring, polys: Sequence, ambient: Ideal | None = None):
        """V(ambient) minus V(polys)."""
        amb = ambient if ambient is not None else Ideal.zero(ring)
        return cls(ring, [Stratum(amb, Ideal(ring, polys))])

    @classmethod
    def from_json(cls, ring, records: list):
        return cls(ring, [Stratum.make(ring, r.get("vanishing", []), r.get("nonvanishing", ["1"])) for r in records])

    # -- basic queries

    def pruned(self) -> "ConstructibleSet":
        out = []
        for s in self.strata:
            t = s.simplified()
            if t is not None:
                out.append(t)
        return ConstructibleSet(self.ring, out)

    def reduced(self) -> "ConstructibleSet":
        """Drop empty, duplicate and visibly redundant strata."""
        live, seen = [], set()
        for s in (piece for s in self.strata for piece in s.split()):
            t = s.simplified()
            if t is None:
                continue
            k = t.key()
            if k not in seen:
                seen.add(k)
                live.append(t)
        kept: list = []
        for s in live:
            if any(s.covered_by(t) for t in kept):
                continue
            kept = [t for t in kept if not t.covered_by(s)]
            kept.append(s)
        return ConstructibleSet(self.ring, kept)

    def is_empty(self) -> bool:
        return all(s.is_empty() for s in self.strata)

    def contains_point(self, point) -> bool:
        return any(s.contains_point(point) for s in self.strata)

    def closure(self) -> Ideal:
        result = Ideal.unit(self.ring)
        for s in self.strata:
            if not s.is_empty():
                result = result.intersect(s.closure())
        return result

    def dimension(self) -> int:
        return self.closure().dimension()

    def codimension_in(self, ambient: Ideal) -> int:
        return ambient.dimension() - self.dimension()

    # -- boolean operations

    def _check(self, other):
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def union(self, other: "ConstructibleSet") -> "ConstructibleSet":
        self._check(other)
        return ConstructibleSet(self.ring, self.strata + other.strata)

    def intersection(self, other: "ConstructibleSet") -> "ConstructibleSet":
        self._check(other)
        out = [a.intersection(b) for a in self.strata for b in other.strata]
        return ConstructibleSet(self.ring, out).pruned()

    def complement_in(self, ambient: Ideal | None = None) -> "ConstructibleSet":
        """V(ambient) minus this set."""
        amb = ambient if ambient is not None else Ideal.zero(self.ring)
        result = ConstructibleSet.closed(amb).pruned()
        for s in self.strata:
            if result.is_empty():
                break
            pieces = []
            for t in result.strata:
                pieces.extend(_stratum_complement(s, t.vanishing, t.nonvanishing))
            result = ConstructibleSet(self.ring, pieces).reduced()
        return result

    def difference(self, other: "ConstructibleSet") -> "ConstructibleSet":
        self._check(other)
        pieces = []
        for s in self.strata:
            rest = other.complement_in(s.vanishing)
            for t in rest.strata:
                pieces.append(Stratum(t.vanishing, t.nonvanishing * s.nonvanishing))
        return ConstructibleSet(self.ring, pieces).pruned()

    def is_subset(self, other: "ConstructibleSet") -> bool:
        return self.difference(other).is_empty()

    def equals(self, other: "ConstructibleSet") -> bool:
        return self.is_subset(other) and other.is_subset(self)

    def open_kernel(self) -> "ConstructibleSet":
        """Largest subset open in the closure: closure minus the closure of what is missing."""
        Z = self.closure()
        if Z.is_trivial():
            return ConstructibleSet.empty(self.ring)
        missing = self.complement_in(Z)
        if missing.is_empty():
            return ConstructibleSet.closed(Z)
        return ConstructibleSet(self.ring, [Stratum(Z, missing.closure())]).pruned()

    def is_open_in_closure(self) -> bool:
        return self.open_kernel().equals(self)

    def preimage(self, components: Sequence[Polynomial], source: PolynomialRing) -> "ConstructibleSet":
        if len(components) != self.ring.arity:
            raise ValueError("map has wrong number of components for the target ring")
        binding = dict(zip(self.ring.variables, components))

        def pull(I: Ideal) -> Ideal:
            return Ideal(source, [g.substitute(binding) for g in I.generators])

        return ConstructibleSet(source, [Stratum(pull(s.vanishing), pull(s.nonvanishing)) for s in self.strata]).pruned()

    def to_json(self) -> list:
        return [s.to_json() for s in self.strata]

    def __str__(self):
        if not self.strata:
            return "{}"
        return " U ".join(f"[{s}]" for s in self.strata)

    def __repr__(self):
        return f"ConstructibleSet({self} in {self.ring!r})"


def _stratum_complement(s: Stratum, A: Ideal, N: Ideal) -> list:
    """(V(A) minus V(N)) minus s, as a list of strata."""
    out = [Stratum(A, N * Ideal(A.ring, [f])) for f in s.vanishing.generators]
    if not s.is_closed():
        out.append(Stratum(A + s.nonvanishing, N))
    return out


# free-function aliases mirroring the operation names


def is_empty(S: ConstructibleSet) -> bool:
    return S.is_empty()


def closure(S: ConstructibleSet) -> Ideal:
    return S.closure()


def union(S, T):
    return S.union(T)


def intersection(S, T):
    return S.intersection(T)


def complement_in(S, ambient):
    return S.complement_in(ambient)


def difference(S, T):
    return S.difference(T)


def is_subset(S, T):
    return S.is_subset(T)


def equals(S, T):
    return S.equals(T)


def dimension_of(S):
    return S.dimension()


def codimension_in(S, ambient):
    return S.codimension_in(ambient)


def open_kernel(S):
    return S.open_kernel()


def preimage(S, components, source):
    return S.preimage(components, source)
