"""Ideals of Q[x_1..x_n] and the Groebner-based primitives built on them."""

from __future__ import annotations

import itertools
import threading
from collections import OrderedDict
from typing import Iterable, Sequence

from .errors import DecompositionIncomplete, RingMismatchError
from .factor import irreducible_factors
from .groebner import groebner, is_groebner, normal_form as _nf
from .poly import GREVLEX, LEX, MonomialOrder, Polynomial, PolynomialRing


_SHARED_LIMIT = 8192
_shared: OrderedDict = OrderedDict()
_shared_lock = threading.Lock()


def _shared_basis(ring, generators, order):
    """Process-wide memo of reduced bases keyed by generator set, so rebuilt ideals reuse work."""
    key = (ring.variables, order, frozenset(generators))
    with _shared_lock:
        hit = _shared.get(key)
        if hit is not None:
            _shared.move_to_end(key)
            return hit
    raw = groebner([dict(g.terms) for g in generators], order)
    basis = tuple(Polynomial(ring, f) for f in raw)
    with _shared_lock:
        _shared[key] = basis
        if len(_shared) > _SHARED_LIMIT:
            _shared.popitem(last=False)
    return basis


def clear_basis_cache():
    with _shared_lock:
        _shared.clear()


def _fresh(ring: PolynomialRing, base: str = "t") -> str:
    return ring.fresh_name("aux_" + base)


class Ideal:
    """A finitely generated ideal with a per-order cache of reduced bases.

    Equality (``==``) is ideal equality, decided by comparing reduced
    grevlex bases.
    """

    def __init__(self, ring: PolynomialRing, generators: Iterable = ()):
        self.ring = ring
        gens, seen = [], set()
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Polynomial):
                g = ring.const(g)
            if g.ring != ring:
                raise RingMismatchError(f"generator {g} is not in {ring}")
            if g and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = tuple(gens)
        self._cache: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring):
        return cls(ring, [ring.one()])

    @classmethod
    def zero(cls, ring):
        return cls(ring, [])

    # -- Groebner bases

    def groebner_basis(self, order: MonomialOrder = GREVLEX) -> list:
        basis = self._cache.get(order)
        if basis is None:
            with self._lock:
                basis = self._cache.get(order)
                if basis is None:
                    basis = _shared_basis(self.ring, self.generators, order)
                    self._cache[order] = basis
        return list(basis)

    def check_groebner(self, order: MonomialOrder = GREVLEX) -> bool:
        return is_groebner([dict(g.terms) for g in self.groebner_basis(order)], order)

    def normal_form(self, f: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        f = self._poly(f)
        basis = [dict(g.terms) for g in self.groebner_basis(order)]
        return Polynomial(self.ring, _nf(dict(f.terms), basis, order))

    def contains(self, f) -> bool:
        return self.normal_form(f).is_zero()

    def __contains__(self, f):
        return self.contains(f)

    def is_trivial(self) -> bool:
        """True iff this is the unit ideal (V(I) is empty)."""
        basis = self.groebner_basis()
        return len(basis) == 1 and basis[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    # -- algebra

    def _poly(self, f) -> Polynomial:
        if isinstance(f, str):
            return self.ring.parse(f)
        if not isinstance(f, Polynomial):
            return self.ring.const(f)
        if f.ring != self.ring:
            raise RingMismatchError(f"{f} is not in {self.ring}")
        return f

    def _gens_of(self, other) -> list:
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return list(other.generators)
        if isinstance(other, (Polynomial, str)):
            return [self._poly(other)]
        return [self._poly(g) for g in other]

    def __add__(self, other) -> "Ideal":
        return Ideal(self.ring, list(self.generators) + self._gens_of(other))

    def __mul__(self, other) -> "Ideal":
        return Ideal(self.ring, [f * g for f in self.generators for g in self._gens_of(other)])

    def is_subset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner_basis() == other.groebner_basis()

    def __hash__(self):
        return hash((self.ring, tuple(self.groebner_basis())))

    def to_ring(self, ring: PolynomialRing) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.generators])

    # -- elimination family

    def eliminate(self, keep: Sequence[str]) -> "Ideal":
        """I intersected with Q[keep]; the result lives in the subring on ``keep``."""
        keep_set = set(keep)
        for v in keep_set:
            self.ring.index(v)
        kept = [v for v in self.ring.variables if v in keep_set]
        dropped = [v for v in self.ring.variables if v not in keep_set]
        sub = PolynomialRing(kept) if kept else None
        if not dropped:
            return self
        big = PolynomialRing(dropped + kept)
        order = MonomialOrder.elimination(len(dropped))
        basis = Ideal(big, [g.to_ring(big) for g in self.generators]).groebner_basis(order)
        k = len(dropped)
        survivors = [g for g in basis if all(not any(m[:k]) for m in g.terms)]
        if sub is None:
            # nothing kept: the answer is the unit or zero ideal of the ground field
            raise ValueError("elimination must keep at least one variable")
        return Ideal(sub, [g.to_ring(sub) for g in survivors])

    def _with_extra(self, extra: Sequence[Polynomial], var: str):
        big = PolynomialRing((var,) + self.ring.variables)
        gens = [g.to_ring(big) for g in self.generators] + list(extra)
        return big, gens

    def _eliminate_first(self, big, gens) -> "Ideal":
        basis = Ideal(big, gens).groebner_basis(MonomialOrder.elimination(1))
        return Ideal(self.ring, [g.to_ring(self.ring) for g in basis if all(m[0] == 0 for m in g.terms)])

    def saturate(self, f) -> "Ideal":
        """(I : f^infinity), eliminating t from I + (1 - t f)."""
        f = self._poly(f)
        if f.is_zero():
            raise ValueError("cannot saturate by the zero polynomial")
        if f.is_constant():
            return self
        t = _fresh(self.ring)
        big, gens = self._with_extra([], t)
        gens.append(big.one() - big.var(t) * f.to_ring(big))
        return self._eliminate_first(big, gens)

    def intersect(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        if self.is_trivial():
            return other
        if other.is_trivial():
            return self
        t = _fresh(self.ring)
        big = PolynomialRing((t,) + self.ring.variables)
        tv = big.var(t)
        gens = [tv * g.to_ring(big) for g in self.generators]
        gens += [(big.one() - tv) * g.to_ring(big) for g in other.generators]
        return self._eliminate_first(big, gens)

    def quotient(self, other: "Ideal") -> "Ideal":
        """(I : J) as the intersection of the principal quotients (I : g)."""
        result = Ideal.unit(self.ring)
        for g in other.generators:
            inter = self.intersect(Ideal(self.ring, [g]))
            result = result.intersect(Ideal(self.ring, [h.exact_div(g) for h in inter.generators]))
        return result

    def radical_contains(self, f) -> bool:
        """Rabinowitsch test: f vanishes on V(I) over the algebraic closure."""
        f = self._poly(f)
        if f.is_zero():
            return True
        if self.contains(f):
            return True
        key = ("rad", f)
        hit = self._cache.get(key)
        if hit is None:
            t = _fresh(self.ring)
            big, gens = self._with_extra([], t)
            gens.append(big.one() - big.var(t) * f.to_ring(big))
            hit = self._cache[key] = Ideal(big, gens).is_trivial()
        return hit

    def radical_subset(self, other: "Ideal") -> bool:
        """V(other) is contained in V(self), i.e. every generator of self vanishes on V(other)."""
        return all(other.radical_contains(g) for g in self.generators)

    def same_variety(self, other: "Ideal") -> bool:
        return self.radical_subset(other) and other.radical_subset(self)

    # -- dimension

    def dimension(self) -> int:
        """Krull dimension of V(I): largest set of variables free of leading monomials."""
        basis = self.groebner_basis()
        if len(basis) == 1 and basis[0].is_constant():
            return -1
        n = self.ring.arity
        supports = [frozenset(i for i, e in enumerate(g.leading_monomial()) if e) for g in basis]
        for size in range(n, -1, -1):
            for subset in itertools.combinations(range(n), size):
                s = set(subset)
                if all(not sup <= s for sup in supports):
                    return size
        return 0

    def independent_set(self) -> list:
        """A maximal independent set of variables realising the dimension."""
        basis = self.groebner_basis()
        n = self.ring.arity
        supports = [frozenset(i for i, e in enumerate(g.leading_monomial()) if e) for g in basis]
        d = self.dimension()
        for subset in itertools.combinations(range(n), max(d, 0)):
            if all(not sup <= set(subset) for sup in supports):
                return [self.ring.variables[i] for i in subset]
        return []

    def codimension(self) -> int:
        return self.ring.arity - self.dimension()

    # -- decomposition

    def minimal_components(self, max_steps: int = 500) -> list:
        """Components of V(I), each proved prime; raises when a piece cannot be certified."""
        comps, certified = decompose(self, max_steps)
        for C, ok in zip(comps, certified):
            if not ok:
                raise DecompositionIncomplete(f"could not certify {C} as prime", residual=C)
        return comps

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"Ideal{self} in {self.ring!r}"


# ---------------------------------------------------------------- decomposition


def _factor_split(I: Ideal):
    for g in I.groebner_basis():
        facs = irreducible_factors(g)
        if len(facs) > 1:
            return [I + f for f in facs]
        if len(facs) == 1 and facs[0] != g.monic():
            return [I + facs[0]]
    return None


def _eliminant_split(I: Ideal):
    if I.dimension() != 0:
        return None
    for v in I.ring.variables:
        elim = I.eliminate([v])
        for g in elim.generators:
            facs = irreducible_factors(g)
            if len(facs) > 1:
                return [I + f.to_ring(I.ring) for f in facs]
            if len(facs) == 1 and facs[0] != g.monic():
                return [I + facs[0].to_ring(I.ring)]
    return None


def _variable_split(I: Ideal):
    for v in I.ring.variables:
        x = I.ring.var(v)
        if I.radical_contains(x):
            continue
        sat = I.saturate(x)
        if sat.is_trivial() or sat.radical_subset(I):
            continue
        return [sat, I + x]
    return None


def _certified_prime(I: Ideal) -> bool:
    basis = I.groebner_basis()
    if all(g.degree() <= 1 for g in basis):
        return True
    if len(basis) == 1:
        facs = irreducible_factors(basis[0])
        return len(facs) == 1 and facs[0] == basis[0].monic()
    if I.dimension() == 0:
        lms = [g.leading_monomial() for g in basis]
        # vector-space dimension of the quotient = number of standard monomials
        n = I.ring.arity
        bound = max(max(m) for m in lms) + 1
        count = sum(
            1
            for e in itertools.product(range(bound), repeat=n)
            if not any(all(a <= b for a, b in zip(m, e)) for m in lms)
        )
        for v in I.ring.variables:
            elim = I.eliminate([v])
            if elim.generators and elim.generators[0].degree() == count:
                facs = irreducible_factors(elim.generators[0])
                return len(facs) == 1 and facs[0] == elim.generators[0].monic()
    return False


def decompose(I: Ideal, max_steps: int = 500):
    """Irreducible components of V(I) over Q by recursive splitting.

    Returns ``(components, certified)``; ``certified[k]`` tells whether the
    k-th component was proved prime (linear, irreducible hypersurface, or a
    zero-dimensional ideal with an irreducible eliminant of full degree).
    """
    stack, leaves, steps = [I], [], 0
    while stack:
        J = stack.pop()
        steps += 1
        if steps > max_steps:
            raise DecompositionIncomplete(f"splitting did not finish in {max_steps} steps", residual=J)
        if J.is_trivial():
            continue
        parts = _factor_split(J) or _eliminant_split(J) or _variable_split(J)
        if parts is None:
            leaves.append(J)
        else:
            stack.extend(reversed(parts))
    # clean up: drop duplicates and components contained in others
    minimal: list = []
    for J in leaves:
        if any(K.radical_subset(J) for K in minimal):
            continue  # V(J) inside V(K)
        minimal = [K for K in minimal if not J.radical_subset(K)]
        minimal.append(J)
    comps = [Ideal(J.ring, J.groebner_basis()) for J in minimal]
    comps.sort(key=lambda J: (-J.dimension(), [str(g) for g in J.groebner_basis()]))
    return comps, [_certified_prime(J) for J in comps]


# ---------------------------------------------------------------- free functions


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX) -> list:
    return I.groebner_basis(order)


def normal_form(f: Polynomial, I: Ideal, order: MonomialOrder = GREVLEX) -> Polynomial:
    return I.normal_form(f, order)


def elimination_ideal(I: Ideal, keep: Sequence[str]) -> Ideal:
    return I.eliminate(keep)


def saturation(I: Ideal, f) -> Ideal:
    return I.saturate(f)


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    return I.quotient(J)


def ideal_intersection(I: Ideal, J: Ideal) -> Ideal:
    return I.intersect(J)


def is_trivial(I: Ideal) -> bool:
    return I.is_trivial()


def radical_membership(f, I: Ideal) -> bool:
    return I.radical_contains(f)


def dimension(I: Ideal) -> int:
    return I.dimension()


def minimal_components(I: Ideal) -> list:
    return I.minimal_components()


def jacobian_ideal(I: Ideal, codim: int | None = None) -> Ideal:
    """I plus the codim-sized minors of the Jacobian of its generators (singular locus)."""
    gens = list(I.generators)
    if codim is None:
        codim = I.codimension()
    rows = [[g.diff(v) for v in I.ring.variables] for g in gens]
    minors = []
    for rs in itertools.combinations(range(len(rows)), codim):
        for cs in itertools.combinations(range(I.ring.arity), codim):
            minors.append(_det([[rows[r][c] for c in cs] for r in rs], I.ring))
    return I + minors


def _det(m, ring):
    if not m:
        return ring.one()
    if len(m) == 1:
        return m[0][0]
    total = ring.zero()
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


__all__ = [
    "Ideal",
    "LEX",
    "GREVLEX",
    "decompose",
    "dimension",
    "elimination_ideal",
    "groebner_basis",
    "ideal_intersection",
    "ideal_quotient",
    "is_trivial",
    "jacobian_ideal",
    "minimal_components",
    "normal_form",
    "radical_membership",
    "saturation",
]
