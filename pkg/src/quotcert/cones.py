"""Exact rational polyhedral cones in low rank.

Both descriptions are found by brute force over subsets of generators or
inequalities, which is plenty for the rank of a divisor class group in the
examples (usually 2).  Everything is integral; no pivot ever rounds.
"""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import sympy

from .errors import ConeRankError

MAX_RANK = 6


def primitive(v: Iterable) -> tuple:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _nullspace(rows: Sequence[Sequence[int]], k: int) -> list:
    if not rows:
        return [tuple(int(i == j) for j in range(k)) for i in range(k)]
    M = sympy.Matrix([list(r) for r in rows])
    return [primitive(list(v)) for v in M.nullspace()]


def _rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return sympy.Matrix([list(r) for r in rows]).rank()


class RationalCone:
    """cone(generators) in Q^rank, with a lazily computed outer description."""

    def __init__(self, rank: int, generators: Iterable[Sequence] = ()):
        if rank < 1:
            raise ValueError("rank must be positive")
        if rank > MAX_RANK:
            raise ConeRankError(f"rank {rank} exceeds the cap of {MAX_RANK}")
        self.rank = rank
        gens = []
        for g in generators:
            if len(g) != rank:
                raise ValueError(f"generator {tuple(g)} does not have length {rank}")
            p = primitive(g)
            if any(p) and p not in gens:
                gens.append(p)
        self.generators = tuple(sorted(gens))
        self._dual = None
        self._lock = threading.Lock()

    @classmethod
    def zero(cls, rank: int) -> "RationalCone":
        return cls(rank, [])

    @classmethod
    def from_inequalities(cls, rank: int, inequalities: Sequence[Sequence], equations: Sequence[Sequence] = ()):
        """{x : <n, x> >= 0 for n in inequalities, <e, x> = 0 for e in equations}."""
        if rank > MAX_RANK:
            raise ConeRankError(f"rank {rank} exceeds the cap of {MAX_RANK}")
        eqs = [primitive(e) for e in equations if any(e)]
        ineqs = [primitive(n) for n in inequalities if any(n)]
        lineality = _nullspace(eqs + ineqs, rank)
        base = eqs + list(lineality)
        free = rank - _rank(base) if base else rank
        rays = []
        if free > 0:
            for subset in itertools.combinations(ineqs, free - 1):
                sol = _nullspace(base + list(subset), rank)
                if len(sol) != 1:
                    continue
                for r in (sol[0], tuple(-x for x in sol[0])):
                    if all(_dot(n, r) >= 0 for n in ineqs) and r not in rays:
                        rays.append(r)
        gens = rays + list(lineality) + [tuple(-x for x in v) for v in lineality]
        return cls(rank, gens)

    # -- outer description

    def dual_description(self) -> tuple:
        """(facet normals, equations): the cone is {x : n.x >= 0, e.x = 0}."""
        if self._dual is None:
            with self._lock:
                if self._dual is None:
                    self._dual = self._compute_dual()
        return self._dual

    def _compute_dual(self):
        k = self.rank
        gens = list(self.generators)
        equations = _nullspace(gens, k) if gens else _nullspace([], k)
        d = k - len(equations)
        facets = []
        if d > 0:
            for subset in itertools.combinations(gens, d - 1):
                sol = _nullspace(list(subset) + equations, k)
                if len(sol) != 1:
                    continue
                n = sol[0]
                vals = [_dot(n, g) for g in gens]
                if all(v <= 0 for v in vals):
                    n = tuple(-x for x in n)
                    vals = [-v for v in vals]
                if all(v >= 0 for v in vals) and any(vals) and n not in facets:
                    facets.append(n)
        return tuple(sorted(facets)), tuple(sorted(equations))

    @property
    def facets(self) -> tuple:
        return self.dual_description()[0]

    @property
    def equations(self) -> tuple:
        return self.dual_description()[1]

    # -- predicates

    def _check(self, w):
        if len(w) != self.rank:
            raise ValueError(f"vector {tuple(w)} does not have length {self.rank}")

    def contains(self, w: Sequence) -> bool:
        self._check(w)
        facets, eqs = self.dual_description()
        return all(_dot(e, w) == 0 for e in eqs) and all(_dot(n, w) >= 0 for n in facets)

    def relint_contains(self, w: Sequence) -> bool:
        self._check(w)
        facets, eqs = self.dual_description()
        return all(_dot(e, w) == 0 for e in eqs) and all(_dot(n, w) > 0 for n in facets)

    def dim(self) -> int:
        return self.rank - len(self.equations)

    def is_full_dimensional(self) -> bool:
        return self.dim() == self.rank

    def contains_cone(self, other: "RationalCone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def equals(self, other: "RationalCone") -> bool:
        if self.rank != other.rank:
            return False
        return self.contains_cone(other) and other.contains_cone(self)

    def __eq__(self, other):
        return isinstance(other, RationalCone) and self.equals(other)

    def __hash__(self):
        return hash((self.rank, self.dim()))

    def intersect(self, other: "RationalCone") -> "RationalCone":
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        f1, e1 = self.dual_description()
        f2, e2 = other.dual_description()
        return RationalCone.from_inequalities(self.rank, f1 + f2, e1 + e2)

    def interior_point(self) -> tuple:
        """A point of the relative interior (the sum of the generators)."""
        return tuple(sum(g[i] for g in self.generators) for i in range(self.rank))

    def face_containing(self, w: Sequence) -> "RationalCone":
        """Smallest face of the cone containing the point w (which must lie in it)."""
        if not self.contains(w):
            raise ValueError(f"{tuple(w)} is not in the cone")
        facets, eqs = self.dual_description()
        tight = [n for n in facets if _dot(n, w) == 0]
        return RationalCone(self.rank, [g for g in self.generators if all(_dot(n, g) == 0 for n in tight)])

    def is_face_of(self, other: "RationalCone") -> bool:
        if not other.contains_cone(self):
            return False
        return other.face_containing(self.interior_point()).equals(self)

    def canonical(self) -> tuple:
        """Canonical V-description: extreme rays plus a lineality basis, sorted."""
        facets, eqs = self.dual_description()
        return RationalCone.from_inequalities(self.rank, facets, eqs).generators

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.canonical()]}

    def __repr__(self):
        return f"cone({', '.join(str(g) for g in self.generators)})" if self.generators else f"cone(0 in Q^{self.rank})"


def cone(*generators: Sequence) -> RationalCone:
    if not generators:
        raise ValueError("use RationalCone.zero for the zero cone")
    return RationalCone(len(generators[0]), generators)


def dual_description(C: RationalCone):
    return C.dual_description()


def contains(C: RationalCone, w) -> bool:
    return C.contains(w)


def relint_contains(C: RationalCone, w) -> bool:
    return C.relint_contains(w)


def dim(C: RationalCone) -> int:
    return C.dim()


def equals(C: RationalCone, D: RationalCone) -> bool:
    return C.equals(D)


def intersect(C: RationalCone, D: RationalCone) -> RationalCone:
    return C.intersect(D)
