"""Buchberger's algorithm on raw term dictionaries.

Polynomials here are plain ``{exponent_tuple: mpq}`` dicts; the ``Ideal``
class in :mod:`quotcert.ideal` owns the translation from ``Polynomial``.
Pairs are pruned with the Gebauer-Moeller criteria (coprime leading
monomials and the chain criterion) and selected by the normal strategy
(smallest lcm in the active order), ties broken by index.  Sugar was
tried and dropped: with elimination orders it delayed low pairs and let
coefficients of intermediate univariate elements grow to megabits.
"""

from __future__ import annotations

import heapq
import os
import threading
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import ResourceLimitExceeded
from .poly import MonomialOrder, mono_div, mono_divides, mono_lcm, mono_mul

DEFAULT_STEP_CAP = 10**6


def step_cap() -> int:
    raw = os.environ.get("QUOTCERT_STEP_CAP")
    return int(raw) if raw else DEFAULT_STEP_CAP


@dataclass
class EngineStats:
    groebner_computations: int = 0
    max_basis_size: int = 0
    reduction_steps: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, basis_size: int, steps: int):
        with self._lock:
            self.groebner_computations += 1
            self.max_basis_size = max(self.max_basis_size, basis_size)
            self.reduction_steps += steps

    def reset(self):
        with self._lock:
            self.groebner_computations = 0
            self.max_basis_size = 0
            self.reduction_steps = 0

    def snapshot(self) -> dict:
        return {
            "groebner_computations": self.groebner_computations,
            "max_basis_size": self.max_basis_size,
            "reduction_steps": self.reduction_steps,
        }


STATS = EngineStats()


class _Keyed:
    """Memoised sort keys for one order."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.cache: dict = {}

    def __call__(self, m):
        k = self.cache.get(m)
        if k is None:
            k = self.order.sort_key(m)
            self.cache[m] = k
        return k


class _Budget:
    def __init__(self, cap):
        self.cap = cap
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.cap:
            raise ResourceLimitExceeded(f"Groebner step cap of {self.cap} reductions exceeded")


def leading(f: dict, key) -> tuple:
    return min(f, key=key)


def make_monic(f: dict, key) -> dict:
    lm = min(f, key=key)
    c = f[lm]
    if c == 1:
        return f
    inv = 1 / c
    return {m: v * inv for m, v in f.items()}


def _find_reducer(m, reducers):
    for r in reducers:
        if mono_divides(r[0], m):
            return r
    return None


def reduce_full(f: dict, reducers: list, key, budget: _Budget | None = None) -> dict:
    """Normal form of ``f`` by monic reducers given as ``(lm, tail_items)`` pairs."""
    f = dict(f)
    heap = [(key(m), m) for m in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        r = _find_reducer(m, reducers)
        if r is None:
            rem[m] = c
            continue
        if budget is not None:
            budget.tick()
        q = mono_div(m, r[0])
        for mg, cg in r[1]:
            t = mono_mul(mg, q)
            v = f.get(t)
            if v is None:
                f[t] = -c * cg
                heapq.heappush(heap, (key(t), t))
            else:
                v -= c * cg
                if v:
                    f[t] = v
                else:
                    del f[t]
    return rem


def _as_reducer(f: dict, key):
    lm = min(f, key=key)
    return (lm, [(m, c) for m, c in f.items() if m != lm])


def spoly(f: dict, lf: tuple, g: dict, lg: tuple) -> dict:
    """S-polynomial of two monic polynomials."""
    lcm = mono_lcm(lf, lg)
    qf, qg = mono_div(lcm, lf), mono_div(lcm, lg)
    out: dict = {}
    for m, c in f.items():
        if m != lf:
            out[mono_mul(m, qf)] = c
    for m, c in g.items():
        if m != lg:
            t = mono_mul(m, qg)
            v = out.get(t, 0) - c
            if v:
                out[t] = v
            else:
                out.pop(t, None)
    return out


def _coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def groebner(polys: list, order: MonomialOrder, cap: int | None = None) -> list:
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial)."""
    key = _Keyed(order)
    budget = _Budget(step_cap() if cap is None else cap)
    inputs = [make_monic(f, key) for f in polys if f]
    if not inputs:
        STATS.record(0, 0)
        return []
    inputs.sort(key=lambda f: key(leading(f, key)), reverse=True)

    basis: list = []      # (lm, poly) for every polynomial ever added
    active: list = []     # indices into basis still used for pair generation
    pairs: list = []      # (i, j, lcm)

    def add(h: dict):
        nonlocal active, pairs
        lh = leading(h, key)
        k = len(basis)
        basis.append((lh, h))
        # Gebauer-Moeller update
        cand = [(i, mono_lcm(basis[i][0], lh)) for i in active]
        keep = []
        for idx, (i, l) in enumerate(cand):
            if _coprime(basis[i][0], lh):
                keep.append((i, l, True))
                continue
            dominated = any(mono_divides(l2, l) for _, l2 in cand[idx + 1:]) or any(
                mono_divides(l2, l) for _, l2, _ in keep
            )
            if not dominated:
                keep.append((i, l, False))
        fresh = [(i, k, l) for i, l, cop in keep if not cop]
        survivors = []
        for i, j, l in pairs:
            if (
                mono_divides(lh, l)
                and mono_lcm(basis[i][0], lh) != l
                and mono_lcm(basis[j][0], lh) != l
            ):
                continue
            survivors.append((i, j, l))
        pairs = survivors + fresh
        active = [i for i in active if not mono_divides(lh, basis[i][0])] + [k]
        tail_reduce(k)

    def tail_reduce(k):
        # keep the active tails reduced against the newest element; without
        # this, stale tails feed ever larger coefficients into later pairs
        lh = basis[k][0]
        red = None
        for i in active:
            if i == k:
                continue
            li, fi = basis[i]
            if not any(m != li and mono_divides(lh, m) for m in fi):
                continue
            if red is None:
                red = reducers()
            others = [r for r in red if r[0] != li]
            tail = {m: c for m, c in fi.items() if m != li}
            rt = reduce_full(tail, others, key, budget)
            rt[li] = fi[li]
            basis[i] = (li, rt)
            red = None

    def reducers():
        return [_as_reducer(basis[i][1], key) for i in active]

    for f in inputs:
        red = reduce_full(f, reducers(), key, budget) if basis else f
        if red:
            add(make_monic(red, key))

    cached_reducers = None
    cached_active = None
    while pairs:
        # smallest lcm first; keys sort the leading monomial first, so the
        # smallest monomial has the largest key
        top = max(key(l) for _, _, l in pairs)
        best = min((t for t in range(len(pairs)) if key(pairs[t][2]) == top), key=lambda t: pairs[t][:2])
        p = pairs.pop(best)
        i, j, _ = p
        s = spoly(basis[i][1], basis[i][0], basis[j][1], basis[j][0])
        if not s:
            continue
        if cached_active != active:
            cached_reducers = reducers()
            cached_active = list(active)
        h = reduce_full(s, cached_reducers, key, budget)
        if h:
            h = make_monic(h, key)
            add(h)
            if not any(basis[-1][0]):
                break  # unit ideal

    # minimise and interreduce
    polys_active = [basis[i] for i in active]
    if any(not any(lm) for lm, _ in polys_active):
        STATS.record(1, budget.steps)
        return [{(0,) * len(polys_active[0][0]): mpq(1)}]
    minimal = []
    for a, (la, fa) in enumerate(polys_active):
        if any(b != a and mono_divides(lb, la) and (lb != la or b < a) for b, (lb, _) in enumerate(polys_active)):
            continue
        minimal.append(fa)
    reduced = []
    for a, fa in enumerate(minimal):
        others = [_as_reducer(g, key) for b, g in enumerate(minimal) if b != a]
        la = leading(fa, key)
        tail = {m: c for m, c in fa.items() if m != la}
        rt = reduce_full(tail, others, key, budget)
        rt[la] = fa[la]
        reduced.append(rt)
    reduced.sort(key=lambda f: key(leading(f, key)))
    STATS.record(len(reduced), budget.steps)
    return reduced


def normal_form(f: dict, basis: list, order: MonomialOrder) -> dict:
    key = _Keyed(order)
    if not f:
        return {}
    return reduce_full(f, [_as_reducer(g, key) for g in basis], key)


def is_groebner(basis: list, order: MonomialOrder) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    key = _Keyed(order)
    monic = [make_monic(g, key) for g in basis if g]
    lms = [leading(g, key) for g in monic]
    reds = [_as_reducer(g, key) for g in monic]
    for a in range(len(monic)):
        for b in range(a + 1, len(monic)):
            s = spoly(monic[a], lms[a], monic[b], lms[b])
            if s and reduce_full(s, reds, key):
                return False
    return True
