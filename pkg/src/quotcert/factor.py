"""Factorisation over Q, delegated to sympy's multivariate factoriser."""

from __future__ import annotations

from functools import lru_cache

import sympy
from gmpy2 import mpq

from .poly import Polynomial


def _to_sympy(f: Polynomial):
    gens = sympy.symbols(f.ring.variables)
    terms = {m: sympy.Rational(int(c.numerator), int(c.denominator)) for m, c in f.terms.items()}
    return sympy.Poly.from_dict(terms, *gens, domain="QQ")


def _from_sympy(p, ring) -> Polynomial:
    out = {}
    for m, c in p.as_dict().items():
        c = sympy.Rational(c)
        out[tuple(m)] = mpq(int(c.p), int(c.q))
    return Polynomial.from_terms(ring, out)


def irreducible_factors(f: Polynomial) -> list:
    """Distinct monic irreducible factors over Q (grevlex-monic), in a stable order."""
    if f.is_constant():
        return []
    return list(_factors(f))


@lru_cache(maxsize=16384)
def _factors(f: Polynomial) -> tuple:
    _, facs = _to_sympy(f).factor_list()
    out = [_from_sympy(p, f.ring).monic() for p, _ in facs]
    out.sort(key=lambda g: (g.degree(), str(g)))
    return tuple(out)


def squarefree_part(f: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors."""
    result = f.ring.one()
    for g in irreducible_factors(f):
        result = result * g
    return result


def rational_roots(f: Polynomial, var: str) -> list:
    """Rational roots of a univariate polynomial in ``var``."""
    roots = []
    for g in irreducible_factors(f):
        if g.degree(var) == 1 and g.support() <= {var}:
            i = f.ring.index(var)
            lin = sum(c for m, c in g.terms.items() if m[i] == 1)
            const = g.constant_value()
            roots.append(-const / lin)
    return sorted(set(roots))
