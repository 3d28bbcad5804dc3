"""Exact multivariate polynomials over the rationals.

Coefficients are ``gmpy2.mpq`` values; a polynomial is an immutable sparse map
from exponent tuples to nonzero coefficients over a named variable list.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

from .errors import PolynomialSyntaxError, RingMismatchError, UnknownVariableError

Rational = type(mpq())
Scalar = Union[int, Fraction, Rational]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def rational(x) -> Rational:
    """Coerce ints, Fractions, mpq values and strings like ``"3/4"`` to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(map(operator.add, a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(map(operator.sub, b, a))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(map(max, a, b))


# ---------------------------------------------------------------- orders


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or a two-block order (grevlex on each block).

    ``sort_key`` maps an exponent tuple to a tuple that is *smaller* for
    *larger* monomials, so ``min`` finds leading monomials and ``sorted``
    lists terms from the top down.
    """

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.block < 0:
            raise ValueError("block size must be nonnegative")

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def elimination(cls, first_block: int):
        return cls("block", first_block)

    def sort_key(self, m: tuple) -> tuple:
        if self.kind == "grevlex":
            return (-sum(m),) + m[::-1]
        if self.kind == "lex":
            return tuple(-e for e in m)
        k = self.block
        head, tail = m[:k], m[k:]
        return (-sum(head),) + head[::-1] + (-sum(tail),) + tail[::-1]

    def __str__(self):
        return f"block({self.block})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


# ---------------------------------------------------------------- ring


@dataclass(frozen=True)
class PolynomialRing:
    """Q[variables] in characteristic zero."""

    variables: tuple

    def __init__(self, variables: Iterable[str]):
        names = tuple(variables)
        if not names:
            raise ValueError("a polynomial ring needs at least one variable")
        for v in names:
            if not isinstance(v, str) or not _NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "variables", names)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(names)})

    characteristic = 0

    @property
    def arity(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: Scalar) -> "Polynomial":
        c = rational(c)
        return Polynomial(self, {(0,) * self.arity: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.arity
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): mpq(1)})

    def gens(self) -> list:
        return [self.var(v) for v in self.variables]

    def monomial(self, exponents: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        if len(exponents) != self.arity:
            raise ValueError("exponent vector length does not match ring arity")
        c = rational(coeff)
        return Polynomial(self, {tuple(exponents): c} if c else {})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(self, text)

    def fresh_name(self, base: str) -> str:
        name, k = base, 0
        while name in self._index:
            k += 1
            name = f"{base}{k}"
        return name

    def extend(self, *names: str) -> "PolynomialRing":
        return PolynomialRing(self.variables + tuple(names))

    def __repr__(self):
        return f"QQ[{', '.join(self.variables)}]"


# ---------------------------------------------------------------- polynomial


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Mapping[tuple, Rational]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring, terms: Mapping) -> "Polynomial":
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != ring.arity or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for {ring}")
            c = rational(c)
            if c:
                clean[m] = clean.get(m, mpq(0)) + c
        return cls(ring, {m: c for m, c in clean.items() if c})

    # -- coercion

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return self.ring.const(other)
        return NotImplemented

    # -- predicates

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Rational:
        return self.terms.get((0,) * self.ring.arity, mpq(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Polynomial":
        c = rational(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises ValueError on a remainder."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        key = GREVLEX.sort_key
        lm_d = min(other.terms, key=key)
        lc_d = other.terms[lm_d]
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            lm = min(rem, key=key)
            if not mono_divides(lm_d, lm):
                raise ValueError("division leaves a remainder")
            q = mono_div(lm, lm_d)
            c = rem[lm] / lc_d
            quot[q] = c
            for m, v in other.terms.items():
                t = mono_mul(m, q)
                s = rem.get(t, 0) - c * v
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return Polynomial(self.ring, quot)

    # -- structure

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(m) for m in self.terms)
        i = self.ring.index(var)
        return max(m[i] for m in self.terms)

    def support(self) -> set:
        """Names of the variables that actually occur."""
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return {self.ring.variables[i] for i in used}

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list:
        return sorted(self.terms.items(), key=lambda t: order.sort_key(t[0]))

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        return min(self.terms, key=order.sort_key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Rational:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    def coefficients(self) -> dict:
        """Term map with coefficients as ``fractions.Fraction``."""
        return {m: Fraction(int(c.numerator), int(c.denominator)) for m, c in self.terms.items()}

    def is_homogeneous_for(self, weights: Sequence[Sequence[int]]) -> tuple | None:
        """Return None if all terms share one weight, else two distinct term weights."""
        seen = None
        for m in self.sorted_terms():
            w = tuple(sum(e * row[j] for e, row in zip(m[0], weights)) for j in range(len(weights[0])))
            if seen is None:
                seen = w
            elif w != seen:
                return seen, w
        return None

    # -- calculus and evaluation

    def diff(self, var: str) -> "Polynomial":
        i = self.ring.index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Polynomial(self.ring, out)

    def evaluate(self, point: Sequence[Scalar]) -> Rational:
        if len(point) != self.ring.arity:
            raise ValueError(f"point has {len(point)} coordinates, ring arity is {self.ring.arity}")
        pt = [rational(p) for p in point]
        total = mpq(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def partial_evaluate(self, values: Mapping[str, Scalar]) -> "Polynomial":
        """Set some variables to rational values; the ring is unchanged."""
        idx = {self.ring.index(v): rational(x) for v, x in values.items()}
        out: dict = {}
        for m, c in self.terms.items():
            e = list(m)
            for i, x in idx.items():
                if e[i]:
                    c = c * x ** e[i]
                    e[i] = 0
            if c:
                t = tuple(e)
                s = out.get(t, 0) + c
                if s:
                    out[t] = s
                else:
                    out.pop(t, None)
        return Polynomial(self.ring, out)

    def substitute(self, bindings: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Compose: replace every variable by a polynomial of a common target ring."""
        missing = [v for v in self.ring.variables if v not in bindings]
        if missing:
            raise UnknownVariableError(missing[0])
        images = [bindings[v] for v in self.ring.variables]
        target = images[0].ring if images else self.ring
        for p in images:
            if p.ring != target:
                raise RingMismatchError("substitution images live in different rings")
        powers = [{0: target.one(), 1: p} for p in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e // 2) * power(i, e - e // 2)
            return cache[e]

        out: dict = {}
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            for mm, cc in term.terms.items():
                s = out.get(mm, 0) + cc
                if s:
                    out[mm] = s
                else:
                    out.pop(mm, None)
        return Polynomial(target, out)

    def to_ring(self, ring: PolynomialRing) -> "Polynomial":
        """Re-express in ``ring`` by variable name; every used variable must exist there."""
        if ring == self.ring:
            return self
        idx = [ring.index(v) if v in ring else None for v in self.ring.variables]
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.arity
            for i, k in enumerate(m):
                if k:
                    if idx[i] is None:
                        raise UnknownVariableError(self.ring.variables[i])
                    e[idx[i]] = k
            out[tuple(e)] = c
        return Polynomial(ring, out)

    # -- printing

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        pieces = []
        for m, c in self.sorted_terms():
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r} in {self.ring!r})"


def product(polys: Iterable[Polynomial], ring: PolynomialRing) -> Polynomial:
    return reduce(operator.mul, polys, ring.one())


# ---------------------------------------------------------------- parser

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class _Parser:
    def __init__(self, ring: PolynomialRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolynomialSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {val!r}", pos)
        return p

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def base(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "name":
            if val not in self.ring:
                raise UnknownVariableError(val)
            return self.ring.var(val)
        if kind == "num":
            num = int(val)
            if self.peek()[:2] == ("op", "/"):
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num" or int(v2) == 0:
                    raise PolynomialSyntaxError("denominator must be a positive integer", p2)
                return self.ring.const(mpq(num, int(v2)))
            return self.ring.const(num)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise PolynomialSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse_polynomial(ring: PolynomialRing, text: str) -> Polynomial:
    """Parse ``text`` (ASCII grammar with ``+ - * ^ ( )`` and ``p/q`` literals)."""
    return _Parser(ring, text).parse()
