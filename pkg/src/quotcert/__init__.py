"""Certify categorical quotients of algebraic group actions in exact arithmetic."""

from .actions import ActionSpec, Derivation
from .constructible import ConstructibleSet, Stratum
from .errors import QuotcertError
from .ideal import Ideal
from .image import PolynomialMap
from .poly import GREVLEX, LEX, MonomialOrder, Polynomial, PolynomialRing, parse_polynomial

__version__ = "0.1.0"

__all__ = [
    "ActionSpec",
    "ConstructibleSet",
    "Derivation",
    "GREVLEX",
    "LEX",
    "Ideal",
    "MonomialOrder",
    "Polynomial",
    "PolynomialMap",
    "PolynomialRing",
    "QuotcertError",
    "Stratum",
    "parse_polynomial",
]
