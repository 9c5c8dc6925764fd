"""Exact verification and search for symmetric determinantal representations of plane curves."""

from .field import QQ, GF, CyclotomicField, FiniteField, cyclotomic_field, embed, galois_orbit
from .poly import TernaryPoly, parse_poly

__all__ = [
    "QQ",
    "GF",
    "CyclotomicField",
    "FiniteField",
    "TernaryPoly",
    "cyclotomic_field",
    "embed",
    "galois_orbit",
    "parse_poly",
]
