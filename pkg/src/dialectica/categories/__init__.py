"""Concrete Cartesian categories and the lens / Dialectica constructions over them."""

from .dial import DialArrow, DialError, DialObject, G, G_inv, Subobject, dial_check, dial_compose, dial_identity
from .finset import FINSET, FinSet, FinSetCategory, FinSetMap
from .lens import ELensArrow, LensError, elens_compose, elens_identity
from .poly import POLY, Poly, PolyCategory, PolyMap, D_functor, T_star, poly_reverse_diff
from .terms import TermCategory, TermMap

__all__ = [
    "DialArrow", "DialError", "DialObject", "G", "G_inv", "Subobject", "dial_check", "dial_compose",
    "dial_identity", "FINSET", "FinSet", "FinSetCategory", "FinSetMap", "ELensArrow", "LensError",
    "elens_compose", "elens_identity", "POLY", "Poly", "PolyCategory", "PolyMap", "D_functor", "T_star",
    "poly_reverse_diff", "TermCategory", "TermMap",
]
