"""Sparse polynomials over Q and F_p, exterior algebra, Pfaffians, Groebner bases."""

from .groebner import GroebnerStats, groebner, is_unit_ideal, normal_form, s_polynomial
from .multipoly import FieldMismatch, MultiPoly, VariableCountMismatch, grevlex_key, poly_sum
from .text import PolyParseError, format_poly, parse_poly

__all__ = [
    "GroebnerStats", "groebner", "is_unit_ideal", "normal_form", "s_polynomial",
    "FieldMismatch", "MultiPoly", "VariableCountMismatch", "grevlex_key", "poly_sum",
    "PolyParseError", "format_poly", "parse_poly",
]
