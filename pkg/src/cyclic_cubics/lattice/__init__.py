"""Integral lattices: normal forms, discriminant groups, complements, gluing."""

from .core import (
    DegenerateLattice, DiscriminantGroup, GlueResult, InvalidDecomposition, IsotropicVector,
    Isometry, Lattice, LatticeError, NonIntegralReflection, NotAnIsometry, Sublattice, ZeroVector,
    direct_sum, discriminant_group, divisibility, glue_extends, is_primitive, nikulin_hypothesis,
    orthogonal_complement, reflection, rescale, saturate, signature, snf, span,
)
from .named import A2, E8, K3_lattice, L_lattice, S_lattice, S_minus, U, rank_one
from .search import SearchOutcome, isometry_search, verify_witness

__all__ = [
    "DegenerateLattice", "DiscriminantGroup", "GlueResult", "InvalidDecomposition",
    "IsotropicVector", "Isometry", "Lattice", "LatticeError", "NonIntegralReflection",
    "NotAnIsometry", "Sublattice", "ZeroVector", "direct_sum", "discriminant_group",
    "divisibility", "glue_extends", "is_primitive", "nikulin_hypothesis",
    "orthogonal_complement", "reflection", "rescale", "saturate", "signature", "snf", "span",
    "A2", "E8", "K3_lattice", "L_lattice", "S_lattice", "S_minus", "U", "rank_one",
    "SearchOutcome", "isometry_search", "verify_witness",
]
