"""Exact workbench for quadric bundles over the projective plane."""

from .field import QQ, FieldSpec
from .grammar import format_poly, parse
from .poly import Poly, gcd, is_square_up_to_unit, odd_part, squarefree_part

__all__ = [
    "QQ",
    "FieldSpec",
    "Poly",
    "parse",
    "format_poly",
    "gcd",
    "squarefree_part",
    "odd_part",
    "is_square_up_to_unit",
]
