"""Exact scalars, matrices, polynomials and binary forms."""

from .fields import GF, QQ, Field, FieldMismatch, Fp, field_of, is_prime
from .forms import BinaryForm, HomPoly, evaluate, form_gcd, multiply, partial, substitute
from .ktpoly import KtPoly, poly_det, poly_gcd, poly_xgcd
from .linalg import ExactMatrix, RrefResult, rref, same_span, span_rank
from .snf import SmithForm, poly_matrix, smith_form, snf_kt

__all__ = [
    "GF", "QQ", "Field", "FieldMismatch", "Fp", "field_of", "is_prime",
    "BinaryForm", "HomPoly", "evaluate", "form_gcd", "multiply", "partial", "substitute",
    "KtPoly", "poly_det", "poly_gcd", "poly_xgcd",
    "ExactMatrix", "RrefResult", "rref", "same_span", "span_rank",
    "SmithForm", "poly_matrix", "smith_form", "snf_kt",
]
