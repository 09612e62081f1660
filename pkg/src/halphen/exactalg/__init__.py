"""Exact arithmetic: rationals, quadratic fields, polynomials, matrices."""
from .scalars import (
    MixedExtensionError,
    Quad,
    Scalar,
    as_scalar,
    conj,
    extension_of,
    format_scalar,
    is_rational,
    parse_scalar,
    sqrt_rational,
    squarefree_part,
)
from .poly import (
    ONE,
    X,
    Polynomial,
    RationalFunction,
    common_denominator,
    format_poly,
    inverse_mod,
    irreducible_factors,
    multiplicity,
    poly_gcd,
    poly_lcm,
    poly_xgcd,
    quadratic_roots,
    rational_roots,
    squarefree_decompose,
    squarefree_lc,
)
from .matrix import ExactMatrix, nullspace, solve, span_basis

__all__ = [
    "MixedExtensionError", "Quad", "Scalar", "as_scalar", "conj", "extension_of",
    "format_scalar", "is_rational", "parse_scalar", "sqrt_rational", "squarefree_part",
    "ONE", "X", "Polynomial", "RationalFunction", "common_denominator", "format_poly",
    "inverse_mod", "irreducible_factors", "multiplicity", "poly_gcd", "poly_lcm",
    "poly_xgcd", "quadratic_roots", "rational_roots", "squarefree_decompose",
    "squarefree_lc", "ExactMatrix", "nullspace", "solve", "span_basis",
]
