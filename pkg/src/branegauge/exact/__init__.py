"""Exact scalar, polynomial, exterior-form and linear-algebra substrate."""

from .scalar import Scalar
from .poly import Ring, TruncPoly, monomials_upto
from .form import ExteriorForm, basis_index_sets
from .matrix import Matrix
from .linalg import (
    LinearSolution,
    SpanTracker,
    kernel_basis,
    kernel_sparse,
    matrix_rank,
    rank_sparse,
    solve_linear,
    solve_sparse,
)
from .grammar import format_poly, format_scalar, parse_poly, parse_scalar

__all__ = [
    "Scalar",
    "Ring",
    "TruncPoly",
    "monomials_upto",
    "ExteriorForm",
    "basis_index_sets",
    "Matrix",
    "LinearSolution",
    "SpanTracker",
    "kernel_basis",
    "kernel_sparse",
    "matrix_rank",
    "rank_sparse",
    "solve_linear",
    "solve_sparse",
    "format_poly",
    "format_scalar",
    "parse_poly",
    "parse_scalar",
]
