"""
@file: algebra/__init__.py
@description: Конечные поля и точная линейная алгебра
@created: 2025-01-21
"""

from algebra.ffield import ExtElement, ExtField, PrimeField, find_irreducible, rank_weight
from algebra.linalg import (
    DenseMatrix,
    SparseMatrix,
    determinant,
    matrix_rank,
    right_kernel,
    rref,
    solve,
    wiedemann_kernel_element,
)

__all__ = [
    "PrimeField",
    "ExtField",
    "ExtElement",
    "find_irreducible",
    "rank_weight",
    "DenseMatrix",
    "SparseMatrix",
    "rref",
    "matrix_rank",
    "right_kernel",
    "solve",
    "determinant",
    "wiedemann_kernel_element",
]
