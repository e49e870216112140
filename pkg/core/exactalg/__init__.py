"""
Exact cyclotomic arithmetic, determinants and the Hall block form.
"""
from .cyclotomic import CycloNumber, basis_size, cyclo_from_reduced, reduce_exponent, reduce_group_ring
from .determinant import (
    EmptyDiagonalError,
    ExpSumMatrix,
    KeyLemmaPreconditionError,
    PrimeDividesMNError,
    PrimesNotDistinctError,
    SubsetOverlapError,
    SubsetRangeError,
    exact_det,
    key_det_nonzero,
    numeric_det,
    random_exp_sum_matrix,
)
from .hall import (
    block_form_holds,
    hall_block_form,
    hall_block_form_bruteforce,
    is_tight_minimal,
    max_matching,
    permutation_sign,
)

__all__ = [
    'CycloNumber', 'basis_size', 'cyclo_from_reduced', 'reduce_exponent', 'reduce_group_ring',
    'ExpSumMatrix', 'KeyLemmaPreconditionError', 'PrimesNotDistinctError', 'PrimeDividesMNError',
    'SubsetRangeError', 'SubsetOverlapError', 'EmptyDiagonalError',
    'exact_det', 'numeric_det', 'key_det_nonzero', 'random_exp_sum_matrix',
    'hall_block_form', 'hall_block_form_bruteforce', 'block_form_holds', 'is_tight_minimal',
    'max_matching', 'permutation_sign',
]
