"""
Exact 2x2 matrix algebra over the rationals and congruence-subgroup helpers.
"""
from .congruence import (
    check_level,
    conrey_farmer_matrix,
    gamma_qa,
    height,
    in_gamma0,
    in_gamma1,
    is_elliptic_infinite,
    symmetric_residue,
    twisted_trace,
)
from .identities import (
    CONREY_FARMER_VALUES,
    DISPLAYED_IDENTITIES,
    TWISTED_TRACE_CONDITIONS,
    IdentityCheck,
    check_all_identities,
    check_conrey_farmer,
    check_displayed_identities,
    check_twisted_traces,
)
from .matrices import (
    Mat2,
    S,
    T,
    W,
    format_entry,
    format_matrix,
    identity,
    inv,
    mul,
    neg,
    neg_identity,
    normalize_entry,
    parse_matrix,
    upper,
)

__all__ = [
    'Mat2', 'S', 'T', 'W', 'identity', 'neg_identity', 'upper',
    'mul', 'inv', 'neg', 'parse_matrix', 'format_entry', 'format_matrix', 'normalize_entry',
    'check_level', 'in_gamma0', 'in_gamma1', 'gamma_qa', 'height',
    'is_elliptic_infinite', 'symmetric_residue', 'twisted_trace',
    'conrey_farmer_matrix',
    'IdentityCheck', 'DISPLAYED_IDENTITIES', 'TWISTED_TRACE_CONDITIONS', 'CONREY_FARMER_VALUES',
    'check_displayed_identities', 'check_conrey_farmer', 'check_twisted_traces', 'check_all_identities',
]
