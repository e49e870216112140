"""
Coset enumeration in SL_2(Z) and the congruence subgroups built on it.
"""
from .coset_table import (
    RELATORS,
    CosetEnumerationResult,
    CosetLimitExceeded,
    CosetTable,
    todd_coxeter,
    word_to_columns,
)
from .gamma1 import (
    Gamma1CosetAction,
    Gamma1Generators,
    cached_schreier_generators,
    gamma1_coset_action,
    index_gamma0,
    index_gamma1,
    index_gamma_q,
    schreier_generators,
)
from .generator_table import (
    GENERATOR_TABLE,
    GeneratorCertificate,
    certify_generators,
    certify_loggen_level,
    certify_tabled_level,
    parse_generator_symbol,
    small_level_generators,
)

__all__ = [
    'RELATORS', 'CosetTable', 'CosetEnumerationResult', 'CosetLimitExceeded',
    'todd_coxeter', 'word_to_columns',
    'Gamma1CosetAction', 'Gamma1Generators', 'gamma1_coset_action', 'schreier_generators',
    'cached_schreier_generators',
    'index_gamma0', 'index_gamma1', 'index_gamma_q',
    'GENERATOR_TABLE', 'GeneratorCertificate', 'certify_generators', 'certify_tabled_level',
    'certify_loggen_level', 'parse_generator_symbol', 'small_level_generators',
]
