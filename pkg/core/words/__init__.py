"""
Words in T, W and S, their evaluation, enumeration and decomposition.
"""
from .decompose import LogGenFactorization, loggen_decompose, loggen_generators, matrix_to_stword
from .enumeration import HeightAudit, TWWordList, audit_height_levels, count_tw, enumerate_tw
from .words import STWord, Word, check_W_relation, eval_word, tw_power_text, tw_word_from_tokens

__all__ = [
    'Word', 'STWord', 'eval_word', 'tw_power_text', 'tw_word_from_tokens', 'check_W_relation',
    'TWWordList', 'enumerate_tw', 'count_tw', 'HeightAudit', 'audit_height_levels',
    'matrix_to_stword', 'LogGenFactorization', 'loggen_decompose', 'loggen_generators',
]
