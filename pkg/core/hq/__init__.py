"""
Checks that H_q, generated by Gamma_0(N) matrices with upper-left entry q,
contains Gamma_1(N).
"""
from .coset_check import divisor_lift, hq_coset_verify, hq_generator_words, tw_in_hq_witnesses
from .sieve import VERDICT_STATUSES, Verdict, divisor_coverage, q_domain, sieve_q
from .verifier import EXPLICIT_Q_TABLE, HqVerifier, TableRow, verify_hq
from .witnesses import Witness, WitnessCache, find_witnesses, generator_fingerprint, replay_witness

__all__ = [
    'Witness', 'WitnessCache', 'find_witnesses', 'generator_fingerprint', 'replay_witness',
    'Verdict', 'VERDICT_STATUSES', 'divisor_coverage', 'q_domain', 'sieve_q',
    'tw_in_hq_witnesses', 'hq_coset_verify', 'hq_generator_words', 'divisor_lift',
    'HqVerifier', 'verify_hq', 'EXPLICIT_Q_TABLE', 'TableRow',
]
