"""
Coset-enumeration check of H_q = <A in Gamma_0(N) : upper-left entry q>
and the T/W identities of the almost-all argument.
"""
import logging
import math
from itertools import islice
from typing import Dict, Iterator, List, Tuple

import sympy

from ..cosets import index_gamma_q, todd_coxeter
from ..matcore import Mat2, T, W, check_level, gamma_qa
from ..words import matrix_to_stword
from .sieve import Verdict

logger = logging.getLogger(__name__)

# coset limit for a partial batch, as a multiple of the target index
PARTIAL_BATCH_FACTOR = 64


def _least_inverse(q: int, N: int) -> int:
    return pow(q, -1, N) if N > 1 else 0


def tw_in_hq_witnesses(N: int, q: int) -> Dict[str, Tuple[Mat2, Mat2]]:
    """
    Two pairs of Gamma_0(N) matrices with upper-left entry q exhibiting T and W in H_q.

    Returns:
        {"w_pair": (P, Q) with P Q^-1 = W, "t_pair": (P, Q) with P^-1 Q = T}

    Raises:
        ValueError: If gcd(q, N) != 1 or q == 0
    """
    check_level(N)
    if q == 0 or math.gcd(q, N) != 1:
        raise ValueError(f"tw_in_hq_witnesses requires q != 0 and gcd(q, N) = 1, got q={q}, N={N}")
    qb = _least_inverse(q, N)
    p1 = Mat2(q, 1, q * (N + qb) - 1, qb + N)
    p2 = Mat2(q, 1, q * qb - 1, qb)
    p3 = Mat2(q, q + 1, q * qb - 1, (q + 1) * qb - 1)
    pairs = {"w_pair": (p1, p2), "t_pair": (p2, p3)}
    if p1 * p2.inverse() != W(N) or p2.inverse() * p3 != T():
        raise RuntimeError(f"T/W witnesses failed their identities for N={N}, q={q}")
    return pairs


def divisor_lift(N: int, q1: int, C: int, q: int, d: int) -> Tuple[int, int]:
    """
    Exponents (j, k) with T^j W^k (q1; N C) = (q; N d).

    Raises:
        ValueError: If N d does not divide q - q1 or q1 does not divide d - C
    """
    check_level(N)
    if d == 0 or (q - q1) % (N * d):
        raise ValueError(f"N*d = {N * d} must be nonzero and divide q - q1 = {q - q1}")
    if q1 == 0 or (d - C) % q1:
        raise ValueError(f"q1 = {q1} must be nonzero and divide d - C = {d - C}")
    j = (q - q1) // (N * d)
    k = (d - C) // q1
    M = (T() ** j) * (W(N) ** k)
    if (M.a * q1 + M.b * N * C, M.c * q1 + M.d * N * C) != (q, N * d):
        raise RuntimeError(f"Divisor lift failed for N={N}, q1={q1}, C={C}, q={q}, d={d}")
    return j, k


def iter_gamma_words(N: int, q: int) -> Iterator[str]:
    """STWords of gamma_{q,a} for 1 <= a <= q coprime to q, produced on demand."""
    for a in range(1, q + 1):
        if math.gcd(a, q) == 1:
            yield str(matrix_to_stword(gamma_qa(N, q, a)))


def hq_generator_words(N: int, q: int) -> Tuple[List[str], List[str]]:
    """(the four T/W witness matrices, the gamma_{q,a}) as STWords."""
    pairs = tw_in_hq_witnesses(N, q)
    base = [str(matrix_to_stword(M)) for pair in pairs.values() for M in pair]
    return base, list(iter_gamma_words(N, q))


def hq_coset_verify(N: int, q: int, max_cosets: int, batch_size: int = 8,
                    strategy: str = "felsch") -> Verdict:
    """
    Enumerate the cosets of the subgroup generated by the T/W witnesses and the
    gamma_{q,a}, feeding the gammas in doubling batches.

    Any partial set with index equal to [SL_2(Z) : Gamma_q] settles the
    question, since the subgroup lies between the fed set and Gamma_q.
    Gamma words are built only as batches need them. Partial batches run
    under a coset limit of PARTIAL_BATCH_FACTOR times the target index.
    """
    target = index_gamma_q(N, q)
    pairs = tw_in_hq_witnesses(N, q)
    base = [str(matrix_to_stword(M)) for pair in pairs.values() for M in pair]
    total = int(sympy.totient(q))
    gammas = iter_gamma_words(N, q)
    fed: List[str] = []
    size = max(1, batch_size)
    last = None
    while True:
        fed.extend(islice(gammas, size - len(fed)))
        full = len(fed) == total
        limit = max_cosets if full else min(max_cosets, PARTIAL_BATCH_FACTOR * target)
        last = todd_coxeter(base + fed, limit, strategy)
        logger.debug(f"N={N}, q={q}: {len(fed)}/{total} gammas, status {last.status}, index {last.index}")
        if last.complete and last.index == target:
            return Verdict(q=q, status="verified_coset", via="coset", index=last.index,
                           details={"gammas_used": len(fed), **last.to_record()})
        if full:
            break
        size *= 2
    if last.complete:
        logger.warning(f"N={N}, q={q}: coset index {last.index}, expected {target}")
        return Verdict(q=q, status="index_mismatch", via="coset", index=last.index,
                       details={"expected": target, **last.to_record()})
    logger.warning(f"N={N}, q={q}: coset enumeration overflow at {max_cosets} cosets")
    return Verdict(q=q, status="inconclusive", via="coset", details={"expected": target, **last.to_record()})
