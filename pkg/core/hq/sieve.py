"""
Congruence sieve over ranges of q and the divisor-coverage predicate.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from pydantic import BaseModel, Field
from tqdm import tqdm

from ..matcore import check_level
from .witnesses import Witness

logger = logging.getLogger(__name__)

VERDICT_STATUSES = ("verified_sieve", "verified_coset", "index_mismatch", "inconclusive")


class Verdict(BaseModel):
    """Outcome of the H_q check for one q."""
    q: int = Field(..., description="The q examined")
    status: str = Field(..., description="One of verified_sieve, verified_coset, index_mismatch, inconclusive")
    via: Optional[str] = Field(None, description="'sieve' or 'coset'")
    index: Optional[int] = Field(None, description="Coset index when enumerated")
    details: Dict = Field(default_factory=dict, description="Witness ids, uncovered generators or enumeration data")
    error: Optional[str] = Field(None, description="Error raised while checking this q")

    @property
    def verified(self) -> bool:
        return self.status in ("verified_sieve", "verified_coset")

    def to_record(self) -> dict:
        record = {"q": self.q, "status": self.status, "via": self.via}
        if self.index is not None:
            record["index"] = self.index
        if self.details:
            record["details"] = self.details
        if self.error:
            record["error"] = self.error
        return record


def divisor_coverage(n: int, modulus: int) -> bool:
    """
    True iff the positive divisors of |n| meet every unit class modulo modulus.

    Raises:
        ValueError: If n == 0 or modulus < 1
    """
    if n == 0:
        raise ValueError("divisor_coverage is undefined for n = 0")
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    hit = {d % modulus for d in sympy.divisors(abs(n))}
    return all(u in hit for u in range(modulus) if math.gcd(u, modulus) == 1)


def q_domain(N: int, q_lo: int, q_hi: int, primes_only: bool) -> np.ndarray:
    """q in [q_lo, q_hi] coprime to N, optionally prime."""
    if q_lo > q_hi:
        raise ValueError(f"Empty q range [{q_lo}, {q_hi}]")
    lo = max(q_lo, 1)
    if primes_only:
        qs = np.array(list(sympy.primerange(lo, q_hi + 1)), dtype=np.int64)
    else:
        qs = np.arange(lo, q_hi + 1, dtype=np.int64)
    return qs[np.gcd(qs, N) == 1] if len(qs) else qs


def _group_conditions(witnesses: Sequence[Witness], gen_count: int) -> List[List[Tuple[int, int, int, int]]]:
    groups: List[List[Tuple[int, int, int, int]]] = [[] for _ in range(gen_count)]
    seen = set()
    for idx, w in enumerate(witnesses):
        if not 0 <= w.gen_index < gen_count:
            raise ValueError(f"Witness for generator {w.gen_index} outside 0..{gen_count - 1}")
        cond = (w.gen_index, w.modulus, w.residue, abs(w.m))
        if cond in seen:
            continue
        seen.add(cond)
        groups[w.gen_index].append((w.modulus, w.residue, abs(w.m), idx))
    return groups


def _sieve_segment(qs: np.ndarray, groups, N: int) -> List[Verdict]:
    covered = np.ones((len(groups), len(qs)), dtype=bool)
    first_witness = np.full((len(groups), len(qs)), -1, dtype=np.int64)
    for g, conditions in enumerate(groups):
        hit = np.zeros(len(qs), dtype=bool)
        for modulus, residue, m, idx in conditions:
            mask = (qs % modulus == residue) & ~hit
            if m > 1:
                mask &= np.gcd(qs, m) == 1
            first_witness[g, mask] = idx
            hit |= mask
        covered[g] = hit
    verdicts = []
    for k, q in enumerate(qs.tolist()):
        if covered[:, k].all():
            verdicts.append(Verdict(q=q, status="verified_sieve", via="sieve",
                                    details={"witnesses": first_witness[:, k].tolist()}))
        else:
            verdicts.append(Verdict(q=q, status="inconclusive", via="sieve",
                                    details={"uncovered_generators": np.flatnonzero(~covered[:, k]).tolist()}))
    return verdicts


def sieve_q(witnesses: Sequence[Witness], gen_count: int, q_lo: int, q_hi: int, primes_only: bool, N: int,
            segment_size: int = 100_000, max_workers: int = 4) -> List[Verdict]:
    """
    Verdicts for every q in the domain, ordered by q.

    q is verified_sieve iff every generator has a witness with
    q = N m b (mod |r|) and gcd(q, N m) = 1; the rest are inconclusive.

    Raises:
        ValueError: If q_lo > q_hi
    """
    check_level(N)
    qs = q_domain(N, q_lo, q_hi, primes_only)
    groups = _group_conditions(witnesses, gen_count)
    segments = [qs[i:i + segment_size] for i in range(0, len(qs), segment_size)]
    results: Dict[int, List[Verdict]] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_segment = {executor.submit(_sieve_segment, seg, groups, N): k for k, seg in enumerate(segments)}
        for future in tqdm(as_completed(future_to_segment), total=len(segments),
                           desc=f"Sieve N={N}", disable=len(segments) < 2):
            k = future_to_segment[future]
            try:
                results[k] = future.result()
            except Exception as e:
                logger.error(f"Sieve segment {k} for N={N} failed: {str(e)}")
                results[k] = [Verdict(q=int(q), status="inconclusive", error=str(e)) for q in segments[k]]
    verdicts = [v for k in sorted(results) for v in results[k]]
    logger.info(f"N={N}: {sum(v.verified for v in verdicts)}/{len(verdicts)} q verified by sieve")
    return verdicts
