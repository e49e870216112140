"""
HqVerifier: witnesses, congruence sieve and coset fallback over a range of q.
"""
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Union

from tqdm import tqdm

from ..cosets import cached_schreier_generators
from ..settings import DEFAULT_SETTINGS, SettingsManager
from .coset_check import hq_coset_verify
from .sieve import Verdict, sieve_q
from .witnesses import Witness, WitnessCache, find_witnesses, generator_fingerprint


class TableRow(NamedTuple):
    """q ranges for which H_q contains Gamma_1(N) was established."""
    level: int
    coprime: tuple
    prime: tuple


_BILLION = 10 ** 9

# (N, coprime interval, prime interval); 0 as a lower end means "from the start"
EXPLICIT_Q_TABLE: Dict[int, TableRow] = {row.level: row for row in (
    TableRow(5, (44, _BILLION), (0, _BILLION)),
    TableRow(6, (1, _BILLION), (0, _BILLION)),
    TableRow(7, (20, _BILLION), (0, _BILLION)),
    TableRow(8, (15, _BILLION), (7, _BILLION)),
    TableRow(9, (136, _BILLION), (2, _BILLION)),
    TableRow(10, (39, _BILLION), (11, _BILLION)),
    TableRow(11, (84, _BILLION), (2, _BILLION)),
    TableRow(12, (35, _BILLION), (23, _BILLION)),
    TableRow(13, (168, _BILLION), (5, _BILLION)),
    TableRow(14, (55, _BILLION), (43, _BILLION)),
    TableRow(15, (91, _BILLION), (31, _BILLION)),
    TableRow(16, (63, _BILLION), (47, _BILLION)),
    TableRow(17, (390, 10 ** 5), (101, _BILLION)),
    TableRow(18, (55, _BILLION), (53, _BILLION)),
    TableRow(19, (360, 10 ** 5), (37, _BILLION)),
    TableRow(20, (119, 10 ** 5), (79, _BILLION)),
    TableRow(21, (230, 10 ** 5), (83, _BILLION)),
    TableRow(22, (175, 10 ** 5), (43, _BILLION)),
)}


class HqVerifier:
    """Decide H_q >= Gamma_1(N) for every q of a range."""

    def __init__(self,
                 settings: Optional[SettingsManager] = None,
                 witness_cache: Optional[Union[str, Path]] = None,
                 max_workers: Optional[int] = None):
        """
        Initialize the verifier.

        Args:
            settings: run settings; the built-in defaults when None
            witness_cache: JSON file for witnesses, no caching when None
            max_workers: threads for sieve segments and coset checks
        """
        self.logger = logging.getLogger(__name__)
        self.config = settings.section("hq") if settings else dict(DEFAULT_SETTINGS["hq"])
        cosets = settings.section("cosets") if settings else dict(DEFAULT_SETTINGS["cosets"])
        self.max_cosets_schreier = cosets["max_cosets"]
        self.max_relation_length = cosets["max_relation_length"]
        self.max_workers = max_workers or self.config["max_workers"]
        self.cache = WitnessCache(witness_cache) if witness_cache else None

    def witnesses(self, N: int, height_bound: Optional[int] = None) -> tuple:
        """
        Generators of Gamma_1(N) and their witnesses, from the cache when possible.

        Returns:
            (list of Mat2, list of Witness)
        """
        height_bound = height_bound or self.config["witness_height_bound"]
        gens = cached_schreier_generators(N, self.max_cosets_schreier, self.max_relation_length).matrices()
        fingerprint = generator_fingerprint(gens)
        if self.cache is not None:
            cached = self.cache.get(N, fingerprint, height_bound)
            if cached is not None:
                self.logger.info(f"N={N}: {len(cached)} witnesses from cache")
                return gens, cached
        found = find_witnesses(N, gens, height_bound, self.config["max_per_gen"],
                               divisor_bound=self.config["divisor_bound"], max_r=self.config["max_witness_r"])
        if self.cache is not None:
            self.cache.put(N, fingerprint, height_bound, found)
        return gens, found

    def verify(self, N: int, q_lo: int, q_hi: int, primes_only: bool = False,
               height_bound: Optional[int] = None, max_cosets: Optional[int] = None,
               fallback_q_max: Optional[int] = None) -> List[Verdict]:
        """
        Verdicts for every q in [q_lo, q_hi] coprime to N (and prime if asked), ordered by q.

        Raises:
            ValueError: If q_lo > q_hi
        """
        if q_lo > q_hi:
            raise ValueError(f"Empty q range [{q_lo}, {q_hi}]")
        gens, found = self.witnesses(N, height_bound)
        verdicts = sieve_q(found, len(gens), q_lo, q_hi, primes_only, N,
                           segment_size=self.config["segment_size"], max_workers=self.max_workers)
        # a bound of 0 sends every uncovered q to the fallback
        bound = self.config["coset_fallback_q_max"] if fallback_q_max is None else fallback_q_max
        pending = [v.q for v in verdicts
                   if v.status == "inconclusive" and v.error is None and (not bound or v.q <= bound)]
        if pending:
            fallback = self._coset_fallback(N, pending, max_cosets or self.config["coset_max_cosets"])
            verdicts = [fallback.get(v.q, v) for v in verdicts]
        unresolved = [v.q for v in verdicts if not v.verified]
        if unresolved:
            self.logger.warning(f"N={N}: {len(unresolved)} q not verified, first {unresolved[:10]}")
        return sorted(verdicts, key=lambda v: v.q)

    def _coset_fallback(self, N: int, qs: List[int], max_cosets: int) -> Dict[int, Verdict]:
        results: Dict[int, Verdict] = {}
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_q = {
                executor.submit(hq_coset_verify, N, q, max_cosets, self.config["coset_batch_size"]): q
                for q in qs
            }
            for future in tqdm(as_completed(future_to_q), total=len(qs), desc=f"Coset fallback N={N}"):
                q = future_to_q[future]
                try:
                    results[q] = future.result()
                except Exception as e:
                    self.logger.error(f"Coset check for N={N}, q={q} failed: {str(e)}")
                    results[q] = Verdict(q=q, status="inconclusive", via="coset", error=str(e))
        return results

    def table_slice(self, N: int, q_to: int, height_bound: Optional[int] = None) -> Dict[str, List[Verdict]]:
        """
        Desk slice of one EXPLICIT_Q_TABLE row: both intervals cut at q_to.

        Raises:
            ValueError: If N has no table row
        """
        if N not in EXPLICIT_Q_TABLE:
            raise ValueError(f"No explicit-q table row for N={N}; rows exist for {sorted(EXPLICIT_Q_TABLE)}")
        row = EXPLICIT_Q_TABLE[N]
        out = {}
        for name, (lo, hi), primes_only in (("coprime", row.coprime, False), ("prime", row.prime, True)):
            lo, hi = max(lo, 1), min(hi, q_to)
            out[name] = self.verify(N, lo, hi, primes_only, height_bound) if lo <= hi else []
        return out


def verify_hq(N: int, q_lo: int, q_hi: int, primes_only: bool = False,
              height_bound: Optional[int] = None, max_cosets: Optional[int] = None,
              witness_cache: Optional[Union[str, Path]] = None,
              settings: Optional[SettingsManager] = None) -> List[Verdict]:
    """Witnesses (cached), sieve, then coset fallback; verdicts ordered by q."""
    verifier = HqVerifier(settings=settings, witness_cache=witness_cache)
    return verifier.verify(N, q_lo, q_hi, primes_only, height_bound, max_cosets)
