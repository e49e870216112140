"""
Witness search for the inclusion of Gamma_1(N) in H_q.

A witness for a generator g of Gamma_1(N) is a product w1 g^{+-1} w2 with
w1, w2 in <T, W> and top row (r, b), together with a divisor m of (r-1)/N.
Every q coprime to N m with q = N m b (mod |r|) then moves g into H_q.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import sympy
from pydantic import BaseModel, Field
from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential
from tqdm import tqdm

from ..matcore import Mat2, T, check_level, format_matrix
from ..words import TWWordList, Word, eval_word

logger = logging.getLogger(__name__)

_INT64_SAFE = 2 ** 62


class Witness(BaseModel):
    """gamma = eval(left_word) g^{+-1} eval(right_word) with top row (r, b)."""
    level: int = Field(..., description="Level N")
    gen_index: int = Field(..., description="Index of the generator in the generating set")
    r: int = Field(..., description="Top-left entry of gamma, r = 1 mod N")
    b: int = Field(..., description="Top-right entry of gamma")
    m: int = Field(..., description="Divisor of (r - 1)/N")
    left_word: str = Field("", description="w1 as a Word in T, W")
    right_word: str = Field("", description="w2 as a Word in T, W")
    inverse_used: bool = Field(False, description="Whether g^-1 was used")

    @property
    def modulus(self) -> int:
        return abs(self.r)

    @property
    def residue(self) -> int:
        return (self.level * self.m * self.b) % self.modulus

    def admits(self, q: int) -> bool:
        """q = N m b (mod |r|) and gcd(q, N m) = 1."""
        return q % self.modulus == self.residue and sympy.gcd(q, self.level * self.m) == 1

    def gamma(self, generator: Mat2) -> Mat2:
        g = generator.inverse() if self.inverse_used else generator
        return eval_word(Word(self.left_word), self.level) * g * eval_word(Word(self.right_word), self.level)


def generator_fingerprint(gens: Sequence[Mat2]) -> str:
    return hashlib.sha256("|".join(format_matrix(g) for g in gens).encode()).hexdigest()[:16]


def _signed_divisors(k: int, bound: int) -> List[int]:
    if k == 0:
        return [1]
    divs = [d for d in sympy.divisors(abs(k)) if d <= bound]
    return [s * d for d in divs for s in (1, -1)]


def find_witnesses(N: int, gens: Sequence[Mat2], height_bound: int, max_per_gen: int,
                   divisor_bound: int = 10_000, max_r: int = 5000,
                   words: Optional[TWWordList] = None, block_size: int = 256) -> List[Witness]:
    """
    Witnesses for every generator, harvested from w1 g^{+-1} w2 over the
    words of height at most height_bound.

    Candidates are ordered by |r| and deduplicated on (r, b mod |r|); each
    contributes one witness per signed divisor m of (r-1)/N with |m| <= divisor_bound,
    until max_per_gen distinct conditions (|r|, residue, |m|) are collected.

    Returns:
        list of Witness, possibly empty for some generators
    """
    check_level(N)
    L = words if words is not None else TWWordList.build(N, height_bound)
    top, first = np.unique(np.stack([L.a, L.b], axis=1).astype(np.int64), axis=0, return_index=True)
    a2, b2, c2, d2 = (np.asarray(x, dtype=np.int64) for x in (L.a, L.b, L.c, L.d))
    top_max = int(np.abs(top).max()) + 1
    word_max = int(max(np.abs(x).max() for x in (a2, b2, c2, d2))) + 1
    witnesses: List[Witness] = []

    for gen_index, g in enumerate(tqdm(gens, desc=f"Witnesses N={N}", disable=len(gens) < 4)):
        keys = set()
        found: List[Witness] = []
        for inverse_used, h in ((False, g), (True, g.inverse())):
            scale = max(abs(int(x)) for x in h) + 1
            if 4 * top_max * scale * word_max > _INT64_SAFE:
                logger.warning(f"Generator {gen_index} of N={N} too large for int64 witness search, skipped")
                continue
            x = top[:, 0] * h.a + top[:, 1] * h.c
            y = top[:, 0] * h.b + top[:, 1] * h.d
            rows, cols, rs, bs = [], [], [], []
            for start in range(0, len(x), block_size):
                xs, ys = x[start:start + block_size, None], y[start:start + block_size, None]
                r = xs * a2[None, :] + ys * c2[None, :]
                ok = (r != 0) & (np.abs(r) <= max_r)
                if not ok.any():
                    continue
                i, j = np.nonzero(ok)
                b = xs[i, 0] * b2[j] + ys[i, 0] * d2[j]
                rows.append(i + start)
                cols.append(j)
                rs.append(r[i, j])
                bs.append(b)
            if not rs:
                continue
            r = np.concatenate(rs)
            b = np.concatenate(bs)
            i = np.concatenate(rows)
            j = np.concatenate(cols)
            order = np.lexsort((j, i, np.mod(b, np.abs(r)), r, np.abs(r)))
            r, b, i, j = r[order], b[order], i[order], j[order]
            _, unique = np.unique(np.stack([r, np.mod(b, np.abs(r))], axis=1), axis=0, return_index=True)
            unique.sort()
            for k in unique:
                rk, bk = int(r[k]), int(b[k])
                if (rk - 1) % N:
                    continue
                for m in _signed_divisors((rk - 1) // N, divisor_bound):
                    key = (abs(rk), (N * m * bk) % abs(rk), abs(m))
                    if key in keys:
                        continue
                    keys.add(key)
                    found.append(Witness(level=N, gen_index=gen_index, r=rk, b=bk, m=m,
                                         left_word=str(L.word(int(first[i[k]]))), right_word=str(L.word(int(j[k]))),
                                         inverse_used=inverse_used))
                    if len(found) >= max_per_gen:
                        break
                if len(found) >= max_per_gen:
                    break
            if len(found) >= max_per_gen:
                break
        if not found:
            logger.warning(f"No witness for generator {gen_index} of Gamma_1({N}) at height {height_bound}")
        witnesses.extend(found)
    logger.info(f"N={N}: {len(witnesses)} witnesses for {len(gens)} generators from {len(L)} words")
    return witnesses


def replay_witness(witness: Witness, generator: Mat2, q: int) -> Mat2:
    """
    Rebuild gamma T^e h with upper-left entry q, where d = (1 - r)/(N m),
    e = (q d - b)/r and h has left column (q; N m).

    Raises:
        ValueError: If the witness does not reproduce its top row or q does not satisfy it
    """
    N, m = witness.level, witness.m
    gamma = witness.gamma(generator)
    if gamma.top_row() != (witness.r, witness.b):
        raise ValueError(f"Witness reproduces top row {gamma.top_row()}, expected {(witness.r, witness.b)}")
    if (1 - witness.r) % (N * m):
        raise ValueError(f"N*m = {N * m} does not divide 1 - r = {1 - witness.r}")
    d = (1 - witness.r) // (N * m)
    if (q * d - witness.b) % witness.r:
        raise ValueError(f"q={q} does not satisfy the congruence of the witness")
    if sympy.gcd(q, N * m) != 1:
        raise ValueError(f"gcd(q, N*m) != 1 for q={q}, N*m={N * m}")
    e = (q * d - witness.b) // witness.r
    # q y - N m x = 1
    x = (-pow(N * m, -1, q)) % q if q > 1 else 0
    y = (1 + N * m * x) // q
    h = Mat2(q, x, N * m, y)
    product = gamma * (T() ** e) * h
    if product.a != q:
        raise ValueError(f"Replay produced upper-left {product.a}, expected {q}")
    return product


class WitnessCache:
    """JSON store of witnesses keyed by level, generator fingerprint and height bound."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.logger = logging.getLogger(__name__)
        self.entries: Dict[str, List[dict]] = {}
        self.load()

    @staticmethod
    def key(N: int, fingerprint: str, height_bound: int) -> str:
        return f"{N}:{fingerprint}:{height_bound}"

    def load(self) -> None:
        if not self.path.exists():
            return
        try:
            with open(self.path, 'r', encoding='utf-8') as f:
                self.entries = json.load(f).get("entries", {})
        except (json.JSONDecodeError, AttributeError) as e:
            self.logger.error(f"Witness cache {self.path} unreadable, starting empty: {e}")
            self.entries = {}

    def get(self, N: int, fingerprint: str, height_bound: int) -> Optional[List[Witness]]:
        records = self.entries.get(self.key(N, fingerprint, height_bound))
        if records is None:
            return None
        return [Witness(**r) for r in records]

    def put(self, N: int, fingerprint: str, height_bound: int, witnesses: List[Witness]) -> None:
        stale = [k for k in self.entries if k.startswith(f"{N}:") and k.endswith(f":{height_bound}")
                 and k != self.key(N, fingerprint, height_bound)]
        for k in stale:
            self.logger.info(f"Dropping witness cache entry {k}: generator set changed")
            del self.entries[k]
        self.entries[self.key(N, fingerprint, height_bound)] = [w.model_dump() for w in witnesses]
        self.save()

    @retry(stop=stop_after_attempt(3), wait=wait_exponential(multiplier=1, min=1, max=4), retry=retry_if_exception_type(OSError), reraise=True)
    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, 'w', encoding='utf-8') as f:
            json.dump({"entries": self.entries}, f, indent=2)
