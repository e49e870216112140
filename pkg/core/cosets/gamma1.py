"""
Gamma_1(N) coset action, Schreier generators and congruence subgroup indices.
"""
import hashlib
import logging
import math
from collections import deque
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import sympy
from pydantic import BaseModel, Field

from ..matcore import Mat2, W, check_level, in_gamma1
from ..words import STWord, eval_word, matrix_to_stword
from .coset_table import RELATORS, todd_coxeter

logger = logging.getLogger(__name__)

Label = Tuple[int, int]

PRUNE_COSET_FACTOR = 16


def index_gamma0(N: int) -> int:
    """[SL_2(Z) : Gamma_0(N)] = N * prod_{p | N} (1 + 1/p)."""
    check_level(N)
    index = N
    for p in sympy.primefactors(N):
        index = index // p * (p + 1)
    return index


def index_gamma1(N: int) -> int:
    """[SL_2(Z) : Gamma_1(N)] = N^2 * prod_{p | N} (1 - 1/p^2)."""
    return index_gamma0(N) * int(sympy.totient(N))


def index_gamma_q(N: int, q: int) -> int:
    """
    Index of Gamma_q = {A = q^n mod N} in SL_2(Z).

    Raises:
        ValueError: If gcd(q, N) != 1
    """
    check_level(N)
    if math.gcd(q, N) != 1:
        raise ValueError(f"index_gamma_q requires gcd(q, N) = 1, got q={q}, N={N}")
    if N == 1:
        return 1
    order = int(sympy.n_order(q % N, N))
    return index_gamma0(N) * int(sympy.totient(N)) // order


class Gamma1CosetAction:
    """
    Right action of S and T on the cosets Gamma_1(N) g, labelled by the
    bottom row of g modulo N.
    """

    def __init__(self, N: int):
        self.N = check_level(N)
        start = (0, 1 % N)
        self.labels: List[Label] = [start]
        self.index: Dict[Label, int] = {start: 0}
        self.perm_S: List[int] = []
        self.perm_T: List[int] = []
        queue = deque([0])
        pending_S: Dict[int, int] = {}
        pending_T: Dict[int, int] = {}
        while queue:
            i = queue.popleft()
            for image, pending in ((self.act_S(self.labels[i]), pending_S), (self.act_T(self.labels[i]), pending_T)):
                if image not in self.index:
                    self.index[image] = len(self.labels)
                    self.labels.append(image)
                    queue.append(self.index[image])
                pending[i] = self.index[image]
        self.perm_S = [pending_S[i] for i in range(len(self.labels))]
        self.perm_T = [pending_T[i] for i in range(len(self.labels))]
        self.perm_T_inv: List[int] = [0] * len(self.labels)
        for i, image in enumerate(self.perm_T):
            self.perm_T_inv[image] = i

    def act_S(self, label: Label) -> Label:
        c, d = label
        return (d % self.N, -c % self.N)

    def act_T(self, label: Label) -> Label:
        c, d = label
        return (c % self.N, (c + d) % self.N)

    def __len__(self) -> int:
        return len(self.labels)

    def apply(self, coset: int, word: str) -> int:
        """Image of a coset under an STWord."""
        for letter in STWord.reduce(word):
            if letter == "S":
                coset = self.perm_S[coset]
            elif letter == "T":
                coset = self.perm_T[coset]
            else:
                coset = self.perm_T_inv[coset]
        return coset


def gamma1_coset_action(N: int) -> Gamma1CosetAction:
    return Gamma1CosetAction(N)


class Gamma1Generators(BaseModel):
    """A certified generating set of Gamma_1(N)."""
    level: int = Field(..., description="Level N")
    index: int = Field(..., description="[SL_2(Z) : Gamma_1(N)]")
    words: List[str] = Field(..., description="Generators as STWords")
    certified: bool = Field(..., description="Coset enumeration reproduced the index")
    schreier_count: int = Field(..., description="Nontrivial Schreier generators before elimination")

    def matrices(self) -> List[Mat2]:
        return [eval_word(STWord(w)) for w in self.words]

    def fingerprint(self) -> str:
        return hashlib.sha256("|".join(self.words).encode()).hexdigest()[:16]


def _free_reduce(rel: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    stack: List[Tuple[int, int]] = []
    for g, e in rel:
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((g, e))
    while len(stack) >= 2 and stack[0][0] == stack[-1][0] and stack[0][1] == -stack[-1][1]:
        stack = stack[1:-1]
    return stack


def _canonical_cycle(rel: List[Tuple[int, int]]) -> tuple:
    if not rel:
        return ()
    return min(tuple(rel[i:] + rel[:i]) for i in range(len(rel)))


def _tietze_eliminate(relations: List[List[Tuple[int, int]]], generators: List[int],
                      cost: Dict[int, int], max_length: int) -> List[int]:
    """
    Drop generators that occur exactly once in some relation, substituting
    the relation into the others, until no such generator remains.
    """
    alive = set(generators)
    relations = [r for r in relations if r]
    progress = True
    while progress:
        progress = False
        relations.sort(key=len)
        for k, rel in enumerate(relations):
            counts: Dict[int, int] = {}
            for g, _ in rel:
                counts[g] = counts.get(g, 0) + 1
            singles = sorted((g for g, n in counts.items() if n == 1), key=lambda g: -cost[g])
            for g in singles:
                pos = next(i for i, (h, _) in enumerate(rel) if h == g)
                e = rel[pos][1]
                rest = rel[pos + 1:] + rel[:pos]
                # g^e * rest = 1, so g = rest^(-e)
                if e == 1:
                    replacement = [(h, -f) for h, f in reversed(rest)]
                else:
                    replacement = list(rest)
                inverse_replacement = [(h, -f) for h, f in reversed(replacement)]
                updated = []
                too_long = False
                for j, other in enumerate(relations):
                    if j == k:
                        continue
                    new = []
                    for h, f in other:
                        if h == g:
                            new.extend(replacement if f == 1 else inverse_replacement)
                        else:
                            new.append((h, f))
                    new = _free_reduce(new)
                    if len(new) > max_length:
                        too_long = True
                        break
                    if new:
                        updated.append(new)
                if too_long:
                    continue
                alive.discard(g)
                unique = {_canonical_cycle(r): r for r in updated}
                relations = list(unique.values())
                progress = True
                break
            if progress:
                break
    return sorted(alive)


def schreier_generators(N: int, max_cosets: int = 2_000_000, prune: bool = True,
                        max_relation_length: int = 400) -> Gamma1Generators:
    """
    Generating set of Gamma_1(N) from its coset action on SL_2(Z).

    Builds a breadth-first spanning tree of the coset graph, forms the
    Schreier generators u_c x u_{cx}^-1, eliminates redundant ones with the
    relations obtained by tracing each relator from each coset, adds T and W,
    and, with ``prune``, greedily drops generators whose removal keeps the
    coset enumeration index.

    Raises:
        RuntimeError: If the final set does not enumerate to the expected index
    """
    action = gamma1_coset_action(N)
    n = len(action)
    tree: List[Optional[str]] = [None] * n
    tree[0] = ""
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for letter, perm in (("S", action.perm_S), ("T", action.perm_T)):
            image = perm[c]
            if tree[image] is None:
                tree[image] = tree[c] + letter
                queue.append(image)

    generator_words: Dict[int, str] = {}
    edge_generator: Dict[Tuple[int, str], Optional[int]] = {}
    for c in range(n):
        for letter, perm in (("S", action.perm_S), ("T", action.perm_T)):
            image = perm[c]
            if tree[image] == tree[c] + letter:
                edge_generator[(c, letter)] = None
                continue
            word = STWord.reduce(tree[c] + letter + STWord(tree[image]).inverse())
            if not word:
                edge_generator[(c, letter)] = None
                continue
            gid = len(generator_words)
            generator_words[gid] = word
            edge_generator[(c, letter)] = gid

    relations: List[List[Tuple[int, int]]] = []
    seen = set()
    for c in range(n):
        for rel in RELATORS:
            traced: List[Tuple[int, int]] = []
            coset = c
            for col in rel:
                letter = "S" if col == 0 else "T"
                gid = edge_generator[(coset, letter)]
                if gid is not None:
                    traced.append((gid, 1))
                coset = action.perm_S[coset] if col == 0 else action.perm_T[coset]
            traced = _free_reduce(traced)
            key = _canonical_cycle(traced)
            if traced and key not in seen:
                seen.add(key)
                relations.append(traced)

    cost = {g: len(w) for g, w in generator_words.items()}
    kept = _tietze_eliminate(relations, list(generator_words), cost, max_relation_length)
    logger.info(f"Gamma_1({N}): {len(generator_words)} Schreier generators, {len(kept)} after elimination")

    base = [STWord("T"), matrix_to_stword(W(N))]
    words = base + [generator_words[g] for g in kept]
    expected = index_gamma1(N)

    if prune:
        # a trial that overflows keeps its generator
        trial_limit = min(max_cosets, PRUNE_COSET_FACTOR * expected)
        candidates = sorted(range(len(base), len(words)), key=lambda i: -len(words[i]))
        removed = set()
        for i in candidates:
            trial = [w for j, w in enumerate(words) if j != i and j not in removed]
            result = todd_coxeter(trial, trial_limit)
            if result.complete and result.index == expected:
                removed.add(i)
        words = [w for j, w in enumerate(words) if j not in removed]

    result = todd_coxeter(words, max_cosets)
    certified = result.complete and result.index == expected
    if not certified:
        raise RuntimeError(f"Gamma_1({N}) generators enumerate to {result.to_record()}, expected index {expected}")
    for w in words:
        if not in_gamma1(eval_word(STWord(w)), N):
            raise RuntimeError(f"Schreier word {w} is not in Gamma_1({N})")
    return Gamma1Generators(level=N, index=expected, words=[str(w) for w in words],
                            certified=certified, schreier_count=len(generator_words))


@lru_cache(maxsize=32)
def cached_schreier_generators(N: int, max_cosets: int = 2_000_000,
                               max_relation_length: int = 400) -> Gamma1Generators:
    """schreier_generators, computed once per (N, max_cosets, max_relation_length) in this process."""
    return schreier_generators(N, max_cosets=max_cosets, max_relation_length=max_relation_length)
