"""
TWWordList: breadth-first enumeration of reduced words in T and W.

For N >= 4 the height of a reduced word never drops when a letter is
appended, so any prefix above the bound can be pruned and the result is
exactly the set of reduced words of bounded height.  For N <= 3 that fails
(T and W satisfy (W^-1 T)^12 = I), and enumeration instead runs to a fixed
length with a visited-matrix set.
"""
import logging
from typing import Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..matcore import Mat2, check_level
from .words import Word

logger = logging.getLogger(__name__)

LETTERS = "TtWw"
INVERSE_LETTER = np.array([1, 0, 3, 2], dtype=np.int8)
NO_LETTER = -1


def _apply_letter(letter: int, a, b, c, d, N: int):
    """Right multiplication by T, T^-1, W or W^-1 on entry arrays."""
    if letter == 0:
        return a, a + b, c, c + d
    if letter == 1:
        return a, b - a, c, d - c
    if letter == 2:
        return a + N * b, b, c + N * d, d
    return a - N * b, b, c - N * d, d


def _heights(a, b, c, d, N: int):
    return np.maximum(np.maximum(np.abs(a), np.abs(b)), np.maximum(np.abs(c) // N, np.abs(d)))


class TWWordList:
    """
    Words of bounded height in <T, W>, stored as parallel arrays.

    Node arrays cover every enumerated word; ``kept`` marks the ones that
    belong to the list (all of them for N >= 4).
    """

    def __init__(self, N: int, height_bound: int, a, b, c, d, letter, parent, kept):
        self.N = N
        self.height_bound = height_bound
        self._letter = letter
        self._parent = parent
        self._index = np.flatnonzero(kept)
        self.a = a[self._index]
        self.b = b[self._index]
        self.c = c[self._index]
        self.d = d[self._index]

    @classmethod
    def build(cls, N: int, height_bound: int, max_length: Optional[int] = None) -> "TWWordList":
        """
        Enumerate words by length, letters in the order T, t, W, w.

        Args:
            N: level
            height_bound: largest height kept
            max_length: optional cap on word length; required in effect for
                N <= 3, where it defaults to 12

        Raises:
            ValueError: If the level or bound is invalid
        """
        check_level(N)
        if height_bound < 1:
            raise ValueError(f"height_bound must be at least 1, got {height_bound}")
        if N <= 3:
            return cls._build_small_level(N, height_bound, 12 if max_length is None else max_length)
        return cls._build_pruned(N, height_bound, max_length)

    @classmethod
    def _build_pruned(cls, N: int, height_bound: int, max_length: Optional[int]) -> "TWWordList":
        one = np.ones(1, dtype=np.int64)
        zero = np.zeros(1, dtype=np.int64)
        levels = [(one, zero, zero.copy(), one.copy(), np.full(1, NO_LETTER, dtype=np.int8), np.full(1, -1, dtype=np.int64))]
        offset = 0
        length = 0
        while max_length is None or length < max_length:
            a, b, c, d, last, _ = levels[-1]
            if len(a) == 0:
                break
            parents = np.arange(len(a), dtype=np.int64) + offset
            pieces = []
            for letter in range(4):
                allowed = last != INVERSE_LETTER[letter]
                na, nb, nc, nd = _apply_letter(letter, a[allowed], b[allowed], c[allowed], d[allowed], N)
                ok = _heights(na, nb, nc, nd, N) <= height_bound
                pieces.append((na[ok], nb[ok], nc[ok], nd[ok],
                               np.full(int(ok.sum()), letter, dtype=np.int8), parents[allowed][ok]))
            na, nb, nc, nd, nl, npar = (np.concatenate(col) for col in zip(*pieces))
            order = np.lexsort((nl, npar))
            offset += len(a)
            length += 1
            levels.append((na[order], nb[order], nc[order], nd[order], nl[order], npar[order]))
            logger.debug(f"N={N} length {length}: {len(order)} words")
        a, b, c, d, letter, parent = (np.concatenate(col) for col in zip(*levels))
        kept = np.ones(len(a), dtype=bool)
        return cls(N, height_bound, a, b, c, d, letter, parent, kept)

    @classmethod
    def _build_small_level(cls, N: int, height_bound: int, max_length: int) -> "TWWordList":
        nodes: List[Tuple[int, int, int, int]] = [(1, 0, 0, 1)]
        letters: List[int] = [NO_LETTER]
        parents: List[int] = [-1]
        seen = {nodes[0]}
        frontier = [0]
        for _ in range(max_length):
            next_frontier = []
            for i in frontier:
                a, b, c, d = nodes[i]
                for letter in range(4):
                    if letters[i] == INVERSE_LETTER[letter]:
                        continue
                    child = _apply_letter(letter, a, b, c, d, N)
                    if child in seen:
                        continue
                    seen.add(child)
                    nodes.append(child)
                    letters.append(letter)
                    parents.append(i)
                    next_frontier.append(len(nodes) - 1)
            frontier = next_frontier
        arr = np.array(nodes, dtype=np.int64 if (N + 2) ** max_length < 2 ** 62 else object)
        a, b, c, d = (arr[:, k] for k in range(4))
        kept = np.array([max(abs(x), abs(y), abs(z) // N, abs(w)) <= height_bound for x, y, z, w in nodes])
        return cls(N, height_bound, a, b, c, d,
                   np.array(letters, dtype=np.int8), np.array(parents, dtype=np.int64), kept)

    def __len__(self) -> int:
        return len(self._index)

    def word(self, i: int) -> Word:
        """Word of the i-th kept entry."""
        node = int(self._index[i])
        out = []
        while self._parent[node] >= 0:
            out.append(LETTERS[self._letter[node]])
            node = int(self._parent[node])
        return Word("".join(reversed(out)))

    def matrix(self, i: int) -> Mat2:
        return Mat2(int(self.a[i]), int(self.b[i]), int(self.c[i]), int(self.d[i]))

    def __iter__(self) -> Iterator[Tuple[Word, Mat2]]:
        for i in range(len(self)):
            yield self.word(i), self.matrix(i)


def enumerate_tw(N: int, height_bound: int, max_length: Optional[int] = None) -> Iterator[Tuple[Word, Mat2]]:
    """Yield (Word, Mat2) for the reduced words of height at most height_bound."""
    return iter(TWWordList.build(N, height_bound, max_length))


def count_tw(N: int, height_bound: int, max_length: Optional[int] = None) -> int:
    return len(TWWordList.build(N, height_bound, max_length))


class HeightAudit(BaseModel):
    """Result of an exhaustive pass over all reduced words up to a length."""
    level: int = Field(..., description="Level N")
    max_length: int = Field(..., description="Longest word length checked")
    words_checked: int = Field(..., description="Number of nonempty reduced words visited")
    monotonicity_violations: int = Field(0, description="Words whose height is below their prefix's")
    first_violation: Optional[str] = Field(None, description="Shortest violating word, if any")
    identity_words: List[str] = Field(default_factory=list, description="Nonempty words evaluating to I")

    @property
    def passed(self) -> bool:
        return self.monotonicity_violations == 0 and not self.identity_words


def audit_height_levels(N: int, max_length: int) -> HeightAudit:
    """
    Check height monotonicity and freeness over every reduced word up to max_length.

    Only the prefix inequality is tested; the suffix inequality follows
    because the inverse of a reduced word is reduced and has the same height.
    """
    check_level(N)
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    dtype = np.int64 if (N + 2) ** max_length < 2 ** 62 else object
    a = np.ones(1, dtype=dtype)
    b = np.zeros(1, dtype=dtype)
    c = np.zeros(1, dtype=dtype)
    d = np.ones(1, dtype=dtype)
    last = np.full(1, NO_LETTER, dtype=np.int8)
    h = np.ones(1, dtype=dtype)
    level_letters = [np.full(1, NO_LETTER, dtype=np.int8)]
    level_parents = [np.full(1, -1, dtype=np.int64)]

    def spell(level_no: int, idx: int) -> str:
        out = []
        while level_no > 0:
            out.append(LETTERS[level_letters[level_no][idx]])
            idx = int(level_parents[level_no][idx])
            level_no -= 1
        return "".join(reversed(out))

    audit = HeightAudit(level=N, max_length=max_length, words_checked=0)
    for length in range(1, max_length + 1):
        pieces = []
        for letter in range(4):
            allowed = np.flatnonzero(last != INVERSE_LETTER[letter])
            na, nb, nc, nd = _apply_letter(letter, a[allowed], b[allowed], c[allowed], d[allowed], N)
            pieces.append((na, nb, nc, nd, np.full(len(allowed), letter, dtype=np.int8), allowed))
        na, nb, nc, nd, nl, npar = (np.concatenate(col) for col in zip(*pieces))
        nh = _heights(na, nb, nc, nd, N)
        level_letters.append(nl)
        level_parents.append(npar)

        bad = np.flatnonzero(nh < h[npar])
        if len(bad):
            if audit.first_violation is None:
                audit.first_violation = spell(length, int(bad[0]))
            audit.monotonicity_violations += len(bad)
        ident = np.flatnonzero((na == 1) & (nb == 0) & (nc == 0) & (nd == 1))
        for idx in ident[:10]:
            audit.identity_words.append(spell(length, int(idx)))
        audit.words_checked += len(na)
        a, b, c, d, last, h = na, nb, nc, nd, nl, nh

    if not audit.passed:
        logger.warning(f"Height audit at N={N} found {audit.monotonicity_violations} violations "
                       f"and {len(audit.identity_words)} identity words")
    return audit
