"""
Block form of a nonzero pattern: permutations P, Q with

    P A Q = [[A_hat, 0], [*, *]]

where A_hat is m x m with nonzero diagonal.  The top rows form a minimal
nonempty row set R whose column neighbourhood has at most #R columns.
"""
import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from ..settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

BlockForm = Tuple[int, List[int], List[int]]


def _as_pattern(pattern) -> np.ndarray:
    a = np.asarray(pattern).astype(bool)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"Pattern must be a nonempty square matrix, got shape {a.shape}")
    zero_rows = np.flatnonzero(~a.any(axis=1))
    if zero_rows.size:
        raise ValueError(f"Pattern has zero rows {zero_rows.tolist()}")
    return a


def _neighbours(a: np.ndarray, rows: Sequence[int]) -> Set[int]:
    if not rows:
        return set()
    return set(np.flatnonzero(a[list(rows)].any(axis=0)).tolist())


def max_matching(a: np.ndarray, rows: Sequence[int]) -> Dict[int, int]:
    """Maximum matching row -> column over the given rows, by augmenting paths."""
    col_owner: Dict[int, int] = {}
    adjacency = {r: np.flatnonzero(a[r]).tolist() for r in rows}

    def augment(r: int, visited: Set[int]) -> bool:
        for c in adjacency[r]:
            if c in visited:
                continue
            visited.add(c)
            if c not in col_owner or augment(col_owner[c], visited):
                col_owner[c] = r
                return True
        return False

    for r in rows:
        augment(r, set())
    return {r: c for c, r in col_owner.items()}


def _alternating_reach(a: np.ndarray, rows: Sequence[int], matching: Dict[int, int]) -> Set[int]:
    """Rows reachable from unmatched rows by alternating paths."""
    owner = {c: r for r, c in matching.items()}
    frontier = [r for r in rows if r not in matching]
    reached = set(frontier)
    while frontier:
        r = frontier.pop()
        for c in np.flatnonzero(a[r]).tolist():
            nxt = owner.get(c)
            if nxt is not None and nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    return reached


def _closed_component(a: np.ndarray, rows: Sequence[int], matching: Dict[int, int]) -> Set[int]:
    """
    Smallest nonempty set of rows closed under r -> owner of any column
    adjacent to r; with a perfect matching of rows this is a minimal tight set.
    """
    owner = {c: r for r, c in matching.items()}
    successors = {r: {owner[c] for c in np.flatnonzero(a[r]).tolist()} for r in rows}
    best: Optional[Set[int]] = None
    for start in rows:
        reach = {start}
        stack = [start]
        while stack:
            for nxt in successors[stack.pop()]:
                if nxt not in reach:
                    reach.add(nxt)
                    stack.append(nxt)
        if best is None or len(reach) < len(best):
            best = reach
    return best


def _assemble(n: int, matching: Dict[int, int], block_rows: Sequence[int]) -> BlockForm:
    top = sorted(block_rows)
    P = top + [r for r in range(n) if r not in set(top)]
    top_cols = [matching[r] for r in top]
    Q = top_cols + sorted(set(range(n)) - set(top_cols))
    return len(top), P, Q


def hall_block_form(pattern) -> BlockForm:
    """
    Block form of a square boolean pattern.

    Args:
        pattern: n x n array-like; truthy entries are nonzero

    Returns:
        (m, P, Q) with A[P[i]][Q[i]] != 0 for i < m and A[P[i]][Q[j]] == 0
        for i < m <= j.  m == n exactly when the rows admit a perfect matching.

    Raises:
        ValueError: On a zero row or a non-square pattern
    """
    a = _as_pattern(pattern)
    n = a.shape[0]
    rows = list(range(n))
    matching = max_matching(a, rows)
    if len(matching) == n:
        return n, rows, [matching[r] for r in rows]

    # shrink to a tight set that has a perfect matching into its neighbourhood
    current = rows
    while True:
        matching = max_matching(a, current)
        if len(matching) == len(current):
            break
        reach = _alternating_reach(a, current, matching)
        unmatched = min(r for r in reach if r not in matching)
        current = sorted(reach - {unmatched})

    block = _closed_component(a, current, matching)
    logger.debug(f"Hall block of size {len(block)} in a {n}x{n} pattern")
    return _assemble(n, matching, block)


def hall_block_form_bruteforce(pattern, max_n: int = DEFAULT_SETTINGS["exactalg"]["bruteforce_max_n"]) -> BlockForm:
    """
    Reference block form by subset search over rows, smallest tight set first.

    Raises:
        ValueError: If n > max_n, or on a zero row
    """
    a = _as_pattern(pattern)
    n = a.shape[0]
    if n > max_n:
        raise ValueError(f"Brute-force block form is limited to n <= {max_n}, got {n}")
    rows = list(range(n))
    deficient = any(len(_neighbours(a, s)) < size
                    for size in range(1, n + 1) for s in combinations(rows, size))
    if not deficient:
        matching = max_matching(a, rows)
        return n, rows, [matching[r] for r in rows]
    for size in range(1, n + 1):
        for s in combinations(rows, size):
            if len(_neighbours(a, s)) <= size:
                return _assemble(n, max_matching(a, list(s)), s)
    raise AssertionError("unreachable: the full row set is tight")


def block_form_holds(pattern, form: BlockForm) -> bool:
    """Structural audit of a block form."""
    a = np.asarray(pattern).astype(bool)
    m, P, Q = form
    n = a.shape[0]
    if sorted(P) != list(range(n)) or sorted(Q) != list(range(n)) or not 1 <= m <= n:
        return False
    permuted = a[np.ix_(P, Q)]
    return bool(permuted.diagonal()[:m].all() and not permuted[:m, m:].any())


def is_tight_minimal(pattern, rows: Sequence[int]) -> bool:
    """True when rows is tight and no nonempty proper subset is."""
    a = np.asarray(pattern).astype(bool)
    rows = list(rows)
    if len(_neighbours(a, rows)) > len(rows):
        return False
    return not any(len(_neighbours(a, s)) <= size
                   for size in range(1, len(rows)) for s in combinations(rows, size))


def permutation_sign(perm: Sequence[int]) -> int:
    return Permutation(list(perm)).signature()
