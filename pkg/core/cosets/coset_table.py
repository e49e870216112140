"""
CosetTable: Todd-Coxeter coset enumeration for subgroups of
SL_2(Z) = <S, T | S^4, S^2 (S T)^3>.

Columns are S, S^-1, T, T^-1 (indices 0..3); the inverse of column x is
x ^ 1.  Undefined entries are -1.  Coincidences are handled with a
union-find parent array and a queue, and the coset-table based (Felsch)
strategy keeps a deduction stack.
"""
import logging
from itertools import chain
from typing import Iterable, List, Optional, Sequence

from pydantic import BaseModel, Field

from ..words import STWord

logger = logging.getLogger(__name__)

UNDEFINED = -1
COLUMN_NAMES = ("S", "S^-1", "T", "T^-1")
_LETTER_COLUMNS = {"S": [0], "T": [2], "t": [3]}

# S^4 and S^2 (S T)^3
RELATORS: List[List[int]] = [[0, 0, 0, 0], [0, 0, 0, 2, 0, 2, 0, 2]]
STRATEGIES = ("felsch", "hlt")


class CosetLimitExceeded(Exception):
    """Raised inside the enumeration when the table would outgrow max_cosets."""


class CosetEnumerationResult(BaseModel):
    """Outcome of one coset enumeration."""
    status: str = Field(..., description="'complete' or 'overflow'")
    index: Optional[int] = Field(None, description="Subgroup index when complete")
    cosets_defined: int = Field(..., description="Total cosets ever defined")
    max_live: int = Field(..., description="Largest number of simultaneously live cosets")
    strategy: str = Field(..., description="Enumeration strategy")
    table: Optional[List[List[int]]] = Field(None, exclude=True, description="Compacted table")

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def to_record(self) -> dict:
        return {
            "index": self.index if self.complete else "overflow",
            "cosets_defined": self.cosets_defined,
            "max_live": self.max_live,
        }


def word_to_columns(word: str) -> List[int]:
    """Column sequence of an STWord after free reduction."""
    return list(chain.from_iterable(_LETTER_COLUMNS[x] for x in STWord.reduce(word)))


def inverse_columns(word: Sequence[int]) -> List[int]:
    return [x ^ 1 for x in reversed(word)]


def relator_conjugates() -> List[List[List[int]]]:
    """Cyclic conjugates of the relators and their inverses, grouped by first column."""
    conjugates = set()
    for rel in RELATORS:
        for w in (rel, inverse_columns(rel)):
            for i in range(len(w)):
                conjugates.add(tuple(w[i:] + w[:i]))
    grouped: List[List[List[int]]] = [[] for _ in range(4)]
    for w in sorted(conjugates):
        grouped[w[0]].append(list(w))
    return grouped


class CosetTable:
    """Coset table under construction; row 0 is the subgroup itself."""

    def __init__(self, subgens: Iterable[str], max_cosets: int):
        if max_cosets < 1:
            raise ValueError(f"max_cosets must be at least 1, got {max_cosets}")
        self.logger = logging.getLogger(__name__)
        self.max_cosets = max_cosets
        self.subgens = [word_to_columns(w) for w in subgens]
        self.table: List[List[int]] = [[UNDEFINED] * 4]
        self.p: List[int] = [0]
        self.deduction_stack: List[tuple] = []
        self.live = 1
        self.max_live = 1
        self.conjugates = relator_conjugates()

    @property
    def omega(self) -> List[int]:
        return [i for i in range(len(self.p)) if self.p[i] == i]

    def define(self, alpha: int, x: int) -> int:
        if len(self.table) >= self.max_cosets:
            raise CosetLimitExceeded(f"more than {self.max_cosets} cosets defined")
        beta = len(self.table)
        self.table.append([UNDEFINED] * 4)
        self.p.append(beta)
        self.table[alpha][x] = beta
        self.table[beta][x ^ 1] = alpha
        self.deduction_stack.append((alpha, x))
        self.live += 1
        self.max_live = max(self.max_live, self.live)
        return beta

    def rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def merge(self, k: int, lamda: int, queue: List[int]) -> None:
        phi = self.rep(k)
        psi = self.rep(lamda)
        if phi != psi:
            mu, v = min(phi, psi), max(phi, psi)
            self.p[v] = mu
            self.live -= 1
            queue.append(v)

    def coincidence(self, alpha: int, beta: int) -> None:
        table = self.table
        queue: List[int] = []
        self.merge(alpha, beta, queue)
        while queue:
            gamma = queue.pop(0)
            for x in range(4):
                delta = table[gamma][x]
                if delta == UNDEFINED:
                    continue
                table[delta][x ^ 1] = UNDEFINED
                self.deduction_stack.append((delta, x ^ 1))
                mu = self.rep(gamma)
                nu = self.rep(delta)
                if table[mu][x] != UNDEFINED:
                    self.merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] != UNDEFINED:
                    self.merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan(self, alpha: int, word: Sequence[int], fill: bool = False) -> None:
        """
        Scan word from alpha forwards and backwards; record a deduction when
        exactly one entry is missing, a coincidence when the scan closes on
        different cosets, and with ``fill`` define new cosets until it closes.
        """
        table = self.table
        f = b = alpha
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] != UNDEFINED:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] != UNDEFINED:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                self.deduction_stack.append((f, word[i]))
                return
            if not fill:
                return
            self.define(f, word[i])

    def process_deductions(self) -> None:
        p = self.p
        table = self.table
        while self.deduction_stack:
            alpha, x = self.deduction_stack.pop()
            if p[alpha] == alpha:
                for w in self.conjugates[x]:
                    self.scan(alpha, w)
                    if p[alpha] != alpha:
                        break
            beta = table[alpha][x]
            if beta != UNDEFINED and p[beta] == beta:
                for w in self.conjugates[x ^ 1]:
                    self.scan(beta, w)
                    if p[beta] != beta:
                        break

    def run_felsch(self) -> None:
        for w in self.subgens:
            self.scan(0, w, fill=True)
            self.process_deductions()
        alpha = 0
        while alpha < len(self.table):
            for x in range(4):
                if self.p[alpha] != alpha:
                    break
                if self.table[alpha][x] == UNDEFINED:
                    self.define(alpha, x)
                    self.process_deductions()
            alpha += 1

    def run_hlt(self) -> None:
        for w in self.subgens:
            self.scan(0, w, fill=True)
        alpha = 0
        while alpha < len(self.table):
            for rel in RELATORS:
                if self.p[alpha] != alpha:
                    break
                self.scan(alpha, rel, fill=True)
            for x in range(4):
                if self.p[alpha] == alpha and self.table[alpha][x] == UNDEFINED:
                    self.define(alpha, x)
            self.deduction_stack.clear()
            alpha += 1

    def audit(self) -> bool:
        """Every relator closes at every live coset and every subgroup word closes at coset 0."""
        table = self.table
        for alpha in self.omega:
            if any(table[alpha][x] == UNDEFINED for x in range(4)):
                return False
            for rel in RELATORS:
                f = alpha
                for x in rel:
                    f = self.rep(table[f][x])
                if f != alpha:
                    return False
        for w in self.subgens:
            f = 0
            for x in w:
                f = self.rep(table[f][x])
            if f != 0:
                return False
        return True

    def repair(self) -> None:
        """Rescan everything with filling until the table closes."""
        changed = True
        while changed:
            before = (len(self.table), self.live)
            for w in self.subgens:
                self.scan(0, w, fill=True)
            alpha = 0
            while alpha < len(self.table):
                if self.p[alpha] == alpha:
                    for rel in RELATORS:
                        self.scan(alpha, rel, fill=True)
                        if self.p[alpha] != alpha:
                            break
                    for x in range(4):
                        if self.p[alpha] == alpha and self.table[alpha][x] == UNDEFINED:
                            self.define(alpha, x)
                self.process_deductions()
                alpha += 1
            changed = (len(self.table), self.live) != before

    def compact(self) -> List[List[int]]:
        """Renumber the live cosets 0..n-1 in order and return the table."""
        live = self.omega
        new_index = {alpha: i for i, alpha in enumerate(live)}
        return [[new_index[self.rep(self.table[alpha][x])] for x in range(4)] for alpha in live]


def todd_coxeter(subgens: Iterable[str], max_cosets: int, strategy: str = "felsch") -> CosetEnumerationResult:
    """
    Index of the subgroup of SL_2(Z) generated by STWords.

    Args:
        subgens: subgroup generators as STWords
        max_cosets: limit on table rows; exceeding it yields status 'overflow'
        strategy: 'felsch' (deduction stack) or 'hlt'

    Returns:
        CosetEnumerationResult

    Raises:
        ValueError: If max_cosets < 1 or the strategy is unknown
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown coset enumeration strategy: {strategy}")
    table = CosetTable(subgens, max_cosets)
    try:
        if strategy == "felsch":
            table.run_felsch()
        else:
            table.run_hlt()
        if not table.audit():
            table.logger.warning("Coset table failed its closure audit, rescanning")
            table.repair()
    except CosetLimitExceeded as e:
        logger.info(f"Coset enumeration overflow: {e}")
        return CosetEnumerationResult(status="overflow", cosets_defined=len(table.table),
                                      max_live=table.max_live, strategy=strategy)
    if not table.audit():
        raise RuntimeError("Coset table does not close after repair")
    compacted = table.compact()
    logger.debug(f"Coset enumeration complete: index {len(compacted)}, {len(table.table)} defined")
    return CosetEnumerationResult(status="complete", index=len(compacted), cosets_defined=len(table.table),
                                  max_live=table.max_live, strategy=strategy, table=compacted)
