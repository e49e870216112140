"""
Exact determinants over cyclotomic fields and the nonvanishing test for
matrices of partial exponential sums.
"""
import logging
import math
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import mpmath
import numpy as np
import sympy
from pydantic import BaseModel, Field

from .cyclotomic import CycloNumber, cyclo_from_reduced, reduce_group_ring

logger = logging.getLogger(__name__)

Entry = Union[CycloNumber, int, Fraction]


class KeyLemmaPreconditionError(ValueError):
    """An ExpSumMatrix instance outside the hypotheses of the nonvanishing test."""


class PrimesNotDistinctError(KeyLemmaPreconditionError):
    pass


class PrimeDividesMNError(KeyLemmaPreconditionError):
    pass


class SubsetRangeError(KeyLemmaPreconditionError):
    pass


class SubsetOverlapError(KeyLemmaPreconditionError):
    pass


class EmptyDiagonalError(KeyLemmaPreconditionError):
    pass


def _as_cyclo(x: Entry) -> CycloNumber:
    return x if isinstance(x, CycloNumber) else CycloNumber.rational(x)


def exact_det(matrix: Sequence[Sequence[Entry]]) -> CycloNumber:
    """
    Determinant by fraction-free (Bareiss) elimination.

    Entries may be CycloNumbers of different conductors; they are lifted to
    the least common conductor first.

    Raises:
        ValueError: If the matrix is not square
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("exact_det requires a square matrix")
    if n == 0:
        return CycloNumber.rational(1)
    conductor = 1
    for row in matrix:
        for x in row:
            if isinstance(x, CycloNumber):
                conductor = conductor * x.M // math.gcd(conductor, x.M)
    a = [[_as_cyclo(x).embed(conductor) for x in row] for row in matrix]

    sign = 1
    prev = CycloNumber.rational(1, conductor)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return CycloNumber(conductor)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def numeric_det(matrix: Sequence[Sequence[Entry]], dps: int = 40):
    """mpmath determinant of the complex values, used as a cross-check."""
    with mpmath.workdps(dps):
        return mpmath.det(mpmath.matrix([[_as_cyclo(x).to_complex(dps) for x in row] for row in matrix]))


class ExpSumMatrix(BaseModel):
    """
    h x h matrix with entries S_{i,j} = sum_{a in s_{i,j}} e(n a / (m q_j)).
    """
    m: int = Field(..., description="Modulus m >= 1")
    n: int = Field(..., description="Frequency n")
    primes: List[int] = Field(..., description="Column primes q_1..q_h")
    subsets: List[List[List[int]]] = Field(..., description="subsets[i][j] is s_{i,j}, a subset of 1..q_j-1")

    @property
    def h(self) -> int:
        return len(self.primes)

    @property
    def conductor(self) -> int:
        return self.m * math.prod(self.primes)

    def validate_preconditions(self) -> None:
        """
        Raises:
            KeyLemmaPreconditionError: one subclass per violated hypothesis
        """
        h = self.h
        if h == 0:
            raise KeyLemmaPreconditionError("At least one column prime is required")
        if self.m < 1:
            raise KeyLemmaPreconditionError(f"m must be positive, got {self.m}")
        if len(self.subsets) != h or any(len(row) != h for row in self.subsets):
            raise KeyLemmaPreconditionError(f"subsets must form a {h}x{h} array")
        if len(set(self.primes)) != h or not all(sympy.isprime(q) for q in self.primes):
            raise PrimesNotDistinctError(f"Column moduli must be distinct primes, got {self.primes}")
        for q in self.primes:
            if (self.m * self.n) % q == 0:
                raise PrimeDividesMNError(f"q={q} divides m*n={self.m * self.n}")
        for j, q in enumerate(self.primes):
            seen = set()
            for i in range(h):
                s = self.subsets[i][j]
                bad = [a for a in s if not 1 <= a <= q - 1]
                if bad:
                    raise SubsetRangeError(f"s[{i}][{j}] has elements {bad} outside 1..{q - 1}")
                if len(set(s)) != len(s) or seen.intersection(s):
                    raise SubsetOverlapError(f"Subsets in column {j} are not pairwise disjoint")
                seen.update(s)
        for i in range(h):
            if not self.subsets[i][i]:
                raise EmptyDiagonalError(f"Diagonal subset s[{i}][{i}] is empty")

    def entry(self, i: int, j: int) -> CycloNumber:
        q = self.primes[j]
        M = self.m * q
        return CycloNumber.from_powers(M, ((self.n * a, 1) for a in self.subsets[i][j]))

    def matrix(self) -> List[List[CycloNumber]]:
        return [[self.entry(i, j) for j in range(self.h)] for i in range(self.h)]

    def _exponent_pairs(self, i: int, j: int) -> List[Tuple[int, int]]:
        """(alpha mod m, beta mod q_j) with n a/(m q_j) = alpha/m + beta/q_j mod 1."""
        q = self.primes[j]
        u = pow(q, -1, self.m) if self.m > 1 else 0
        v = pow(self.m, -1, q)
        return [((self.n * a * u) % self.m, (self.n * a * v) % q) for a in self.subsets[i][j]]


def _determinant_tensor(spec: ExpSumMatrix) -> np.ndarray:
    """Laplace expansion over row subsets in the group ring Z[Z/m x Z/q_1 x ... x Z/q_h]."""
    h = spec.h
    shape = (spec.m,) + tuple(spec.primes)
    unit = np.zeros(shape, dtype=np.int64)
    unit[(0,) * (h + 1)] = 1
    layer = {0: unit}
    for j in range(h):
        nxt = {}
        for mask, tensor in layer.items():
            for i in range(h):
                if mask >> i & 1 or not spec.subsets[i][j]:
                    continue
                sign = -1 if bin(mask >> (i + 1)).count("1") % 2 else 1
                term = np.zeros_like(tensor)
                for alpha, beta in spec._exponent_pairs(i, j):
                    term += np.roll(np.roll(tensor, alpha, axis=0), beta, axis=j + 1)
                key = mask | 1 << i
                if key in nxt:
                    nxt[key] += sign * term
                else:
                    nxt[key] = sign * term
        layer = nxt
    full = (1 << h) - 1
    return layer.get(full, np.zeros(shape, dtype=np.int64))


def key_det_nonzero(spec: ExpSumMatrix) -> Tuple[CycloNumber, bool]:
    """
    Exact determinant of [S_{i,j}] and whether it is nonzero.

    Returns:
        (determinant at conductor m * prod q_j, nonzero flag)

    Raises:
        KeyLemmaPreconditionError: If the instance violates a hypothesis
    """
    spec.validate_preconditions()
    M = spec.conductor
    tensor = _determinant_tensor(spec)
    weights = [M // spec.m] + [M // q for q in spec.primes]
    keys = np.zeros(tensor.shape, dtype=np.int64)
    for axis, w in enumerate(weights):
        idx = np.arange(tensor.shape[axis], dtype=np.int64) * w
        keys = keys + idx.reshape([-1 if k == axis else 1 for k in range(tensor.ndim)])
    vec = np.zeros(M, dtype=np.int64)
    np.add.at(vec, keys.ravel() % M, tensor.ravel())
    reduced = reduce_group_ring(vec, M)
    nonzero = bool(np.any(reduced))
    if not nonzero:
        logger.error(f"Vanishing key determinant for {spec.model_dump()}")
    return cyclo_from_reduced(reduced, M), nonzero


def random_exp_sum_matrix(rng: np.random.Generator, max_h: int = 4, max_prime: int = 13,
                          max_m: int = 6, max_n: int = 30) -> ExpSumMatrix:
    """Random instance satisfying every precondition."""
    candidates = [p for p in sympy.primerange(2, max_prime + 1)]
    while True:
        h = int(rng.integers(1, max_h + 1))
        m = int(rng.integers(1, max_m + 1))
        n = int(rng.integers(1, max_n + 1))
        pool = [p for p in candidates if (m * n) % p and p - 1 >= h]
        if len(pool) >= h:
            break
    primes = [int(p) for p in rng.choice(pool, size=h, replace=False)]
    subsets: List[List[List[int]]] = [[[] for _ in range(h)] for _ in range(h)]
    for j, q in enumerate(primes):
        residues = [int(a) for a in rng.permutation(np.arange(1, q))]
        # one residue reserved for each diagonal, the rest scattered
        subsets[j][j].append(residues.pop())
        for a in residues:
            owner = int(rng.integers(0, h + 1))
            if owner < h:
                subsets[owner][j].append(a)
    for row in subsets:
        for s in row:
            s.sort()
    return ExpSumMatrix(m=m, n=n, primes=primes, subsets=subsets)
