"""
Decompositions of matrices into generator words.

matrix_to_stword writes any SL_2(Z) matrix in S and T by nearest-integer
continued fractions.  loggen_decompose writes a Gamma_0(N) matrix, N prime,
as +-(product of T, W and gamma_{r,1}^-1) with at most log2|A| gamma factors.
"""
import logging
import math
from fractions import Fraction
from typing import List, Tuple

import sympy
from pydantic import BaseModel, Field

from ..matcore import Mat2, T, W, gamma_qa, identity, in_gamma0, neg_identity
from .words import STWord, tw_power_text

logger = logging.getLogger(__name__)


def matrix_to_stword(M: Mat2) -> STWord:
    """
    Write M in SL_2(Z) as a word in S, T, T^-1.

    Repeatedly replaces X by S^-1 T^-k X with k the nearest integer to a/c,
    which strictly shrinks the lower-left entry, until X = +-T^b.

    Raises:
        ValueError: If M is not an integral matrix of determinant 1
    """
    if not M.is_integral() or M.det() != 1:
        raise ValueError(f"matrix_to_stword requires an SL_2(Z) matrix, got {M}")
    a, b, c, d = M.to_tuple()
    parts: List[str] = []
    while c != 0:
        k = (2 * a + c) // (2 * c)
        a, b = a - k * c, b - k * d
        # S^-1 = (0 1; -1 0)
        a, b, c, d = c, d, -a, -b
        parts.append(tw_power_text("T", k))
        parts.append("S")
    if a == 1:
        parts.append(tw_power_text("T", b))
    else:
        parts.append("SS")
        parts.append(tw_power_text("T", -b))
    return STWord("".join(parts))


Token = Tuple[str, int]


class LogGenFactorization(BaseModel):
    """Signed product of T^k, W^k and gamma_{r,1}^-1 factors."""
    level: int = Field(..., description="Prime level N")
    sign: int = Field(..., description="+1 or -1")
    factors: List[Token] = Field(default_factory=list,
                                 description="Run-length tokens ('T', k), ('W', k), ('G', r) = gamma_{r,1}^-1")
    gamma_count: int = Field(0, description="Number of gamma factors")

    def evaluate(self) -> Mat2:
        result = identity() if self.sign == 1 else neg_identity()
        for letter, value in self.factors:
            if letter == "T":
                result = result * T() ** value
            elif letter == "W":
                result = result * W(self.level) ** value
            else:
                result = result * gamma_qa(self.level, value, 1).inverse()
        return result

    def to_text(self) -> str:
        parts = ["-I"] if self.sign == -1 else []
        for letter, value in self.factors:
            parts.append(f"g({value},1)^-1" if letter == "G" else f"{letter}^{value}")
        return " ".join(parts) if parts else "I"


def _append(tokens: List[Token], letter: str, value: int) -> None:
    if letter != "G" and tokens and tokens[-1][0] == letter:
        merged = tokens[-1][1] + value
        tokens.pop()
        if merged:
            tokens.append((letter, merged))
    elif letter == "G" or value:
        tokens.append((letter, value))


def _nearest_toward_zero(x: Fraction) -> int:
    lo = math.floor(x)
    frac = x - lo
    if frac > Fraction(1, 2):
        return lo + 1
    if frac < Fraction(1, 2):
        return lo
    return lo if abs(lo) < abs(lo + 1) else lo + 1


def loggen_decompose(N: int, M: Mat2) -> LogGenFactorization:
    """
    Factor M in Gamma_0(N), N prime, using at most log2|A| gamma_{r,1}^-1 factors.

    T-powers reduce A modulo CN, W-powers reduce C modulo A, and when both
    are reduced a left multiplication by gamma_{r,1}, r nearest to CN/A,
    halves |A|.

    Raises:
        ValueError: If N is not prime or M is not in Gamma_0(N)
    """
    if not sympy.isprime(N):
        raise ValueError(f"loggen_decompose requires a prime level, got {N}")
    if not in_gamma0(M, N):
        raise ValueError(f"loggen_decompose requires a matrix in Gamma_0({N})")

    X = M
    tokens: List[Token] = []
    gamma_count = 0
    while X.c != 0:
        A, C = X.a, X.c // N
        if 2 * abs(A) > abs(C * N):
            k = -((2 * A + C * N) // (2 * C * N))
            X = T() ** k * X
            _append(tokens, "T", -k)
            continue
        if 2 * abs(C) > abs(A):
            j = -((2 * C + A) // (2 * A))
            X = W(N) ** j * X
            _append(tokens, "W", -j)
            continue
        r = _nearest_toward_zero(Fraction(C * N, A))
        logger.debug(f"gamma step with r={r} at A={A}, C={C}")
        X = gamma_qa(N, r, 1) * X
        _append(tokens, "G", r)
        gamma_count += 1

    sign = X.a
    _append(tokens, "T", X.a * X.b)
    return LogGenFactorization(level=N, sign=sign, factors=tokens, gamma_count=gamma_count)


def loggen_generators(N: int) -> List[Mat2]:
    """-I, T, W and gamma_{r,1} for 2 <= |r| < N/2; these generate Gamma_0(N) for N prime."""
    if not sympy.isprime(N):
        raise ValueError(f"loggen_generators requires a prime level, got {N}")
    gens = [neg_identity(), T(), W(N)]
    for r in range(2, (N + 1) // 2):
        if 2 * r < N:
            gens.append(gamma_qa(N, r, 1))
            gens.append(gamma_qa(N, -r, 1))
    return gens
