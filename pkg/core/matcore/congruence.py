"""
Congruence subgroup membership, canonical gamma_{q,a} matrices and heights.
"""
import math
from fractions import Fraction
from typing import Union

from .matrices import Mat2, Number, inv, mul, normalize_entry, upper


def check_level(N: int) -> int:
    """
    Validate a level.

    Raises:
        ValueError: If N is not a positive integer
    """
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ValueError(f"Level must be a positive integer, got {N!r}")
    return N


def in_gamma0(M: Mat2, N: int) -> bool:
    check_level(N)
    if not M.is_integral() or M.det() != 1:
        return False
    return M.c % N == 0


def in_gamma1(M: Mat2, N: int) -> bool:
    if not in_gamma0(M, N):
        return False
    return (M.a - 1) % N == 0 and (M.d - 1) % N == 0


def symmetric_residue(x: int, modulus: int) -> int:
    """Representative of x modulo |modulus| in (-|modulus|/2, |modulus|/2]."""
    m = abs(modulus)
    if m == 0:
        raise ValueError("modulus must be nonzero")
    r = x % m
    if 2 * r > m:
        r -= m
    return r


def gamma_qa(N: int, q: int, a: int) -> Mat2:
    """
    Canonical element of Gamma_0(N) with top row (q, -a).

    The lower-right entry d is the inverse of q modulo |aN| taken in
    (-|aN|/2, |aN|/2]; the lower-left entry is then forced by det = 1.

    Args:
        N: level
        q: upper-left entry, nonzero
        a: negated upper-right entry

    Returns:
        Mat2 (q, -a; N*c, d)

    Raises:
        ValueError: If q = 0 or gcd(q, aN) != 1
    """
    check_level(N)
    if q == 0:
        raise ValueError("gamma_qa requires q != 0")
    if math.gcd(q, a * N) != 1:
        raise ValueError(f"gamma_qa requires gcd(q, aN) = 1, got q={q}, a={a}, N={N}")
    if a == 0:
        # gcd(q, 0) = |q| = 1 here
        return Mat2(q, 0, 0, q)
    m = abs(a * N)
    d = symmetric_residue(pow(q, -1, m), m) if m > 1 else 0
    c = (1 - q * d) // (a * N)
    return Mat2(q, -a, N * c, d)


def height(M: Mat2, N: int) -> int:
    """
    max(|a|, |b|, |c/N|, |d|) for M in Gamma_0(N).

    Raises:
        ValueError: If M is not in Gamma_0(N)
    """
    if not in_gamma0(M, N):
        raise ValueError(f"height requires a matrix in Gamma_0({N}), got {M}")
    return max(abs(M.a), abs(M.b), abs(M.c) // N, abs(M.d))


def is_elliptic_infinite(M: Mat2) -> bool:
    """
    True when M is elliptic of infinite order: |tr M| < 2 and tr M not an integer.

    Raises:
        ValueError: If det M != 1
    """
    if M.det() != 1:
        raise ValueError("is_elliptic_infinite requires det 1")
    t = Fraction(M.trace())
    return abs(t) < 2 and t.denominator != 1


def twisted_trace(gamma: Mat2, alpha: Number) -> Union[int, Fraction]:
    """Trace of gamma^-1 (1 -alpha; 0 1), which equals A + D + C*alpha."""
    alpha = normalize_entry(alpha)
    return mul(inv(gamma), upper(-alpha)).trace()


def conrey_farmer_matrix(q: int, s: int) -> Mat2:
    """
    gamma_{q,1}^-1 (1 -2/s; 0 1) gamma_{s,1}^-1 (1 -2/q; 0 1) at level N = qs - 1.

    Raises:
        ValueError: If qs - 1 < 1
    """
    N = q * s - 1
    check_level(N)
    g_q = gamma_qa(N, q, 1)
    g_s = gamma_qa(N, s, 1)
    return inv(g_q) * upper(Fraction(-2, s)) * inv(g_s) * upper(Fraction(-2, q))
