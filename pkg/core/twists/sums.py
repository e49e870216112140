"""
Ramanujan sums, character sums c_chi and Gauss sums, with direct
exponential-sum oracles, and the orthogonality of the c_chi family.
"""
import logging
import math
from typing import List, Tuple

import numpy as np
import sympy

from ..exactalg import CycloNumber, reduce_group_ring
from .characters import DirichletCharacter, all_characters

logger = logging.getLogger(__name__)


def ramanujan_c(q: int, n: int) -> int:
    """c_q(n) = mu(q/g) phi(q) / phi(q/g) with g = gcd(q, n)."""
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    g = math.gcd(q, n)
    return int(sympy.mobius(q // g)) * int(sympy.totient(q)) // int(sympy.totient(q // g))


def ramanujan_c_direct(q: int, n: int) -> int:
    """c_q(n) as the sum of e(an/q) over units a mod q."""
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    total = CycloNumber.from_powers(q, ((a * n, 1) for a in range(q) if math.gcd(a, q) == 1))
    return int(total.to_rational())


def c_chi_direct(chi: DirichletCharacter, n: int) -> CycloNumber:
    """sum over units a mod q of chi(a) e(an/q)."""
    q = chi.modulus
    M = math.lcm(q, chi.L)
    return CycloNumber.from_powers(
        M, ((chi.value_exponent(a) * (M // chi.L) + a * n * (M // q), 1) for a in chi.units()))


def gauss_sum(chi: DirichletCharacter) -> CycloNumber:
    """
    tau(chi) = sum_{a mod q} chi(a) e(a/q).

    Raises:
        ValueError: If chi is not primitive
    """
    if not chi.is_primitive():
        raise ValueError(f"gauss_sum requires a primitive character, {chi} has conductor {chi.conductor}")
    return c_chi_direct(chi, 1)


def c_chi(chi: DirichletCharacter, n: int) -> CycloNumber:
    """
    c_chi(n) through the primitive character.

    Vanishes unless q_2 | n; otherwise with n = m q_2,
    c_chi(n) = q_2 chi_*(q_0) tau(chi_*) mu(q_0) conj(chi_*(m)) mu(g) phi(g), g = gcd(q_0, m).
    """
    q2 = chi.q2
    if n % q2:
        return CycloNumber(1)
    m = n // q2
    q0 = chi.q0
    star = chi.primitive()
    g = math.gcd(q0, m)
    scalar = q2 * int(sympy.mobius(q0)) * int(sympy.mobius(g)) * int(sympy.totient(g))
    if scalar == 0:
        return CycloNumber(1)
    return star(q0) * gauss_sum(star) * star.conj()(m) * scalar


def character_family(Q: int) -> List[DirichletCharacter]:
    """Characters of every modulus d | Q, viewed as functions on Z/Q through c_chi."""
    return [chi for d in sympy.divisors(Q) for chi in all_characters(d)]


def _exponent_table(chi: DirichletCharacter, Q: int, M: int) -> np.ndarray:
    """Exponents k with c_chi(n) = sum_a zeta_M^k, shape (Q, #units)."""
    d = chi.modulus
    units = np.array(chi.units(), dtype=np.int64)
    logs = np.array([chi.value_exponent(int(a)) for a in units], dtype=np.int64) * (M // chi.L)
    n = np.arange(Q, dtype=np.int64)[:, None]
    return (logs[None, :] + n * units[None, :] * (M // d)) % M


def orthogonality_check(Q: int) -> Tuple[bool, int]:
    """
    Exact pairwise orthogonality of {c_chi : chi mod d, d | Q} on Z/Q.

    Every inner product sum_n c_chi(n) conj(c_chi'(n)) is formed in the group
    ring Z[Z/M] from exponent arrays and reduced once.

    Returns:
        (all distinct pairs orthogonal and the family has Q members, family size)
    """
    family = character_family(Q)
    M = math.lcm(Q, int(sympy.reduced_totient(Q))) if Q > 1 else 1
    tables = [_exponent_table(chi, Q, M) for chi in family]
    ok = len(family) == Q
    for i in range(len(family)):
        for j in range(i, len(family)):
            exps = (tables[i][:, :, None] - tables[j][:, None, :]) % M
            vec = np.bincount(exps.ravel(), minlength=M)
            nonzero = bool(np.any(reduce_group_ring(vec, M)))
            if i == j and not nonzero:
                logger.error(f"c_chi for {family[i]} has zero norm on Z/{Q}")
                ok = False
            elif i != j and nonzero:
                logger.error(f"c_chi not orthogonal for {family[i]} and {family[j]} on Z/{Q}")
                ok = False
    return ok, len(family)
