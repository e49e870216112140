"""
The ratio D_{f,chi} of the c_chi-twisted and chi_*-twisted Dirichlet series,
its closed form, its reflection identity and a brute-force convolution oracle.
"""
import logging
import math
from typing import Optional

import mpmath
import numpy as np
import sympy
from pydantic import BaseModel, Field

from ..exactalg import CycloNumber
from .characters import DirichletCharacter
from .dirichlet_poly import DirichletPolynomial
from .hecke import HeckeCoefficients
from .sums import c_chi

logger = logging.getLogger(__name__)


def build_D(h: HeckeCoefficients, chi: DirichletCharacter) -> DirichletPolynomial:
    """
    Closed form of D_{f,chi}:

        prod_{p | q_*} lambda_{p^a} p^{a(1-s)},  a = ord_p(q/q_*)
        * prod_{p | q, p not | q_*} p^{(o-1)(1-s)} [ lambda_{p^o} p^{1-s} + lambda_{p^(o-2)} xi(p) p^{-s}
              - lambda_{p^(o-1)} (chi_*(p) + xi(p) conj(chi_*(p)) p^{1-2s}) ],  o = ord_p(q)

    with lambda at negative powers taken as zero.

    Raises:
        ValueError: If gcd(q, N) != 1 or coefficient data is missing
    """
    q = chi.modulus
    if math.gcd(q, h.N) != 1:
        raise ValueError(f"build_D requires gcd(q, N) = 1, got q={q}, N={h.N}")
    q_star = chi.conductor
    star = chi.primitive()
    D = DirichletPolynomial.constant(1)
    for p, o in sorted(sympy.factorint(q).items()):
        if q_star % p == 0:
            a = o - sympy.multiplicity(p, q_star)
            if a:
                D = D * DirichletPolynomial.monomial(h.prime_power(p, a) * p ** a, {p: a})
            continue
        xi_p = h.xi(p)
        chi_p = star(p)
        bracket = (DirichletPolynomial.monomial(h.prime_power(p, o) * p, {p: 1})
                   + DirichletPolynomial.monomial(h.prime_power(p, o - 2) * xi_p, {p: 1})
                   - DirichletPolynomial.constant(h.prime_power(p, o - 1) * chi_p)
                   - DirichletPolynomial.monomial(h.prime_power(p, o - 1) * xi_p * star.conj()(p) * p, {p: 2}))
        D = D * DirichletPolynomial.monomial(p ** (o - 1), {p: o - 1}) * bracket
    return D


def reflection_factor(q: int, q_star: int, xi: DirichletCharacter) -> DirichletPolynomial:
    """(q/q_*)^{1-2s} xi(q/q_*) as a monomial."""
    r = q // q_star
    exps = {p: 2 * e for p, e in sympy.factorint(r).items()}
    return DirichletPolynomial.monomial(xi(r) * r, exps)


def check_fe(Df: DirichletPolynomial, Dg: DirichletPolynomial, q: int, q_star: int,
             xi: DirichletCharacter, rng: Optional[np.random.Generator] = None,
             points: int = 3, dps: int = 30) -> bool:
    """
    Exact test of Df(s) = (q/q_*)^{1-2s} xi(q/q_*) Dg(1-s), with a numeric
    guard at random complex points.

    Raises:
        ValueError: If q_* does not divide q or a polynomial involves primes not dividing q
    """
    if q % q_star:
        raise ValueError(f"Conductor {q_star} does not divide {q}")
    support = set(sympy.primefactors(q))
    for name, D in (("Df", Df), ("Dg", Dg)):
        stray = D.primes() - support
        if stray:
            raise ValueError(f"{name} involves primes {sorted(stray)} not dividing {q}")
    rhs = reflection_factor(q, q_star, xi) * Dg.reflect()
    exact = Df == rhs
    if points:
        rng = rng if rng is not None else np.random.default_rng(0)
        with mpmath.workdps(dps):
            for _ in range(points):
                s = mpmath.mpc(float(rng.uniform(-2, 3)), float(rng.uniform(-10, 10)))
                left, right = Df.evaluate(s, dps), rhs.evaluate(s, dps)
                scale = max(mpmath.mpf(1), abs(left), abs(right))
                close = abs(left - right) <= scale * mpmath.mpf(10) ** (-20)
                if close != exact:
                    logger.error(f"Numeric guard disagrees with the exact comparison at s={s}")
                    return False
    return exact


def oracle_twist_ratio(h: HeckeCoefficients, chi: DirichletCharacter, X: int,
                       D: Optional[DirichletPolynomial] = None) -> bool:
    """
    Convolution check: the coefficients of D * sum lambda_n c_{chi_*}(n) n^{-s}
    equal lambda_n c_chi(n) for every n <= X / (largest support of D).

    Raises:
        ValueError: If that range is empty
    """
    D = D if D is not None else build_D(h, chi)
    coeffs = D.coefficients()
    limit = X // max(coeffs, default=1)
    if limit < 1:
        raise ValueError(f"X={X} is too small for a polynomial supported up to {max(coeffs)}")
    star = chi.primitive()
    series = {m: h.coefficient(m) * c_chi(star, m) for m in range(1, limit + 1)}
    for n in range(1, limit + 1):
        lhs = CycloNumber(1)
        for d, c in coeffs.items():
            if n % d == 0:
                lhs = lhs + c * series[n // d]
        if lhs != h.coefficient(n) * c_chi(chi, n):
            logger.info(f"Twist ratio fails at n={n} for {chi}")
            return False
    return True


class FEReport(BaseModel):
    """Both verification routes for one (coefficients, character) instance."""
    level: int = Field(..., description="Level N of the coefficient data")
    character: dict = Field(..., description="Character spec")
    conductor: int = Field(..., description="Conductor q_*")
    terms: int = Field(..., description="Number of terms of D_{f,chi}")
    fe_holds: bool = Field(..., description="Exact reflection identity")
    oracle_holds: Optional[bool] = Field(None, description="Convolution oracle, None when not run")
    error: Optional[str] = Field(None, description="Failure message")

    @property
    def passed(self) -> bool:
        return self.fe_holds and self.oracle_holds is not False and self.error is None


def fe_instance(h: HeckeCoefficients, chi: DirichletCharacter, X: Optional[int] = None,
                rng: Optional[np.random.Generator] = None, points: int = 3,
                dps: int = 30) -> FEReport:
    """Build D_{f,chi} and D_{g,conj chi} from dual data and run both checks."""
    Df = build_D(h, chi)
    Dg = build_D(h.dual(), chi.conj())
    fe = check_fe(Df, Dg, chi.modulus, chi.conductor, h.xi, rng=rng, points=points, dps=dps)
    oracle = None
    if X is not None:
        oracle = oracle_twist_ratio(h, chi, X, Df)
    return FEReport(level=h.N, character=chi.to_spec(), conductor=chi.conductor,
                    terms=len(Df.terms), fe_holds=fe, oracle_holds=oracle)
