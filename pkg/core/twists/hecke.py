"""
HeckeCoefficients: normalized coefficients lambda_n of a Hecke-type sequence.

Good primes (p not dividing N) follow
    lambda_{p^(j+1)} = lambda_p lambda_{p^j} - xi(p) lambda_{p^(j-1)},
bad prime powers are free data, and lambda is multiplicative.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import sympy
from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential

from ..exactalg import CycloNumber
from ..matcore import check_level, format_entry, normalize_entry
from .characters import DirichletCharacter, character_from_spec

logger = logging.getLogger(__name__)

Number = Union[CycloNumber, int, Fraction]


def _cyclo(x: Number) -> CycloNumber:
    return x if isinstance(x, CycloNumber) else CycloNumber.rational(x)


class HeckeCoefficients:
    """Coefficient data up to a working bound."""

    def __init__(self, N: int, xi: Optional[DirichletCharacter], lambda_p: Dict[int, Number],
                 bad: Optional[Dict[int, Number]] = None, bound: int = 1000):
        self.N = check_level(N)
        self.xi = xi or DirichletCharacter(N)
        if self.xi.modulus != N:
            raise ValueError(f"Nebentypus modulus {self.xi.modulus} differs from level {N}")
        self.bound = bound
        self.lambda_p = {int(p): _cyclo(v) for p, v in lambda_p.items()}
        self.bad = {int(n): _cyclo(v) for n, v in (bad or {}).items()}
        for p in self.lambda_p:
            if not sympy.isprime(p) or N % p == 0:
                raise ValueError(f"lambda_p given at {p}, which is not a good prime for level {N}")
        for n in self.bad:
            f = sympy.factorint(n)
            if len(f) != 1 or N % next(iter(f)):
                raise ValueError(f"Bad data given at {n}, which is not a power of a prime dividing {N}")
        self._powers: Dict[int, list] = {}

    def _good_power(self, p: int, j: int) -> CycloNumber:
        if p not in self.lambda_p:
            raise ValueError(f"Missing lambda_{p}")
        seq = self._powers.setdefault(p, [CycloNumber.rational(1), self.lambda_p[p]])
        xi_p = self.xi(p)
        while len(seq) <= j:
            seq.append(self.lambda_p[p] * seq[-1] - xi_p * seq[-2])
        return seq[j]

    def prime_power(self, p: int, j: int) -> CycloNumber:
        """lambda_{p^j}; zero for negative j."""
        if j < 0:
            return CycloNumber(1)
        if j == 0:
            return CycloNumber.rational(1)
        if p ** j > self.bound:
            raise ValueError(f"lambda_{p}^{j} is beyond the working bound {self.bound}")
        if self.N % p == 0:
            if p ** j not in self.bad:
                raise ValueError(f"Missing bad coefficient lambda_{p ** j}")
            return self.bad[p ** j]
        return self._good_power(p, j)

    def coefficient(self, n: int) -> CycloNumber:
        """
        lambda_n.

        Raises:
            ValueError: If n exceeds the working bound or data is missing
        """
        if n < 1 or n > self.bound:
            raise ValueError(f"coefficient index {n} outside 1..{self.bound}")
        value = CycloNumber.rational(1)
        for p, j in sympy.factorint(n).items():
            value = value * self.prime_power(p, j)
        return value

    def dual(self) -> "HeckeCoefficients":
        """Data of the dual sequence: conj(xi(p)) lambda_p at good p, nebentypus conj(xi)."""
        xi_bar = self.xi.conj()
        return HeckeCoefficients(
            self.N, xi_bar,
            {p: xi_bar(p) * v for p, v in self.lambda_p.items()},
            dict(self.bad), self.bound,
        )

    def to_dict(self) -> dict:
        def encode(v: CycloNumber):
            if v.is_rational():
                return format_entry(normalize_entry(v.to_rational()))
            return {"M": v.M, "coeffs": {str(k): format_entry(normalize_entry(c)) for k, c in v.coeffs.items()}}

        return {
            "N": self.N,
            "xi": self.xi.to_spec(),
            "bound": self.bound,
            "lambda": {str(p): encode(v) for p, v in sorted(self.lambda_p.items())},
            "bad": {str(n): encode(v) for n, v in sorted(self.bad.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HeckeCoefficients":
        """
        Raises:
            ValueError: On malformed coefficient data
        """
        def decode(v) -> CycloNumber:
            if isinstance(v, dict):
                return CycloNumber(int(v["M"]), {int(k): normalize_entry(c) for k, c in v["coeffs"].items()})
            return CycloNumber.rational(normalize_entry(v))

        try:
            N = int(data["N"])
            lambdas = {int(p): decode(v) for p, v in data.get("lambda", {}).items()}
            bad = {int(n): decode(v) for n, v in data.get("bad", {}).items()}
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed coefficient data: {e}") from e
        bound = int(data.get("bound", max([1] + [p for p in lambdas] + [n for n in bad])))
        return cls(N, character_from_spec(data.get("xi", N)), lambdas, bad, bound)


def load_coefficients(path: Union[str, Path]) -> HeckeCoefficients:
    with open(path, 'r', encoding='utf-8') as f:
        return HeckeCoefficients.from_dict(json.load(f))


@retry(stop=stop_after_attempt(3), wait=wait_exponential(multiplier=1, min=1, max=4), retry=retry_if_exception_type(OSError), reraise=True)
def save_coefficients(h: HeckeCoefficients, path: Union[str, Path]) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(h.to_dict(), f, indent=2)


def random_hecke_coefficients(N: int, xi: Optional[DirichletCharacter], bound: int,
                              rng: np.random.Generator, height: int = 9) -> HeckeCoefficients:
    """Random rational lambda_p at good primes and bad data at p^j <= bound, p | N."""
    def rand() -> Fraction:
        return Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))

    lambdas = {int(p): rand() for p in sympy.primerange(2, bound + 1) if N % p}
    bad: Dict[int, Fraction] = {}
    for p in sympy.primefactors(N):
        pj = p
        while pj <= bound:
            bad[pj] = rand()
            pj *= p
    logger.debug(f"Random coefficients for N={N}: {len(lambdas)} good primes, {len(bad)} bad prime powers")
    return HeckeCoefficients(N, xi, lambdas, bad, bound)


def recursion_holds(h: HeckeCoefficients, p: int) -> bool:
    """lambda_{p^(j+1)} + xi(p) lambda_{p^(j-1)} == lambda_p lambda_{p^j} for every stored j."""
    if h.N % p == 0:
        raise ValueError(f"{p} is a bad prime for level {h.N}")
    top = 0
    while p ** (top + 1) <= h.bound:
        top += 1
    xi_p = h.xi(p)
    return all(h.prime_power(p, j + 1) + xi_p * h.prime_power(p, j - 1) == h.lambda_p[p] * h.prime_power(p, j)
               for j in range(1, top))
