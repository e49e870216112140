"""
DirichletPolynomial: finite sums c * prod_p u_p^(e_p) with u_p = p^(-s).

Exponents may be negative after the reflection s -> 1 - s.  Rational factors
p^alpha are folded into the CycloNumber coefficient.
"""
import math
from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

import mpmath
import sympy

from ..exactalg import CycloNumber

Monomial = Tuple[Tuple[int, int], ...]
Scalar = Union[CycloNumber, int, Fraction]


def _monomial(exponents: Dict[int, int]) -> Monomial:
    return tuple(sorted((p, e) for p, e in exponents.items() if e))


def _cyclo(x: Scalar) -> CycloNumber:
    return x if isinstance(x, CycloNumber) else CycloNumber.rational(x)


class DirichletPolynomial:
    """Canonical Laurent polynomial in the u_p; no zero coefficients are stored."""

    def __init__(self, terms: Dict[Monomial, Scalar] = None):
        self.terms: Dict[Monomial, CycloNumber] = {}
        for mono, c in (terms or {}).items():
            self._accumulate(_monomial(dict(mono)), _cyclo(c))

    def _accumulate(self, mono: Monomial, c: CycloNumber) -> None:
        total = self.terms[mono] + c if mono in self.terms else c
        if total.is_zero():
            self.terms.pop(mono, None)
        else:
            self.terms[mono] = total

    @classmethod
    def constant(cls, c: Scalar = 1) -> "DirichletPolynomial":
        return cls({(): c})

    @classmethod
    def monomial(cls, c: Scalar, exponents: Dict[int, int]) -> "DirichletPolynomial":
        return cls({_monomial(exponents): c})

    @classmethod
    def term(cls, c: Scalar, n: int) -> "DirichletPolynomial":
        """c * n^(-s)."""
        return cls.monomial(c, dict(sympy.factorint(n)))

    def __add__(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        out = DirichletPolynomial()
        out.terms = dict(self.terms)
        for mono, c in other.terms.items():
            out._accumulate(mono, c)
        return out

    def __neg__(self) -> "DirichletPolynomial":
        out = DirichletPolynomial()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        return self + (-other)

    def __mul__(self, other: Union["DirichletPolynomial", Scalar]) -> "DirichletPolynomial":
        if not isinstance(other, DirichletPolynomial):
            other = DirichletPolynomial.constant(other)
        out = DirichletPolynomial()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = dict(m1)
                for p, e in m2:
                    exps[p] = exps.get(p, 0) + e
                out._accumulate(_monomial(exps), c1 * c2)
        return out

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletPolynomial):
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(
            self.terms[m] == other.terms[m] for m in self.terms)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def primes(self) -> set:
        return {p for mono in self.terms for p, _ in mono}

    def reflect(self) -> "DirichletPolynomial":
        """Substitute s -> 1 - s, i.e. u_p -> (p u_p)^-1."""
        out = DirichletPolynomial()
        for mono, c in self.terms.items():
            scale = Fraction(1)
            for p, e in mono:
                scale /= Fraction(p) ** e
            out._accumulate(tuple((p, -e) for p, e in mono), c * scale)
        return out

    def coefficients(self) -> Dict[int, CycloNumber]:
        """
        n -> coefficient of n^(-s).

        Raises:
            ValueError: If some exponent is negative
        """
        out = {}
        for mono, c in self.terms.items():
            if any(e < 0 for _, e in mono):
                raise ValueError("Negative exponents have no Dirichlet series coefficient")
            out[math.prod(p ** e for p, e in mono)] = c
        return out

    def max_support(self) -> int:
        return max(self.coefficients(), default=1)

    def evaluate(self, s, dps: int = 30):
        with mpmath.workdps(dps):
            s = mpmath.mpmathify(s)
            total = mpmath.mpc(0)
            for mono, c in self.terms.items():
                total += c.to_complex(dps) * mpmath.fprod(mpmath.power(p, -e * s) for p, e in mono)
            return total

    def items(self) -> Iterable[Tuple[Monomial, CycloNumber]]:
        return sorted(self.terms.items())

    def to_record(self) -> list:
        return [{"monomial": {str(p): e for p, e in mono}, "value": repr(c)} for mono, c in self.items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "DirichletPolynomial(0)"
        parts = []
        for mono, c in self.items():
            u = "*".join(f"u{p}^{e}" for p, e in mono) or "1"
            parts.append(f"({c})*{u}")
        return "DirichletPolynomial(" + " + ".join(parts) + ")"
