"""
CycloNumber: exact elements of the cyclotomic field Q(zeta_M).

Elements are stored sparsely on the basis prod_{p^e || M} zeta_{p^e}^{j_p},
0 <= j_p < phi(p^e).  Each basis element is itself a power zeta_M^k with
k = sum_p j_p * M / p^e, so a key k in Z/M names a basis element and the
representation is unique, which makes equality and the zero test exact.
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple, Union

import mpmath
import numpy as np
import sympy

Rational = Union[int, Fraction]

_X = sympy.Symbol("x")


@lru_cache(maxsize=None)
def prime_power_parts(M: int) -> Tuple[Tuple[int, int, int, int], ...]:
    """For each p^e || M: (p, p^e, p^(e-1), inverse of M/p^e modulo p^e)."""
    parts = []
    for p, e in sorted(sympy.factorint(M).items()):
        pe = p ** e
        parts.append((p, pe, pe // p, pow(M // pe, -1, pe)))
    return tuple(parts)


@lru_cache(maxsize=200_000)
def reduce_exponent(M: int, k: int) -> Tuple[Tuple[int, int], ...]:
    """zeta_M^k as ((basis key, integer coefficient), ...)."""
    terms: Dict[int, int] = {0: 1}
    for p, pe, step, u in prime_power_parts(M):
        j = (k * u) % pe
        if j < pe - step:
            expansion = [(j, 1)]
        else:
            expansion = [(j - i * step, -1) for i in range(1, p)]
        weight = M // pe
        new_terms: Dict[int, int] = {}
        for key, coeff in terms.items():
            for jj, sign in expansion:
                nk = (key + jj * weight) % M
                new_terms[nk] = new_terms.get(nk, 0) + coeff * sign
        terms = new_terms
    return tuple(sorted((key, c) for key, c in terms.items() if c))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"Unsupported coefficient type: {type(value).__name__}")


class CycloNumber:
    """Exact element of Q(zeta_M)."""

    __slots__ = ("M", "coeffs")
    __hash__ = None

    def __init__(self, M: int, coeffs: Dict[int, Rational] = None):
        if M < 1:
            raise ValueError(f"Conductor must be positive, got {M}")
        self.M = M
        self.coeffs: Dict[int, Fraction] = {}
        for k, c in (coeffs or {}).items():
            self._add_power(k, _as_fraction(c))

    def _add_power(self, k: int, c: Fraction) -> None:
        if not c:
            return
        for key, mult in reduce_exponent(self.M, k % self.M):
            value = self.coeffs.get(key, 0) + c * mult
            if value:
                self.coeffs[key] = value
            else:
                self.coeffs.pop(key, None)

    @classmethod
    def _from_reduced(cls, M: int, coeffs: Dict[int, Fraction]) -> "CycloNumber":
        out = cls(M)
        out.coeffs = {k: Fraction(c) for k, c in coeffs.items() if c}
        return out

    @classmethod
    def rational(cls, value: Rational, M: int = 1) -> "CycloNumber":
        return cls(M, {0: value})

    @classmethod
    def zeta(cls, M: int, k: int = 1) -> "CycloNumber":
        """zeta_M^k."""
        return cls(M, {k: 1})

    @classmethod
    def e(cls, x: Rational) -> "CycloNumber":
        """e(x) = exp(2 pi i x) for rational x, at conductor denominator(x)."""
        x = _as_fraction(x)
        return cls.zeta(x.denominator, x.numerator)

    @classmethod
    def from_powers(cls, M: int, powers: Iterable[Tuple[int, Rational]]) -> "CycloNumber":
        out = cls(M)
        for k, c in powers:
            out._add_power(k, _as_fraction(c))
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return set(self.coeffs) <= {0}

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs.get(0, Fraction(0))

    def embed(self, M_new: int) -> "CycloNumber":
        """
        Same value in Q(zeta_{M_new}).

        Raises:
            ValueError: If M does not divide M_new
        """
        if M_new % self.M:
            raise ValueError(f"Cannot embed conductor {self.M} into {M_new}")
        if M_new == self.M:
            return self._from_reduced(self.M, self.coeffs)
        scale = M_new // self.M
        return CycloNumber(M_new, {k * scale: c for k, c in self.coeffs.items()})

    def _coerce_pair(self, other) -> Tuple["CycloNumber", "CycloNumber"]:
        if not isinstance(other, CycloNumber):
            other = CycloNumber.rational(_as_fraction(other))
        if other.M == self.M:
            return self, other
        M = self.M * other.M // math.gcd(self.M, other.M)
        return self.embed(M), other.embed(M)

    def __add__(self, other) -> "CycloNumber":
        try:
            x, y = self._coerce_pair(other)
        except TypeError:
            return NotImplemented
        out = dict(x.coeffs)
        for k, c in y.coeffs.items():
            out[k] = out.get(k, 0) + c
        return self._from_reduced(x.M, out)

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return self._from_reduced(self.M, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other) -> "CycloNumber":
        try:
            x, y = self._coerce_pair(other)
        except TypeError:
            return NotImplemented
        return x + (-y)

    def __rsub__(self, other) -> "CycloNumber":
        return (-self) + other

    def __mul__(self, other) -> "CycloNumber":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._from_reduced(self.M, {k: c * other for k, c in self.coeffs.items()})
        try:
            x, y = self._coerce_pair(other)
        except TypeError:
            return NotImplemented
        out = CycloNumber(x.M)
        for k1, c1 in x.coeffs.items():
            for k2, c2 in y.coeffs.items():
                out._add_power(k1 + k2, c1 * c2)
        return out

    __rmul__ = __mul__

    def conj(self) -> "CycloNumber":
        """Complex conjugate, zeta -> zeta^-1."""
        return CycloNumber(self.M, {-k: c for k, c in self.coeffs.items()})

    def power_coeffs(self) -> List[Fraction]:
        """Coefficients of 1, zeta_M, ..., zeta_M^(phi(M)-1) in the power basis."""
        degree = int(sympy.totient(self.M))
        if self.is_zero():
            return [Fraction(0)] * degree
        poly = sympy.Poly({(k,): sympy.Rational(c.numerator, c.denominator) for k, c in self.coeffs.items()},
                          _X, domain=sympy.QQ)
        remainder = poly.rem(sympy.Poly(sympy.cyclotomic_poly(self.M, _X), _X, domain=sympy.QQ))
        out = [Fraction(0)] * degree
        for (k,), c in remainder.terms():
            out[k] = _as_fraction(c)
        return out

    def inverse(self) -> "CycloNumber":
        """
        Multiplicative inverse via the extended Euclidean algorithm modulo Phi_M.

        Raises:
            ZeroDivisionError: If self is zero
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycloNumber.rational(1 / self.to_rational(), self.M)
        poly = sympy.Poly({(k,): sympy.Rational(c.numerator, c.denominator) for k, c in self.coeffs.items()},
                          _X, domain=sympy.QQ)
        inv = sympy.invert(poly, sympy.Poly(sympy.cyclotomic_poly(self.M, _X), _X, domain=sympy.QQ))
        return CycloNumber.from_powers(self.M, ((k, _as_fraction(c)) for (k,), c in inv.terms()))

    def __truediv__(self, other) -> "CycloNumber":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = CycloNumber.rational(other)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        x, y = self._coerce_pair(other)
        return x.coeffs == y.coeffs

    def to_complex(self, dps: int = 30) -> mpmath.mpc:
        with mpmath.workdps(dps):
            total = mpmath.mpc(0)
            for k, c in self.coeffs.items():
                total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(mpmath.mpf(2 * k) / self.M)
            return total

    def __repr__(self) -> str:
        if self.is_zero():
            return f"CycloNumber({self.M}, 0)"
        terms = " + ".join(f"{c}*z^{k}" for k, c in sorted(self.coeffs.items()))
        return f"CycloNumber({self.M}, {terms})"


def basis_size(M: int) -> int:
    return int(sympy.totient(M))


def reduce_group_ring(vec, M: int) -> np.ndarray:
    """
    Reduce an integer vector indexed by Z/M, read as sum vec[k] zeta_M^k,
    to coordinates on the tensor basis.

    Returns:
        array of shape (phi(p1^e1), phi(p2^e2), ...); all zero iff the value is 0
    """
    vec = np.asarray(vec)
    if vec.shape != (M,):
        raise ValueError(f"Expected a vector of length {M}, got shape {vec.shape}")
    parts = prime_power_parts(M)
    if not parts:
        return vec.copy()
    k = np.arange(M, dtype=np.int64)
    coords = tuple((k * u) % pe for _, pe, _, u in parts)
    shape = tuple(pe for _, pe, _, _ in parts)
    tensor = np.zeros(shape, dtype=vec.dtype)
    tensor[coords] = vec
    for axis, (p, pe, step, _) in enumerate(parts):
        moved = np.moveaxis(tensor, axis, 0)
        split = moved.reshape((p, step) + moved.shape[1:])
        reduced = split[:p - 1] - split[p - 1][None, ...]
        reduced = reduced.reshape(((p - 1) * step,) + moved.shape[1:])
        tensor = np.moveaxis(reduced, 0, axis)
    return tensor


def cyclo_from_reduced(tensor: np.ndarray, M: int) -> CycloNumber:
    """CycloNumber from the output of reduce_group_ring."""
    parts = prime_power_parts(M)
    coeffs: Dict[int, Fraction] = {}
    if not parts:
        value = int(np.asarray(tensor).reshape(-1)[0])
        return CycloNumber.rational(value, M)
    for idx in zip(*np.nonzero(tensor)):
        key = sum(int(j) * (M // pe) for j, (_, pe, _, _) in zip(idx, parts)) % M
        coeffs[key] = Fraction(int(tensor[idx]))
    return CycloNumber._from_reduced(M, coeffs)
