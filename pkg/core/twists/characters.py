"""
DirichletCharacter: characters modulo q in logarithmic form.

(Z/q)^x is split into cyclic factors, one per odd prime power and up to two
for the power of 2 (generated by -1 and 5).  A character is the tuple of
exponents x_i with chi(g_i) = e(x_i / s_i), s_i the order of g_i; values
are stored as residues k_a modulo the group exponent L, chi(a) = e(k_a / L).
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.ntheory.modular import crt

from ..exactalg import CycloNumber
from ..matcore import check_level

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def unit_group(q: int) -> Tuple[Tuple[Tuple[int, int], ...], Dict[int, Tuple[int, ...]]]:
    """
    Cyclic decomposition of (Z/q)^x.

    Returns:
        ((generator mod q, order), ...) and the discrete-log table a -> exponents
    """
    check_level(q)
    components: List[Tuple[int, int]] = []
    for p, e in sorted(sympy.factorint(q).items()):
        pe = p ** e
        rest = q // pe
        local: List[Tuple[int, int]] = []
        if p == 2:
            if e >= 2:
                local.append((pe - 1, 2))
            if e >= 3:
                local.append((5, pe // 4))
        else:
            local.append((int(sympy.primitive_root(pe)), pe - pe // p))
        for g, order in local:
            # lift to g mod p^e, 1 mod the rest
            lifted = int(crt([pe, rest], [g, 1])[0]) if rest > 1 else g % q
            components.append((lifted % q, order))
    logs: Dict[int, Tuple[int, ...]] = {}
    for exps in product(*(range(order) for _, order in components)):
        a = 1 % q
        for (g, _), x in zip(components, exps):
            a = a * pow(g, x, q) % q
        logs[a] = exps
    return tuple(components), logs


def group_exponent(q: int) -> int:
    components, _ = unit_group(q)
    return math.lcm(*(order for _, order in components)) if components else 1


class DirichletCharacter:
    """Dirichlet character modulo q given by its exponents on the unit group generators."""

    def __init__(self, modulus: int, exponents: Sequence[int] = ()):
        self.modulus = check_level(modulus)
        components, logs = unit_group(modulus)
        exponents = tuple(int(x) for x in exponents) or (0,) * len(components)
        if len(exponents) != len(components):
            raise ValueError(f"Modulus {modulus} needs {len(components)} exponents, got {len(exponents)}")
        self.exponents = tuple(x % order for x, (_, order) in zip(exponents, components))
        self.L = group_exponent(modulus)
        weights = [x * (self.L // order) for x, (_, order) in zip(self.exponents, components)]
        self._log: Dict[int, int] = {
            a: sum(w * t for w, t in zip(weights, exps)) % self.L for a, exps in logs.items()
        }
        self.order = self.L // math.gcd(self.L, *weights) if weights else 1
        self._conductor: Optional[int] = None

    @classmethod
    def trivial(cls, modulus: int) -> "DirichletCharacter":
        return cls(modulus)

    @classmethod
    def from_log_table(cls, modulus: int, values: Dict[int, Fraction]) -> "DirichletCharacter":
        """
        Character whose value at each unit a is e(values[a]); only generator values are read.

        Raises:
            ValueError: If the table is not a character
        """
        components, _ = unit_group(modulus)
        exps = []
        for g, order in components:
            x = Fraction(values[g]) * order
            if x.denominator != 1:
                raise ValueError(f"Value at generator {g} is not an {order}-th root of unity")
            exps.append(int(x) % order)
        chi = cls(modulus, exps)
        for a, v in values.items():
            if chi.log_value(a) != Fraction(v) % 1:
                raise ValueError(f"Table is not multiplicative at {a}")
        return chi

    def log_value(self, n: int) -> Optional[Fraction]:
        """x in [0, 1) with chi(n) = e(x), or None when gcd(n, q) > 1."""
        k = self._log.get(n % self.modulus)
        if k is None:
            return None
        return Fraction(k, self.L)

    def __call__(self, n: int) -> CycloNumber:
        x = self.log_value(n)
        if x is None:
            return CycloNumber(1)
        return CycloNumber.e(x)

    def value_exponent(self, n: int) -> Optional[int]:
        """k with chi(n) = e(k / L)."""
        return self._log.get(n % self.modulus)

    def units(self) -> List[int]:
        return sorted(self._log)

    def is_trivial(self) -> bool:
        return self.order == 1

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        return 1 if self._log[(-1) % self.modulus] == 0 else -1

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, [-x for x in self.exponents])

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            raise ValueError("Characters must share a modulus")
        return DirichletCharacter(self.modulus, [x + y for x, y in zip(self.exponents, other.exponents)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    @property
    def conductor(self) -> int:
        """Smallest d | q with chi trivial on units congruent to 1 mod d."""
        if self._conductor is None:
            for d in sympy.divisors(self.modulus):
                if all(self._log[a] == 0 for a in self._log if a % d == 1 % d):
                    self._conductor = d
                    break
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive(self) -> "DirichletCharacter":
        """The primitive character chi_* modulo the conductor inducing chi."""
        f = self.conductor
        if f == self.modulus:
            return self
        components, _ = unit_group(f)
        exps = []
        for g, order in components:
            lift = next(a for a in range(g, self.modulus * f + g, f) if math.gcd(a, self.modulus) == 1)
            exps.append(int(Fraction(self._log[lift % self.modulus], self.L) * order) % order)
        return DirichletCharacter(f, exps)

    @property
    def q0(self) -> int:
        """Product of the primes dividing q but not the conductor."""
        f = self.conductor
        return math.prod(p for p in sympy.primefactors(self.modulus) if f % p)

    @property
    def q2(self) -> int:
        return self.modulus // (self.conductor * self.q0)

    def to_spec(self) -> dict:
        return {"modulus": self.modulus, "exponents": list(self.exponents)}

    def __repr__(self) -> str:
        return f"DirichletCharacter({self.modulus}, {list(self.exponents)})"


def all_characters(q: int) -> List[DirichletCharacter]:
    """All phi(q) characters modulo q, trivial first."""
    components, _ = unit_group(q)
    return [DirichletCharacter(q, exps) for exps in product(*(range(order) for _, order in components))]


def character_from_spec(spec: Union[dict, str, int, None]) -> DirichletCharacter:
    """
    Character from a serialized form.

    Accepted: {"modulus": q, "exponents": [...]}, "trivial:q", "q" or q (trivial),
    and None (trivial modulo 1).

    Raises:
        ValueError: On malformed input
    """
    if spec is None:
        return DirichletCharacter(1)
    if isinstance(spec, int):
        return DirichletCharacter(spec)
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("trivial:"):
            text = text.split(":", 1)[1]
        try:
            return DirichletCharacter(int(text))
        except ValueError as e:
            raise ValueError(f"Malformed character spec: {spec!r}") from e
    if isinstance(spec, dict) and "modulus" in spec:
        return DirichletCharacter(int(spec["modulus"]), spec.get("exponents", ()))
    raise ValueError(f"Malformed character spec: {spec!r}")
