"""
Displayed matrix identities for the small levels whose Gamma_0(N) generators
need more than T, W and -I.
"""
import logging
from fractions import Fraction
from itertools import product
from typing import Callable, List, NamedTuple, Optional

from pydantic import BaseModel, Field

from .congruence import conrey_farmer_matrix, gamma_qa, in_gamma0, is_elliptic_infinite, twisted_trace
from .matrices import Mat2, T, W, format_entry, format_matrix, inv, mul, upper

logger = logging.getLogger(__name__)


class IdentityCheck(BaseModel):
    """One checked identity."""
    kind: str = Field(..., description="'identity', 'conrey_farmer' or 'twisted_trace'")
    level: int = Field(..., description="Level N")
    label: str = Field(..., description="What was checked")
    expected: str = Field(..., description="Displayed value")
    actual: str = Field(..., description="Computed value")
    holds: bool = Field(..., description="Whether the check passed")
    corrected: bool = Field(False, description="Checked in a corrected form, not as displayed")

    def to_record(self) -> dict:
        return self.model_dump()


class _Identity(NamedTuple):
    level: int
    label: str
    lhs: Mat2
    rhs: Callable[[int], Mat2]
    corrected: bool = False


def _g(N: int, q: int, a: int) -> Mat2:
    return gamma_qa(N, q, a)


# N = 15: the last identity is stored without the T factor of its displayed form
DISPLAYED_IDENTITIES: List[_Identity] = [
    _Identity(6, "-T W^-1", Mat2(5, -1, 6, -1), lambda N: -mul(T(), inv(W(N)))),
    _Identity(6, "-T^-1 W", Mat2(5, 1, -6, -1), lambda N: -mul(inv(T()), W(N))),
    _Identity(15, "T^-1 g(2,1)^-1", Mat2(8, -1, -15, 2), lambda N: inv(T()) * inv(_g(N, 2, 1))),
    _Identity(15, "(2 -1; -15 8)^-1", Mat2(8, 1, 15, 2), lambda N: inv(Mat2(2, -1, -15, 8))),
    _Identity(15, "-g(2,1) T g(11,4)", Mat2(8, -3, 75, -28), lambda N: -(_g(N, 2, 1) * T() * _g(N, 11, 4))),
    _Identity(15, "-g(2,1) g(11,4)^-1", Mat2(8, 3, 45, 17), lambda N: -(_g(N, 2, 1) * inv(_g(N, 11, 4))),
              corrected=True),
    _Identity(23, "-g(4,1) g(6,1)^-1 g(10,-3)^-1", Mat2(3, -1, -23, 8),
              lambda N: -(_g(N, 4, 1) * inv(_g(N, 6, 1)) * inv(_g(N, 10, -3)))),
    _Identity(23, "-g(2,1) g(10,-3)", Mat2(3, 1, 23, 8), lambda N: -(_g(N, 2, 1) * _g(N, 10, -3))),
]

# (level, gamma, alpha) with C alpha not integral and |A + D + C alpha| < 2
TWISTED_TRACE_CONDITIONS = [
    (6, Mat2(5, -2, -12, 5), Fraction(4, 5)),
    (15, Mat2(11, -4, -30, 11), Fraction(3, 4)),
    (23, Mat2(10, 3, 23, 7), Fraction(-2, 3)),
]

CONREY_FARMER_VALUES = (3, 4, 6)


def check_displayed_identities() -> List[IdentityCheck]:
    checks = []
    for ident in DISPLAYED_IDENTITIES:
        actual = ident.rhs(ident.level)
        checks.append(IdentityCheck(kind="identity", level=ident.level, label=ident.label,
                                    expected=format_matrix(ident.lhs), actual=format_matrix(actual),
                                    holds=actual == ident.lhs and in_gamma0(actual, ident.level),
                                    corrected=ident.corrected))
    return checks


def check_conrey_farmer(values=CONREY_FARMER_VALUES) -> List[IdentityCheck]:
    """
    For q, s in values and N = qs - 1, the product matrix equals
    (1 -2/q; 2q - 2/s, -3 + 4/(qs)) and is elliptic of infinite order.
    """
    checks = []
    for q, s in product(values, repeat=2):
        M = conrey_farmer_matrix(q, s)
        expected = Mat2(1, Fraction(-2, q), 2 * q - Fraction(2, s), -3 + Fraction(4, q * s))
        holds = M == expected and is_elliptic_infinite(M) and M.trace() == -2 + Fraction(4, q * s)
        checks.append(IdentityCheck(kind="conrey_farmer", level=q * s - 1, label=f"q={q}, s={s}",
                                    expected=format_matrix(expected), actual=format_matrix(M), holds=holds))
    return checks


def check_twisted_traces(conditions: Optional[list] = None) -> List[IdentityCheck]:
    checks = []
    for N, gamma, alpha in conditions or TWISTED_TRACE_CONDITIONS:
        trace = twisted_trace(gamma, alpha)
        product_matrix = mul(inv(gamma), upper(-alpha))
        holds = (in_gamma0(gamma, N) and Fraction(gamma.c * alpha).denominator != 1
                 and is_elliptic_infinite(product_matrix))
        checks.append(IdentityCheck(kind="twisted_trace", level=N,
                                    label=f"gamma={format_matrix(gamma)}, alpha={format_entry(alpha)}",
                                    expected="|trace| < 2, trace not integral", actual=format_entry(trace),
                                    holds=holds))
    return checks


def check_all_identities() -> List[IdentityCheck]:
    checks = check_displayed_identities() + check_conrey_farmer() + check_twisted_traces()
    failed = [c for c in checks if not c.holds]
    for c in failed:
        logger.error(f"Identity check failed at N={c.level}: {c.label}, got {c.actual}")
    logger.info(f"{len(checks) - len(failed)}/{len(checks)} identity checks hold")
    return checks
