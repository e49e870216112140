"""
Mat2: exact 2x2 matrices over the rationals.

Entries are ``int`` or ``fractions.Fraction``; integral fractions are stored
as ``int`` so that integer matrices stay cheap to multiply and hash.
"""
import re
from fractions import Fraction
from typing import Iterator, Tuple, Union

Entry = Union[int, Fraction]
Number = Union[int, Fraction, str]

_MATRIX_PATTERN = re.compile(
    r"^\s*\[\s*\[\s*([^,\]]+)\s*,\s*([^,\]]+)\s*\]\s*,\s*\[\s*([^,\]]+)\s*,\s*([^,\]]+)\s*\]\s*\]\s*$"
)


def normalize_entry(value: Number) -> Entry:
    """
    Convert a supported scalar to the canonical entry type.

    Args:
        value: int, Fraction, or a literal such as ``"-7"`` or ``"2/5"``

    Returns:
        int when the value is integral, Fraction otherwise

    Raises:
        TypeError: For floats, bools and other unsupported types
        ValueError: For malformed literals or zero denominators
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a matrix entry")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/[+-]?\d+)?", text):
            raise ValueError(f"Malformed rational literal: {value!r}")
        try:
            return normalize_entry(Fraction(text))
        except ZeroDivisionError:
            raise ValueError(f"Zero denominator in {value!r}") from None
    raise TypeError(f"Unsupported matrix entry type: {type(value).__name__}")


def format_entry(value: Entry) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


class Mat2:
    """Immutable exact 2x2 matrix (a b; c d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: Number, b: Number, c: Number, d: Number):
        object.__setattr__(self, "a", normalize_entry(a))
        object.__setattr__(self, "b", normalize_entry(b))
        object.__setattr__(self, "c", normalize_entry(c))
        object.__setattr__(self, "d", normalize_entry(d))

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    def __delattr__(self, name):
        raise AttributeError("Mat2 is immutable")

    def __iter__(self) -> Iterator[Entry]:
        return iter((self.a, self.b, self.c, self.d))

    def to_tuple(self) -> Tuple[Entry, Entry, Entry, Entry]:
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.to_tuple() == other.to_tuple()

    def __hash__(self) -> int:
        return hash(("Mat2",) + self.to_tuple())

    def __repr__(self) -> str:
        return f"Mat2({format_entry(self.a)}, {format_entry(self.b)}, {format_entry(self.c)}, {format_entry(self.d)})"

    def __str__(self) -> str:
        return format_matrix(self)

    def det(self) -> Entry:
        return normalize_entry(Fraction(self.a * self.d - self.b * self.c))

    def trace(self) -> Entry:
        return normalize_entry(Fraction(self.a + self.d))

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self)

    def top_row(self) -> Tuple[Entry, Entry]:
        return (self.a, self.b)

    def __mul__(self, other: "Mat2") -> "Mat2":
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mat2":
        """
        Inverse of a determinant-one matrix.

        Raises:
            ValueError: If the determinant is not 1
        """
        if self.det() != 1:
            raise ValueError(f"inverse requires det 1, got det {format_entry(self.det())}")
        return Mat2(self.d, -self.b, -self.c, self.a)

    def __pow__(self, exponent: int) -> "Mat2":
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = identity()
        e = abs(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def identity() -> Mat2:
    return Mat2(1, 0, 0, 1)


def neg_identity() -> Mat2:
    return Mat2(-1, 0, 0, -1)


def T() -> Mat2:
    return Mat2(1, 1, 0, 1)


def S() -> Mat2:
    return Mat2(0, -1, 1, 0)


def W(N: int) -> Mat2:
    return Mat2(1, 0, N, 1)


def upper(alpha: Number) -> Mat2:
    """The translation (1 alpha; 0 1)."""
    return Mat2(1, alpha, 0, 1)


def mul(x: Mat2, y: Mat2) -> Mat2:
    return x * y


def inv(x: Mat2) -> Mat2:
    return x.inverse()


def neg(x: Mat2) -> Mat2:
    return -x


def parse_matrix(text: str) -> Mat2:
    """
    Parse the literal form ``[[a,b],[c,d]]``; entries may be ``p/q``.

    Raises:
        ValueError: If the text is not a 2x2 literal
    """
    match = _MATRIX_PATTERN.match(text)
    if not match:
        raise ValueError(f"Not a 2x2 matrix literal: {text!r}")
    return Mat2(*match.groups())


def format_matrix(m: Mat2) -> str:
    return f"[[{format_entry(m.a)},{format_entry(m.b)}],[{format_entry(m.c)},{format_entry(m.d)}]]"
