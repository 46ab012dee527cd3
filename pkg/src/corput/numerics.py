"""
Exact numbers shared by every module.

Two value types:
- Dyadic: num / 2^exp, normalized so that exp == 0 or num is odd. Every d_N,
  every radical inverse and every S(N) lives here.
- Rational: fractions.Fraction. Discrepancy-oracle values, recurrence
  parameters and psi rational parts live here. Every Dyadic embeds losslessly.

Canonical text forms are "p/2^e" (Dyadic, "p" when e == 0) and "p/q"
(Rational, "p" when q == 1). All CSV/JSON emitters use them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_DYADIC_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*2\^(\d+))?\s*$")


@dataclass(frozen=True, slots=True, eq=False)
class Dyadic:
    """Exact dyadic rational num / 2^exp in normal form."""
    num: int
    exp: int = 0

    def __post_init__(self):
        if self.exp < 0:
            raise ValueError(f"Dyadic exponent must be >= 0, got {self.exp}")
        num, exp = self.num, self.exp
        if num == 0:
            exp = 0
        elif exp and not num & 1:
            shift = min(exp, (num & -num).bit_length() - 1)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> Dyadic:
        """Convert a Fraction whose denominator is a power of two."""
        q = Fraction(value)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> Dyadic:
        """Parse the canonical form "p/2^e" (or a bare integer "p")."""
        match = _DYADIC_RE.match(text)
        if not match:
            raise ValueError(f"Invalid dyadic: {text!r}. Use p/2^e (e.g., 37/2^4)")
        return cls(int(match.group(1)), int(match.group(2) or 0))

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def scaled(self, exp: int) -> int:
        """Numerator over the common denominator 2^exp (exp >= self.exp)."""
        if exp < self.exp:
            raise ValueError(f"Cannot express {self} over 2^{exp}")
        return self.num << (exp - self.exp)

    def half(self) -> Dyadic:
        return Dyadic(self.num, self.exp + 1)

    def shift(self, k: int) -> Dyadic:
        """Multiply by 2^-k (k may be negative)."""
        if k >= 0:
            return Dyadic(self.num, self.exp + k)
        if -k <= self.exp:
            return Dyadic(self.num, self.exp + k)
        return Dyadic(self.num << (-k - self.exp), 0)

    # Arithmetic

    def _coerce(self, other: object) -> Dyadic | None:
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other)
        return None

    def __add__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e = max(self.exp, o.exp)
        return Dyadic(self.scaled(e) + o.scaled(e), e)

    __radd__ = __add__

    def __sub__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e = max(self.exp, o.exp)
        return Dyadic(self.scaled(e) - o.scaled(e), e)

    def __rsub__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Dyadic(self.num * o.num, self.exp + o.exp)

    __rmul__ = __mul__

    def __neg__(self) -> Dyadic:
        return Dyadic(-self.num, self.exp)

    def __abs__(self) -> Dyadic:
        return Dyadic(abs(self.num), self.exp)

    # Comparison and hashing agree with Fraction and int

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, int | Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other: object) -> bool:
        if isinstance(other, Dyadic | int | Fraction):
            return self.to_fraction() < _as_fraction(other)
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, Dyadic | int | Fraction):
            return self.to_fraction() <= _as_fraction(other)
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, Dyadic | int | Fraction):
            return self.to_fraction() > _as_fraction(other)
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, Dyadic | int | Fraction):
            return self.to_fraction() >= _as_fraction(other)
        return NotImplemented

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __bool__(self) -> bool:
        return self.num != 0

    def __str__(self) -> str:
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/2^{self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self})"


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)


def _as_fraction(value: Dyadic | int | Fraction) -> Fraction:
    if isinstance(value, Dyadic):
        return value.to_fraction()
    return Fraction(value)


def as_fraction(value: Dyadic | int | Fraction) -> Fraction:
    """Embed any exact value into Rational."""
    return _as_fraction(value)


def format_rational(value: Fraction | int) -> str:
    """Canonical "p/q" text of a Rational in lowest terms ("p" when q == 1)."""
    return str(Fraction(value))


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or an exact decimal such as "0.01"."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid rational: {text!r}. Use p/q (e.g., 3/2)") from e


def format_float(value: float | Fraction | Dyadic, digits: int = 17) -> str:
    """Float text with `digits` significant digits, round-to-nearest."""
    return format(float(value), f".{digits}g")


def dist_nearest_int(n: int, j: int) -> Dyadic:
    """||n / 2^j||, the distance from n / 2^j to the nearest integer."""
    if n < 0 or j < 1:
        raise ValueError(f"dist_nearest_int requires n >= 0 and j >= 1, got ({n}, {j})")
    r = n & ((1 << j) - 1)
    return Dyadic(min(r, (1 << j) - r), j)
