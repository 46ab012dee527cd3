"""
Certified real arithmetic on top of mpmath interval arithmetic.

Transcendental quantities (logarithms, exponentials, the normal law) are
evaluated with outward rounding in `mpmath.iv` and handed back as an
Enclosure: a pair of exact Fractions known to bracket the true value. Further
arithmetic with exact rationals stays exact on the endpoints.

Comparisons are three-valued. True or False is certain, and None means the
enclosure straddles the bound. `decide` retries a comparison at higher
precision and raises PrecisionBudgetError if it never settles.
"""

from __future__ import annotations

import contextlib
import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from mpmath import iv

from .config import get_config
from .numerics import Dyadic

logger = logging.getLogger(__name__)

Exact = Fraction | int | Dyadic


class PrecisionBudgetError(ValueError):
    """A certified evaluation could not be settled within the precision budget."""


def _exact(value: Exact | float) -> Fraction:
    if isinstance(value, Dyadic):
        return value.to_fraction()
    return Fraction(value)


def _raw_to_fraction(raw: tuple) -> Fraction:
    """Exact value of a raw mpf tuple (sign, man, exp, bc)."""
    sign, man, exp, _ = raw
    if not man and exp:
        raise PrecisionBudgetError("Interval endpoint is not finite")
    q = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -q if sign else q


@dataclass(frozen=True, slots=True)
class Enclosure:
    """Closed interval [lo, hi] with exact endpoints known to contain a real number."""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value: Exact | float) -> Enclosure:
        q = _exact(value)
        return cls(q, q)

    @classmethod
    def from_interval(cls, value: Any) -> Enclosure:
        lo, hi = value._mpi_
        return cls(_raw_to_fraction(lo), _raw_to_fraction(hi))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, value: Exact | float) -> bool:
        return self.lo <= _exact(value) <= self.hi

    # Three-valued comparisons against exact bounds

    def le(self, bound: Exact | float) -> bool | None:
        b = _exact(bound)
        if self.hi <= b:
            return True
        if self.lo > b:
            return False
        return None

    def lt(self, bound: Exact | float) -> bool | None:
        b = _exact(bound)
        if self.hi < b:
            return True
        if self.lo >= b:
            return False
        return None

    def ge(self, bound: Exact | float) -> bool | None:
        b = _exact(bound)
        if self.lo >= b:
            return True
        if self.hi < b:
            return False
        return None

    def gt(self, bound: Exact | float) -> bool | None:
        b = _exact(bound)
        if self.lo > b:
            return True
        if self.hi <= b:
            return False
        return None

    # Exact endpoint arithmetic

    def _coerce(self, other: object) -> Enclosure | None:
        if isinstance(other, Enclosure):
            return other
        if isinstance(other, Fraction | int | Dyadic):
            return Enclosure.exact(other)
        return None

    def __add__(self, other: object) -> Enclosure:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> Enclosure:
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other: object) -> Enclosure:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Enclosure(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other: object) -> Enclosure:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Enclosure:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure(min(products), max(products))

    __rmul__ = __mul__

    def __abs__(self) -> Enclosure:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(Fraction(0), max(-self.lo, self.hi))


@contextlib.contextmanager
def working_precision(bits: int | None = None) -> Iterator[Any]:
    """Temporarily set the precision of mpmath.iv, yielding the context."""
    bits = bits or get_config().precision.bits
    saved = iv.prec
    iv.prec = bits
    try:
        yield iv
    finally:
        iv.prec = saved


def evaluate(expr: Callable[[Any], Any], bits: int | None = None) -> Enclosure:
    """Evaluate expr(iv) at the given precision and return its enclosure."""
    with working_precision(bits) as ctx:
        return Enclosure.from_interval(ctx.mpf(1) * expr(ctx))


def decide(
    compare: Callable[[int], bool | None],
    bits: int | None = None,
    attempts: int = 4,
) -> bool:
    """Run a three-valued comparison, doubling precision until it settles."""
    bits = bits or get_config().precision.bits
    for _ in range(attempts):
        result = compare(bits)
        if result is not None:
            return result
        logger.debug("comparison undecided at %d bits, retrying", bits)
        bits *= 2
    raise PrecisionBudgetError(f"Comparison undecided at {bits // 2} bits")


def certified_floor(
    enclose: Callable[[int], Enclosure],
    bits: int | None = None,
    attempts: int = 4,
) -> int:
    """floor of a real given by enclose(bits), refining until both endpoints agree."""
    bits = bits or get_config().precision.bits
    for _ in range(attempts):
        value = enclose(bits)
        lo, hi = math.floor(value.lo), math.floor(value.hi)
        if lo == hi:
            return lo
        logger.debug("floor undecided at %d bits, retrying", bits)
        bits *= 2
    raise PrecisionBudgetError(f"Floor undecided at {bits // 2} bits")


def to_interval(ctx: Any, value: Exact | float) -> Any:
    """Outward-rounded interval for an exact value."""
    q = _exact(value)
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


def log2(value: Exact | float, bits: int | None = None) -> Enclosure:
    """Enclosure of log2(value) for value > 0."""
    q = _exact(value)
    if q <= 0:
        raise ValueError(f"log2 requires a positive argument, got {q}")
    # exact on powers of two
    if q.numerator & (q.numerator - 1) == 0 and q.denominator & (q.denominator - 1) == 0:
        return Enclosure.exact(q.numerator.bit_length() - q.denominator.bit_length())
    return evaluate(lambda ctx: ctx.log(to_interval(ctx, q)) / ctx.log(2), bits)


def ln(value: Exact | float, bits: int | None = None) -> Enclosure:
    """Enclosure of the natural logarithm of value > 0."""
    q = _exact(value)
    if q <= 0:
        raise ValueError(f"ln requires a positive argument, got {q}")
    if q == 1:
        return Enclosure.exact(0)
    return evaluate(lambda ctx: ctx.log(to_interval(ctx, q)), bits)


def power(base: Exact | float, exponent: Enclosure | Exact, bits: int | None = None) -> Enclosure:
    """Enclosure of base ** exponent for base > 0, via exp(exponent * ln(base))."""
    q = _exact(base)
    if q <= 0:
        raise ValueError(f"power requires a positive base, got {q}")
    e = exponent if isinstance(exponent, Enclosure) else Enclosure.exact(exponent)
    # monotone in the exponent, so the two endpoint images bracket the range
    ends = [
        evaluate(lambda ctx, x=x: ctx.exp(to_interval(ctx, x) * ctx.log(to_interval(ctx, q))), bits)
        for x in (e.lo, e.hi)
    ]
    return Enclosure(min(r.lo for r in ends), max(r.hi for r in ends))


def normal_cdf(y: Exact | float, bits: int | None = None) -> Enclosure:
    """
    Enclosure of Phi(y) = 1/2 + erf(y / sqrt 2) / 2.

    |y| <= 9: Maclaurin series of erf, summed until the terms decrease and
    drop below the working precision. The remainder of the alternating tail is
    bounded by the first omitted term. |y| > 9: the Mills-ratio bound
    0 <= Phi(-|y|) <= phi(y) / |y|.
    """
    q = _exact(y)
    if q == 0:
        return Enclosure.exact(Fraction(1, 2))
    bits = bits or get_config().precision.bits
    a = abs(q)

    if a > 9:
        tail = evaluate(
            lambda ctx: ctx.exp(-to_interval(ctx, a * a) / 2)
            / (ctx.sqrt(2 * ctx.pi) * to_interval(ctx, a)),
            bits,
        )
        small = Enclosure(Fraction(0), tail.hi)
        return 1 - small if q > 0 else small

    # extra bits cover the cancellation in the alternating sum (terms reach e^(x^2))
    work = bits + 2 * int(a * a) + 16

    x_squared = a * a / 2
    eps = Fraction(1, 2 ** (bits + 8))

    def expr(ctx: Any) -> Any:
        x = to_interval(ctx, a) / ctx.sqrt(2)
        x2 = to_interval(ctx, x_squared)
        term = x  # x^(2n+1) / n!
        total = ctx.mpf(0)
        n = 0
        while True:
            contribution = term / (2 * n + 1)
            total += contribution if n % 2 == 0 else -contribution
            n += 1
            term = term * x2 / n
            nxt = term / (2 * n + 1)
            # terms decrease from here on once n + 1 > x^2
            if n > x_squared and Enclosure.from_interval(nxt).hi < eps:
                break
        remainder = nxt * ctx.mpf([-1, 1])
        erf = 2 / ctx.sqrt(ctx.pi) * (total + remainder)
        return (1 + erf) / 2

    value = evaluate(expr, work)
    return value if q > 0 else 1 - value


def factorial_bounds(n: int, bits: int | None = None) -> tuple[Enclosure, Enclosure]:
    """Enclosures of sqrt(2 pi) n^(n+1/2) e^-n and e n^(n+1/2) e^-n."""
    if n < 1:
        raise ValueError(f"factorial_bounds requires n >= 1, got {n}")
    lower = evaluate(lambda ctx: ctx.sqrt(2 * ctx.pi) * ctx.mpf(n) ** n * ctx.sqrt(n) * ctx.exp(-n), bits)
    if n == 1:
        # e * 1 * e^-1 is exactly 1
        return lower, Enclosure.exact(1)
    upper = evaluate(lambda ctx: ctx.mpf(n) ** n * ctx.sqrt(n) * ctx.exp(1 - n), bits)
    return lower, upper
