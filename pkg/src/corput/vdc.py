"""
The base-2 Van der Corput sequence and its discrepancy.

d_N = N * D_N is computed three independent ways:
- d_explicit: sum of ||N / 2^j|| closed by an exact geometric tail
- d_recurrence: pair iteration of d_{2m} = d_m, d_{2m+1} = (d_m + d_{m+1} + 1) / 2
- discrepancy_oracle: the extreme and star discrepancy of the sorted points

Exhaustive checks run on scaled-integer tables (corput.tables); every
comparison is exact, except the logarithmic upper bound, which is decided by
certified interval evaluation.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

import numpy as np

from .bits import reverse
from .certified import Enclosure, decide, evaluate, log2
from .numerics import ONE, ZERO, Dyadic, dist_nearest_int
from .parallel import Range, partition, run_partitioned
from .report import Verdict
from .tables import d_range, d_table, scale_for

logger = logging.getLogger(__name__)


# Points and exact values


def radical_inverse(n: int) -> Dyadic:
    """omega_n: the binary digits of n mirrored across the radix point."""
    if n < 0:
        raise ValueError(f"radical_inverse requires n >= 0, got {n}")
    if n == 0:
        return ZERO
    return Dyadic(reverse(n), n.bit_length())


def _radical_scaled(n: np.ndarray, width: int) -> np.ndarray:
    """omega_n * 2^width for every n < 2^width."""
    out = np.zeros_like(n)
    for i in range(width):
        out |= ((n >> i) & 1) << (width - 1 - i)
    return out


def d_explicit(n: int) -> Dyadic:
    """d_N = sum over j >= 1 of ||N / 2^j||."""
    if n < 0:
        raise ValueError(f"d_explicit requires N >= 0, got {n}")
    if n == 0:
        return ZERO
    # first j with N / 2^j <= 1/2; every later term is N / 2^j itself
    j0 = (n - 1).bit_length() + 1
    total = sum((dist_nearest_int(n, j) for j in range(1, j0)), ZERO)
    return total + Dyadic(n, j0 - 1)


def d_recurrence(n: int) -> Dyadic:
    """d_N by carrying (d_m, d_{m+1}) down the bits of N, most significant first."""
    if n < 0:
        raise ValueError(f"d_recurrence requires N >= 0, got {n}")
    if n == 0:
        return ZERO
    a, b = ONE, ONE  # (d_1, d_2)
    for bit in format(n, "b")[1:]:
        mid = (a + b + 1).half()
        a, b = (a, mid) if bit == "0" else (mid, b)
    return a


def d_explicit_range(start: int, stop: int, scale: int) -> np.ndarray:
    """d_n * 2^scale for start <= n < stop, from the distance terms one digit level at a time."""
    if not 0 <= start < stop:
        raise ValueError(f"d_explicit_range requires 0 <= start < stop, got ({start}, {stop})")
    if scale < scale_for(stop):
        raise ValueError(f"Scale 2^{scale} too coarse for n < {stop}")
    n = np.arange(start, stop, dtype=np.int64)
    # terms with 2^j > 2^scale > n add up to n / 2^scale
    total = n.copy()
    for j in range(1, scale + 1):
        r = n & ((1 << j) - 1)
        total += np.minimum(r, (1 << j) - r) << (scale - j)
    return total


def d_batch(
    limit: int,
    chunk: int | None = None,
    start: int = 0,
) -> Iterator[tuple[int, Dyadic]]:
    """(n, d_n) for n = start .. limit - 1, in order."""
    if not 0 <= start < limit:
        raise ValueError(f"d_batch requires 0 <= start < limit, got ({start}, {limit})")
    scale = scale_for(limit)
    for lo, stop in partition(start, limit, chunk):
        logger.debug("d_batch chunk [%d, %d)", lo, stop)
        for offset, value in enumerate(d_range(lo, stop, scale).tolist()):
            yield lo + offset, Dyadic(value, scale)


def _oracle(points: np.ndarray, width: int) -> tuple[Fraction, Fraction]:
    """N * D_N and N * D*_N of sorted points x_i = points[i] / 2^width."""
    n = len(points)
    one = 1 << width
    dtype = np.int64 if 2 * width + n.bit_length() < 60 else object
    i = np.arange(1, n + 1, dtype=dtype)
    # a_i = N * 2^width * (i / N - x_(i))
    a = i * one - n * points.astype(dtype)
    extreme = Fraction(one + int(a.max()) - int(a.min()), one)
    star = Fraction(max(int(a.max()), one - int(a.min())), one)
    return extreme, star


def discrepancy_oracle(n: int) -> tuple[Fraction, Fraction]:
    """(N * D_N, N * D*_N) of the first N points, from their exact sorted order."""
    if n < 1:
        raise ValueError(f"discrepancy_oracle requires N >= 1, got {n}")
    width = max(1, (n - 1).bit_length())
    points = np.sort(_radical_scaled(np.arange(n, dtype=np.int64), width))
    return _oracle(points, width)


def discrepancy(n: int) -> tuple[Fraction, Fraction]:
    """(D_N, D*_N), with D_0 = D*_0 = 0."""
    if n < 0:
        raise ValueError(f"discrepancy requires N >= 0, got {n}")
    if n == 0:
        return Fraction(0), Fraction(0)
    extreme, star = discrepancy_oracle(n)
    return extreme / n, star / n


def check_agreement(limit: int) -> Verdict:
    """The three methods agree, and D*_N = D_N, for 1 <= N <= limit."""
    if limit < 1:
        raise ValueError(f"check_agreement requires limit >= 1, got {limit}")
    width = max(1, (limit - 1).bit_length())
    points = _radical_scaled(np.arange(limit, dtype=np.int64), width)
    for n in range(1, limit + 1):
        explicit = d_explicit(n)
        recurrence = d_recurrence(n)
        extreme, star = _oracle(np.sort(points[:n]), width)
        if not explicit == recurrence == extreme == star:
            return Verdict.fail(
                n=n, explicit=explicit, recurrence=recurrence, oracle=extreme, oracle_star=star
            )
    return Verdict.ok()


def check_radical_inverse(limit: int) -> Verdict:
    """radical_inverse agrees with the vectorised bit mirror for 0 <= n < limit."""
    if limit < 1:
        raise ValueError(f"check_radical_inverse requires limit >= 1, got {limit}")
    width = max(1, (limit - 1).bit_length())
    points = _radical_scaled(np.arange(limit, dtype=np.int64), width)
    for n in range(limit):
        if radical_inverse(n) != Dyadic(int(points[n]), width):
            return Verdict.fail(n=n, scalar=radical_inverse(n), table=Dyadic(int(points[n]), width))
    return Verdict.ok()


def check_batch(limit: int, chunk: int | None = None) -> Verdict:
    """d_batch equals d_explicit row by row for 0 <= n < limit."""
    for n, value in d_batch(limit, chunk):
        if value != d_explicit(n):
            return Verdict.fail(n=n, batch=value, explicit=d_explicit(n))
    return Verdict.ok()


# Exhaustive structural checks


def check_symmetry(k: int) -> Verdict:
    """
    d_N is symmetric on the block [2^(k-1), 2^k]: d_{2^(k-1) + m} = d_{2^k - m}
    for 0 <= m <= 2^(k-1).
    """
    if k < 1:
        raise ValueError(f"check_symmetry requires k >= 1, got {k}")
    top = 1 << k
    mirror_sum = top + (top >> 1)
    table = d_table(top + 1)
    n = np.arange(top >> 1, top + 1)
    bad = np.flatnonzero(table[n] != table[mirror_sum - n])
    if bad.size:
        witness = int(n[bad[0]])
        return Verdict.fail(
            k=k, n=witness, d=d_recurrence(witness), mirror=d_recurrence(mirror_sum - witness)
        )
    return Verdict.ok()


def check_minimum(limit: int) -> Verdict:
    """d_N >= 1 for 1 <= N < limit."""
    if limit < 2:
        raise ValueError(f"check_minimum requires limit >= 2, got {limit}")
    scale = scale_for(limit)
    table = d_table(limit, scale)
    bad = np.flatnonzero(table[1:] < (1 << scale))
    if bad.size:
        witness = int(bad[0]) + 1
        return Verdict.fail(n=witness, d=d_recurrence(witness))
    return Verdict.ok()


def check_doubling(limit: int) -> Verdict:
    """d_{2N} = d_N for 0 <= N < limit."""
    if limit < 1:
        raise ValueError(f"check_doubling requires limit >= 1, got {limit}")
    table = d_table(2 * limit)
    bad = np.flatnonzero(table[0::2] != table[:limit])
    if bad.size:
        return Verdict.fail(n=int(bad[0]))
    return Verdict.ok()


# Envelope of the first maxima


@dataclass(frozen=True, slots=True)
class EnvelopePoint:
    """First maximum of d on [2^(k-1), 2^k]."""
    k: int
    n_star: int
    value: Fraction


def envelope_point(k: int) -> EnvelopePoint:
    if k < 1:
        raise ValueError(f"envelope_point requires k >= 1, got {k}")
    sign = -1 if k % 2 else 1
    n_star = ((1 << (k + 1)) + sign) // 3
    value = Fraction(k, 3) + Fraction(7, 9) + Fraction(sign, 9 * (1 << (k - 1)))
    return EnvelopePoint(k, n_star, value)


def check_envelope(levels: int) -> Verdict:
    """For k <= levels, the closed-form point is the first maximizer on [2^(k-1), 2^k]."""
    if levels < 1:
        raise ValueError(f"check_envelope requires levels >= 1, got {levels}")
    limit = (1 << levels) + 1
    scale = scale_for(limit)
    table = d_table(limit, scale)
    for k in range(1, levels + 1):
        lo, hi = 1 << (k - 1), 1 << k
        first = lo + int(np.argmax(table[lo:hi + 1]))
        value = Dyadic(int(table[first]), scale)
        point = envelope_point(k)
        if first != point.n_star or value != point.value:
            return Verdict.fail(k=k, n_first=first, d_first=value, n_star=point.n_star, value=point.value)
        logger.debug("envelope level %d: n* = %d, d = %s", k, first, value)
    return Verdict.ok()


def polygon_value(x: int, k: int) -> Fraction:
    """Height at x of the segment joining envelope points k and k + 1."""
    p, q = envelope_point(k), envelope_point(k + 1)
    return p.value + (q.value - p.value) * Fraction(x - p.n_star, q.n_star - p.n_star)


def check_polygon(levels: int) -> Verdict:
    """d_N lies on or under the envelope polygon for n*(k) <= N <= n*(k+1), k <= levels."""
    if levels < 1:
        raise ValueError(f"check_polygon requires levels >= 1, got {levels}")
    limit = envelope_point(levels + 1).n_star + 1
    scale = scale_for(limit)
    table = d_table(limit, scale)
    for k in range(1, levels + 1):
        p, q = envelope_point(k), envelope_point(k + 1)
        span = q.n_star - p.n_star
        den = math.lcm(p.value.denominator, q.value.denominator)
        # den * span * line(x) = base + slope * (x - n*(k)), all integers
        base = int(p.value * den) * span
        slope = int((q.value - p.value) * den)
        x = np.arange(p.n_star, q.n_star + 1)
        lhs = table[p.n_star:q.n_star + 1].astype(object) * (den * span)
        rhs = (base + slope * (x - p.n_star).astype(object)) * (1 << scale)
        bad = np.flatnonzero(lhs > rhs)
        if bad.size:
            witness = int(x[bad[0]])
            return Verdict.fail(k=k, n=witness, d=d_recurrence(witness), line=polygon_value(witness, k))
    return Verdict.ok()


# Logarithmic upper bound


def _floor_log2(n: np.ndarray) -> np.ndarray:
    # frexp is exact for integers below 2^53
    return np.frexp(n.astype(np.float64))[1].astype(np.int64) - 1


def _upper_bound_violation(rng: Range, scale: int) -> int | None:
    """First N in the range with 3 (d_N - 1) > log2 N, or None."""
    start, stop = max(rng[0], 1), rng[1]
    if start >= stop:
        return None
    n = np.arange(start, stop, dtype=np.int64)
    excess = 3 * (d_range(start, stop, scale) - (1 << scale))
    floor_log = _floor_log2(n)
    # 3 (d_N - 1) <= floor(log2 N) settles most indices exactly
    unsettled = np.flatnonzero(excess > (floor_log << scale))
    for i in unsettled.tolist():
        N = start + i
        lhs = Dyadic(int(excess[i]), scale)
        if N & (N - 1) == 0 or lhs >= int(floor_log[i]) + 1:
            return N
        if not decide(lambda bits, N=N, lhs=lhs: log2(N, bits).ge(lhs)):
            return N
    return None


def check_upper_bound(limit: int, jobs: int | None = None) -> Verdict:
    """d_N <= (1/3) log2 N + 1 for 1 <= N < limit."""
    if limit < 2:
        raise ValueError(f"check_upper_bound requires limit >= 2, got {limit}")
    scale = scale_for(limit)
    ranges = partition(1, limit)
    for witness in run_partitioned(partial(_upper_bound_violation, scale=scale), ranges, jobs):
        if witness is not None:
            return Verdict.fail(n=witness, d=d_recurrence(witness))
    return Verdict.ok()


def limsup_target(bits: int | None = None) -> Enclosure:
    """4/9 + (1/3) log2 3."""
    return evaluate(lambda ctx: ctx.mpf(4) / 9 + ctx.log(3) / (3 * ctx.log(2)), bits)


def limsup_enclosure(k: int, bits: int | None = None) -> Enclosure:
    """d_{n*(k)} - (1/3) log2 n*(k), certified."""
    if k < 2:
        raise ValueError(f"limsup_probe requires k >= 2, got {k}")
    point = envelope_point(k)
    return point.value - log2(point.n_star, bits) * Fraction(1, 3)


def limsup_probe(k: int) -> float:
    return float(limsup_enclosure(k))
