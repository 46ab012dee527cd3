"""
The summatory function S(N) = d_1 + ... + d_N and its periodic fluctuation.

With S'(N) = S(N) - d_N / 2 the doubling law S'(2N) = 2 S'(N) + N / 2 is
exact, so R(N) = S'(N) / N - (1/4) log2 N satisfies R(2N) = R(N) and

    S(N) / N = (1/4) log2 N + d_N / (2N) + psi(log2 N)

for a 1-periodic psi. The level-k approximant psi_k takes the value R(N) at
{log2 N} for 2^(k-1) <= N < 2^k. Consecutive approximants differ by
O(k / 2^k); the constant is calibrated here and reported, never assumed.

Stern's diatomic sequence obeys the same scheme with the factor 3 in place of 2.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

import numpy as np

from .bits import reverse
from .certified import (
    Enclosure,
    PrecisionBudgetError,
    certified_floor,
    decide,
    evaluate,
    log2,
    power,
    to_interval,
)
from .config import get_config
from .numerics import HALF, ONE, ZERO, Dyadic
from .parallel import Range, partition, run_partitioned
from .report import Verdict
from .tables import d_range, d_table, s_prime_table, scale_for, stern_table

logger = logging.getLogger(__name__)

_LN2 = math.log(2)


# Summatory function


def summatory(n: int) -> Dyadic:
    """S(N) = d_1 + ... + d_N, summed chunk by chunk."""
    if n < 0:
        raise ValueError(f"summatory requires N >= 0, got {n}")
    if n == 0:
        return ZERO
    scale = scale_for(n + 1)
    total = sum(int(d_range(lo, hi, scale).sum()) for lo, hi in partition(0, n + 1))
    return Dyadic(total, scale)


def s_prime(n: int) -> Dyadic:
    """
    S'(N) = S(N) - d_N / 2 in O(log N) steps.

    Carries (d_m, d_{m+1}, S'(m)) down the bits of N using
    S'(2m) = 2 S'(m) + m / 2 and S'(2m+1) = S'(2m) + (d_{2m} + d_{2m+1}) / 2.
    """
    if n < 1:
        raise ValueError(f"s_prime requires N >= 1, got {n}")
    a, b, s = ONE, ONE, HALF
    m = 1
    for bit in format(n, "b")[1:]:
        mid = (a + b + 1).half()
        even = 2 * s + Dyadic(m, 1)
        if bit == "0":
            a, b, s = a, mid, even
            m = 2 * m
        else:
            a, b, s = mid, b, even + (a + mid).half()
            m = 2 * m + 1
    return s


def check_s_prime(limit: int) -> Verdict:
    """The bitwise S'(N) agrees with the summed table for 1 <= N < limit."""
    table, scale = s_prime_table(limit)
    for n in range(1, limit):
        if s_prime(n) != Dyadic(int(table[n]), scale):
            return Verdict.fail(n=n, bitwise=s_prime(n), summed=Dyadic(int(table[n]), scale))
    return Verdict.ok()


def check_s_doubling(limit: int) -> Verdict:
    """S'(2N) = 2 S'(N) + N / 2 for 1 <= N < limit."""
    if limit < 2:
        raise ValueError(f"check_s_doubling requires limit >= 2, got {limit}")
    table, scale = s_prime_table(2 * limit)
    n = np.arange(1, limit, dtype=np.int64)
    bad = np.flatnonzero(table[2 * n] != 2 * table[n] + (n << (scale - 1)))
    if bad.size:
        witness = int(n[bad[0]])
        return Verdict.fail(n=witness, s_prime_2n=s_prime(2 * witness), s_prime_n=s_prime(witness))
    return Verdict.ok()


def check_r_invariance(limit: int) -> Verdict:
    """S'(2N) / (2N) - S'(N) / N = 1/4 for 1 <= N < limit, cross-multiplied by 8N."""
    if limit < 2:
        raise ValueError(f"check_r_invariance requires limit >= 2, got {limit}")
    table, scale = s_prime_table(2 * limit)
    n = np.arange(1, limit, dtype=np.int64)
    bad = np.flatnonzero(4 * table[2 * n] - 8 * table[n] != (2 * n) << scale)
    if bad.size:
        return Verdict.fail(n=int(n[bad[0]]))
    return Verdict.ok()


def check_theorem3(limit: int) -> Verdict:
    """
    For N = N0 * 2^j with N0 odd:
    S(N) / N - d_N / (2N) - S'(N0) / N0 = j / 4, exactly.
    """
    if limit < 2:
        raise ValueError(f"check_theorem3 requires limit >= 2, got {limit}")
    scale = scale_for(limit)
    d = d_table(limit, scale)
    s = np.cumsum(d.astype(object))
    n = np.arange(1, limit, dtype=np.int64)
    low = n & -n  # 2^j
    j = np.frexp(low.astype(np.float64))[1] - 1
    odd = n // low
    # multiply through by 4N * 2^(scale+1); S'(N0) = S(N0) - d_N0 / 2
    lhs = 4 * (2 * s[n] - d[n]) - 4 * low.astype(object) * (2 * s[odd] - d[odd])
    rhs = j.astype(object) * n.astype(object) * (1 << (scale + 1))
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        return Verdict.fail(n=int(n[bad[0]]))
    return Verdict.ok()


def mean_value_deviation(limit: int) -> float:
    """max |S(N) / N - (1/4) log2 N| over 2 <= N < limit (at N = 1 it is exactly 1)."""
    if limit < 3:
        raise ValueError(f"mean_value_deviation requires limit >= 3, got {limit}")
    table, scale = s_prime_table(limit)
    d = d_table(limit)
    n = np.arange(2, limit, dtype=np.float64)
    s = table[2:].astype(np.float64) / float(1 << scale) + d[2:] / float(1 << (scale - 1)) / 2
    return float(np.max(np.abs(s / n - np.log2(n) / 4)))


# Level approximants


@dataclass(frozen=True, slots=True)
class FluctuationSample:
    """
    psi_k at {log2 n}: R(n) = r_rational - (1/4) log2 n.

    psi_value is the float collapse. Exact comparisons go through r_rational,
    with error_radius 0 since the sample is psi_k by definition.
    """
    n: int
    frac: float
    r_rational: Fraction
    psi_value: float
    level: int
    error_radius: float = 0.0

    def enclosure(self, bits: int | None = None) -> Enclosure:
        return self.r_rational - log2(self.n, bits) * Fraction(1, 4)

    def exact_gap(self, other: FluctuationSample) -> Fraction:
        """R(self.n) - R(other.n), exact when the two indices differ by a power of two."""
        big, small = max(self.n, other.n), min(self.n, other.n)
        shift = big.bit_length() - small.bit_length()
        if small << shift != big:
            raise ValueError(f"exact_gap requires n and 2^j n, got ({self.n}, {other.n})")
        j = shift if self.n >= other.n else -shift
        return self.r_rational - other.r_rational - Fraction(j, 4)


def psi_sample_level(k: int) -> list[FluctuationSample]:
    """One sample per 2^(k-1) <= N < 2^k, sorted by frac; the first is psi_k(0) = 1/2."""
    if k < 1:
        raise ValueError(f"psi_sample_level requires k >= 1, got {k}")
    table, scale = s_prime_table(1 << k)
    samples = []
    for n in range(1 << (k - 1), 1 << k):
        r = Fraction(int(table[n]), n << scale)
        log_n = math.log2(n)
        samples.append(FluctuationSample(n, log_n - (k - 1), r, float(r) - log_n / 4, k))
    return samples


def envelope_tail(level: int, constant: float) -> float:
    """K_l = C * sum_{i >= l} i / 2^i = C (l + 1) / 2^(l-1)."""
    return constant * (level + 1) / 2 ** (level - 1)


def psi_eval(
    x: Fraction | float | str,
    k: int,
    constant: float | None = None,
) -> tuple[float, float]:
    """
    psi_k at the grid point N_k = max{N in [2^(k-1), 2^k) : {log2 N} <= x},
    with the radius 2 K_k that bounds its distance to psi(x).
    """
    cfg = get_config()
    if k < 2:
        raise ValueError(f"psi_eval requires k >= 2, got {k}")
    if k > cfg.precision.max_psi_level:
        raise PrecisionBudgetError(f"psi_eval level {k} exceeds max_psi_level {cfg.precision.max_psi_level}")
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"psi_eval requires 0 <= x <= 1, got {x}")
    if x in (0, 1):
        n = 1 << (k - 1)
    else:
        # 2^(k-1+x) is irrational here, so its floor settles
        n = certified_floor(lambda bits: power(2, k - 1 + x, bits), bits=max(cfg.precision.bits, k + 64))
    value = s_prime(n).to_fraction() / n - log2(n) * Fraction(1, 4)
    if constant is None:
        constant = default_envelope_constant()
    return float(value), 2 * envelope_tail(k, constant)


def _s_prime_window(lo: int, hi: int, scale: int) -> tuple[np.ndarray, np.ndarray]:
    """Scaled d_n for n in [lo - 1, hi), and S'(n) as floats for n in [lo, hi)."""
    scaled = d_range(lo - 1, hi, scale)
    steps = np.cumsum(scaled[:-1] + scaled[1:])
    base = s_prime(lo - 1).to_fraction() if lo > 1 else Fraction(0)
    return scaled, float(base) + steps / float(1 << (scale + 1))


def _even_ranges(lo: int, hi: int) -> list[Range]:
    chunk = get_config().parallel.chunk
    return partition(lo, hi, chunk + chunk % 2)


def _cauchy_range(rng: Range, scale: int) -> float:
    lo, hi = rng
    scaled, s = _s_prime_window(lo, hi, scale)
    d = scaled[1:] / float(1 << scale)
    two_n = np.arange(lo, hi, 2, dtype=np.float64)
    # psi_{k+1}(2N+1) - psi_k(N); psi_{k+1}(2N) - psi_k(N) is exactly 0
    gap = (
        (d[0::2] + d[1::2]) / (2 * two_n)
        - s[1::2] / (two_n * (two_n + 1))
        - np.log1p(1 / two_n) / (4 * _LN2)
    )
    return float(np.max(np.abs(gap)))


@functools.cache
def cauchy_deviation(k: int, jobs: int | None = None) -> float:
    """max |psi_{k+1} - psi_k| over matched grid points N -> 2N, 2N + 1 of level k."""
    if k < 2:
        raise ValueError(f"cauchy_deviation requires k >= 2, got {k}")
    ranges = _even_ranges(1 << k, 1 << (k + 1))
    return max(run_partitioned(partial(_cauchy_range, scale=k + 1), ranges, jobs))


@functools.cache
def calibrate_envelope(k_min: int, k_max: int) -> float:
    """C = 2 max_k (cauchy_deviation(k) 2^k / k) over k_min <= k <= k_max."""
    if not 2 <= k_min <= k_max:
        raise ValueError(f"calibrate_envelope requires 2 <= k_min <= k_max, got ({k_min}, {k_max})")
    worst = 0.0
    for k in range(k_min, k_max + 1):
        m = cauchy_deviation(k) * 2**k / k
        logger.debug("cauchy level %d: M_k = %.6f", k, m)
        worst = max(worst, m)
    return 2 * worst


def default_envelope_constant() -> float:
    """Envelope constant calibrated on the lower half of the configured levels."""
    limits = get_config().limits
    return calibrate_envelope(limits.cauchy_min_level, calibration_top(limits.cauchy_min_level, limits.cauchy_max_level))


def calibration_top(k_min: int, k_max: int) -> int:
    return (k_min + k_max) // 2


def check_cauchy(k_min: int, k_max: int, constant: float, jobs: int | None = None) -> Verdict:
    """cauchy_deviation(k) <= C k / 2^k for k_min <= k <= k_max."""
    for k in range(k_min, k_max + 1):
        deviation = cauchy_deviation(k, jobs)
        if deviation > constant * k / 2**k:
            return Verdict.fail(k=k, deviation=deviation, envelope=constant * k / 2**k)
    return Verdict.ok()


def _jump_range(rng: Range, scale: int) -> float:
    lo, hi = rng
    scaled = d_range(lo - 1, hi, scale) / float(1 << scale)
    return float(np.max((scaled[:-1] + scaled[1:]) / (2 * np.arange(lo, hi, dtype=np.float64))))


def jump_heights(k: int, jobs: int | None = None) -> float:
    """Largest jump (d_{N-1} + d_N) / (2N) of psi_k at an interior integer abscissa."""
    if k < 2:
        raise ValueError(f"jump_heights requires k >= 2, got {k}")
    ranges = partition((1 << (k - 1)) + 1, 1 << k)
    return max(run_partitioned(partial(_jump_range, scale=k), ranges, jobs))


def jump_constant(k_min: int, k_max: int, jobs: int | None = None) -> float:
    """C' = max_k jump_heights(k) 2^k / k."""
    return max(jump_heights(k, jobs) * 2**k / k for k in range(k_min, k_max + 1))


def check_monotone_pieces(k: int) -> Verdict:
    """
    On each cell [N, N+1) of level k, x -> S'(N) / x - (1/4) log2 x decreases:
    its value at N exceeds its limit at N + 1.
    """
    if k < 1:
        raise ValueError(f"check_monotone_pieces requires k >= 1, got {k}")
    table, scale = s_prime_table(1 << k)
    for n in range(1 << (k - 1), 1 << k):
        s = Fraction(int(table[n]), 1 << scale)
        drop = s / (n * (n + 1))

        def compare(bits: int, n: int = n, drop: Fraction = drop) -> bool | None:
            return (log2(Fraction(n + 1, n), bits) * Fraction(1, 4) + drop).gt(0)

        if not decide(compare):
            return Verdict.fail(k=k, n=n)
    return Verdict.ok()


def _continuity_range(rng: Range, scale: int) -> tuple[float, float, float]:
    lo, hi = rng
    _, s = _s_prime_window(lo, hi, scale)
    n = np.arange(lo, hi, dtype=np.float64)
    r = s / n - np.log2(n) / 4
    inner = float(np.max(np.abs(np.diff(r)))) if r.size > 1 else 0.0
    return float(r[0]), float(r[-1]), inner


def continuity_modulus(k: int, jobs: int | None = None) -> float:
    """Largest gap between neighbouring psi_k grid values, closing the circle at psi(1) = 1/2."""
    if k < 2:
        raise ValueError(f"continuity_modulus requires k >= 2, got {k}")
    ranges = partition(1 << (k - 1), 1 << k)
    parts = run_partitioned(partial(_continuity_range, scale=k), ranges, jobs)
    worst = max(inner for _, _, inner in parts)
    for (_, last, _), (first, _, _) in zip(parts, parts[1:], strict=False):
        worst = max(worst, abs(first - last))
    return max(worst, abs(0.5 - parts[-1][1]))


# Stern's diatomic sequence


def stern(n: int) -> int:
    """s_n by carrying (s_m, s_{m+1}) down the bits of n."""
    if n < 1:
        raise ValueError(f"stern requires n >= 1, got {n}")
    a, b = 1, 1  # (s_1, s_2)
    for bit in format(n, "b")[1:]:
        a, b = (a, a + b) if bit == "0" else (a + b, b)
    return a


def fibonacci(n: int) -> int:
    """F_n with F_1 = F_2 = 1."""
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def check_stern_values(limit: int, samples: int = 4096) -> Verdict:
    """stern(n) matches the table on about `samples` evenly spaced 1 <= n < limit."""
    if limit < 2:
        raise ValueError(f"check_stern_values requires limit >= 2, got {limit}")
    table = stern_table(limit)
    for n in range(1, limit, max(1, limit // samples)):
        if stern(n) != table[n]:
            return Verdict.fail(n=n, scalar=stern(n), table=int(table[n]))
    return Verdict.ok()


def _stern_twice_s_prime(limit: int) -> np.ndarray:
    """2 S'_stern(n) = 2 (s_1 + ... + s_n) - s_n for 0 <= n < limit."""
    table = stern_table(limit)
    return 2 * np.cumsum(table) - table


def check_stern_doubling(limit: int) -> Verdict:
    """S'_stern(2N) = 3 S'_stern(N) for 1 <= N < limit."""
    if limit < 2:
        raise ValueError(f"check_stern_doubling requires limit >= 2, got {limit}")
    twice = _stern_twice_s_prime(2 * limit)
    n = np.arange(1, limit)
    bad = np.flatnonzero(twice[2 * n] != 3 * twice[n])
    if bad.size:
        return Verdict.fail(n=int(n[bad[0]]))
    return Verdict.ok()


def _stern_levels(levels: int) -> Iterator[tuple[int, np.ndarray]]:
    """(k, s_n for 2^k <= n <= 2^(k+1)) for k = 0 .. levels."""
    level = np.array([1, 1], dtype=np.int64)
    for k in range(levels + 1):
        yield k, level
        nxt = np.empty(2 * level.size - 1, dtype=np.int64)
        nxt[0::2] = level
        nxt[1::2] = level[:-1] + level[1:]
        level = nxt


def stern_max(k: int) -> int:
    """max s_n over 2^k <= n < 2^(k+1)."""
    if k < 0:
        raise ValueError(f"stern_max requires k >= 0, got {k}")
    return next(int(level[:-1].max()) for level_k, level in _stern_levels(k) if level_k == k)


def check_stern_max(levels: int) -> Verdict:
    """stern_max(k) = F_{k+2} for k <= levels."""
    for k, level in _stern_levels(levels):
        found = int(level[:-1].max())
        if found != fibonacci(k + 2):
            return Verdict.fail(k=k, max=found, fibonacci=fibonacci(k + 2))
    return Verdict.ok()


def check_stern_reversal(limit: int) -> Verdict:
    """s_n = s_{n^R} for 1 <= n < limit."""
    table = stern_table(1 << (limit - 1).bit_length())
    for n in range(1, limit):
        if table[n] != table[reverse(n)]:
            return Verdict.fail(n=n, s_n=int(table[n]), reversed=reverse(n))
    return Verdict.ok()


def stern_psi_enclosure(n: int, s_prime_value: Fraction, bits: int | None = None) -> Enclosure:
    """S'_stern(N) / N^(log2 3)."""
    return evaluate(
        lambda ctx: to_interval(ctx, s_prime_value) / ctx.exp(ctx.log(n) * ctx.log(3) / ctx.log(2)),
        bits,
    )


@dataclass(frozen=True, slots=True)
class SternSample:
    n: int
    s_n: int
    frac: float
    psi: float


def stern_psi_sample(k: int) -> list[SternSample]:
    """psi_stern({log2 N}) for 2^(k-1) <= N < 2^k, sorted by frac."""
    if k < 1:
        raise ValueError(f"stern_psi_sample requires k >= 1, got {k}")
    table = stern_table(1 << k)
    twice = _stern_twice_s_prime(1 << k)
    return [
        SternSample(
            n,
            int(table[n]),
            math.log2(n) - (k - 1),
            float(stern_psi_enclosure(n, Fraction(int(twice[n]), 2))),
        )
        for n in range(1 << (k - 1), 1 << k)
    ]


def check_stern_psi(k: int, tolerance: Fraction = Fraction(1, 10**12)) -> Verdict:
    """psi_stern at N and 2N agree to within tolerance, certified, for N in level k."""
    if k < 1:
        raise ValueError(f"check_stern_psi requires k >= 1, got {k}")
    twice = _stern_twice_s_prime(1 << (k + 1))
    for n in range(1 << (k - 1), 1 << k):
        a, b = Fraction(int(twice[n]), 2), Fraction(int(twice[2 * n]), 2)

        def compare(bits: int, n: int = n, a: Fraction = a, b: Fraction = b) -> bool | None:
            gap = stern_psi_enclosure(n, a, bits) - stern_psi_enclosure(2 * n, b, bits)
            return abs(gap).le(tolerance)

        if not decide(compare):
            return Verdict.fail(n=n)
    return Verdict.ok()
