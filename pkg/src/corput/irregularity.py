"""
How many indices have small discrepancy.

The block count |n|_01 pins d_n within a factor of two,

    |n|_01 / 2 <= d_n <= 2 |n|_01,

and a_{k,l} = C(k+1, 2l-1) integers of [2^k, 2^(k+1)) have exactly l blocks.
Together these sandwich the level counts |{N : d_N <= t}| between binomial
sums. This module checks those facts exhaustively, evaluates the binomial
estimates and entropy exponents with certified precision, runs censuses of
small-d indices, and probes the central limit behaviour of d_N.

Logarithmic thresholds use the natural logarithm.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Literal

import numpy as np
from scipy.special import ndtr

from .bits import block_count, enumerate_by_blocks, enumerate_low_block
from .certified import (
    Enclosure,
    certified_floor,
    decide,
    evaluate,
    factorial_bounds,
    ln,
    normal_cdf,
    to_interval,
)
from .numerics import Dyadic
from .parallel import Range, partition, run_partitioned
from .report import Verdict
from .tables import d_range, scale_for
from .vdc import d_recurrence

logger = logging.getLogger(__name__)

Mode = Literal["index", "window"]
Method = Literal["direct", "pruned"]

MODES: tuple[str, ...] = ("index", "window")

# float screening margin for per-index thresholds, relative to 2^scale
_MARGIN = 1e-9


class LemmaHypothesisError(ValueError):
    """Parameters outside the hypotheses of a lemma."""


def _param(value: Fraction | int | float | str) -> Fraction:
    # floats are read as the decimal they print as, so 0.1 means 1/10
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


# Counting lemma


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def a_count(k: int, blocks: int) -> int:
    """a_{k,l}: integers in [2^k, 2^(k+1)) with exactly l blocks of 1s."""
    if k < 0 or blocks < 1:
        raise ValueError(f"a_count requires k >= 0 and l >= 1, got ({k}, {blocks})")
    return binomial(k + 1, 2 * blocks - 1)


def check_a_count(levels: int) -> Verdict:
    """a_{k,l} equals the size of the enumeration for every k <= levels and l."""
    for k in range(levels + 1):
        for blocks in range(1, (k + 2) // 2 + 1):
            found = len(enumerate_by_blocks(k, blocks))
            if found != a_count(k, blocks):
                return Verdict.fail(k=k, l=blocks, enumerated=found, formula=a_count(k, blocks))
    return Verdict.ok()


def check_binomial_sums(levels: int) -> Verdict:
    """Sum over l of a_{k,l} is 2^k for k <= levels."""
    for k in range(levels + 1):
        total = sum(a_count(k, blocks) for blocks in range(1, k // 2 + 2))
        if total != 1 << k:
            return Verdict.fail(k=k, total=total)
    return Verdict.ok()


def _block_counts(n: np.ndarray) -> np.ndarray:
    tops = n & ~(n >> 1)
    counts = np.zeros_like(n)
    for i in range(int(n.max()).bit_length() if n.size else 0):
        counts += (tops >> i) & 1
    return counts


def _block_bounds_violation(rng: Range, scale: int) -> int | None:
    start, stop = max(rng[0], 1), rng[1]
    if start >= stop:
        return None
    n = np.arange(start, stop, dtype=np.int64)
    scaled = d_range(start, stop, scale)
    blocks = _block_counts(n)
    bad = np.flatnonzero((scaled < blocks << (scale - 1)) | (scaled > blocks << (scale + 1)))
    return start + int(bad[0]) if bad.size else None


def verify_block_bounds(limit: int, jobs: int | None = None) -> Verdict:
    """|n|_01 / 2 <= d_n <= 2 |n|_01 for 1 <= n < limit."""
    if limit < 2:
        raise ValueError(f"verify_block_bounds requires limit >= 2, got {limit}")
    scale = scale_for(limit)
    ranges = partition(1, limit)
    for witness in run_partitioned(partial(_block_bounds_violation, scale=scale), ranges, jobs):
        if witness is not None:
            return Verdict.fail(n=witness, d=d_recurrence(witness), blocks=block_count(witness))
    return Verdict.ok()


def tightness_probe(k: int) -> tuple[Fraction, Fraction]:
    """
    d_n / |n|_01 at (01)^k, which falls toward 2/3, and at (0^k 1^k)^k, which
    rises toward 2.
    """
    if k < 1:
        raise ValueError(f"tightness_probe requires k >= 1, got {k}")
    alternating = ((1 << (2 * k)) - 1) // 3
    spread = int(("0" * k + "1" * k) * k, 2)
    return (
        d_recurrence(alternating).to_fraction() / k,
        d_recurrence(spread).to_fraction() / k,
    )


# Factorial and binomial estimates


def robbins_check(n: int) -> bool:
    """sqrt(2 pi) n^(n+1/2) e^-n <= n! <= e n^(n+1/2) e^-n, certified."""
    if n < 1:
        raise ValueError(f"robbins_check requires n >= 1, got {n}")
    exact = math.factorial(n)

    def compare(bits: int) -> bool | None:
        lower, upper = factorial_bounds(n, bits)
        below, above = lower.le(exact), upper.ge(exact)
        if below is False or above is False:
            return False
        if below is None or above is None:
            return None
        return True

    return decide(compare)


def check_robbins(limit: int) -> Verdict:
    """robbins_check for 1 <= n <= limit."""
    for n in range(1, limit + 1):
        if not robbins_check(n):
            return Verdict.fail(n=n)
    return Verdict.ok()


def _inverse_e_at_least(beta: Fraction) -> bool:
    return decide(lambda bits: evaluate(lambda ctx: ctx.exp(ctx.mpf(-1)), bits).ge(beta))


def binom_bounds_check(
    k: int,
    ell: int,
    alpha: Fraction | float | str,
    beta: Fraction | float | str,
) -> bool:
    """
    (alpha^-alpha / (1-alpha)^(1-beta))^k / (3 sqrt k) <= C(k, l)
        <= (beta^-beta / (1-beta)^(1-alpha))^k,

    for 0 < alpha <= beta <= 1/e and alpha k <= l <= beta k. Both sides are
    compared in logarithms with certified precision.
    """
    a, b = _param(alpha), _param(beta)
    if k < 1 or ell < 1:
        raise LemmaHypothesisError(f"Binomial estimate requires k, l >= 1, got ({k}, {ell})")
    if not 0 < a <= b:
        raise LemmaHypothesisError(f"Binomial estimate requires 0 < alpha <= beta, got ({a}, {b})")
    if not _inverse_e_at_least(b):
        raise LemmaHypothesisError(f"Binomial estimate requires beta <= 1/e, got {b}")
    if not a * k <= ell <= b * k:
        raise LemmaHypothesisError(
            f"Binomial estimate requires alpha*k <= l <= beta*k, got l={ell} outside [{a * k}, {b * k}]"
        )

    def lower_gap(bits: int) -> bool | None:
        def expr(ctx: Any) -> Any:
            x, y = to_interval(ctx, a), to_interval(ctx, b)
            return -ctx.log(3) - ctx.log(k) / 2 + k * (-x * ctx.log(x) - (1 - y) * ctx.log(1 - x))

        return (ln(binomial(k, ell), bits) - evaluate(expr, bits)).ge(0)

    def upper_gap(bits: int) -> bool | None:
        def expr(ctx: Any) -> Any:
            x, y = to_interval(ctx, a), to_interval(ctx, b)
            return k * (-y * ctx.log(y) - (1 - x) * ctx.log(1 - y))

        return (evaluate(expr, bits) - ln(binomial(k, ell), bits)).ge(0)

    return decide(lower_gap) and decide(upper_gap)


def random_binom_points(count: int, seed: int) -> list[tuple[int, int, Fraction, Fraction]]:
    """Seeded valid (k, l, alpha, beta) with exact parameters in thousandths."""
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        k = int(rng.integers(10, 501))
        b = Fraction(int(rng.integers(1, 368)), 1000)  # 0.367 < 1/e
        a = Fraction(int(rng.integers(1, b.numerator * 1000 // b.denominator + 1)), 1000)
        lo, hi = max(1, math.ceil(a * k)), math.floor(b * k)
        if lo > hi:
            continue
        points.append((k, int(rng.integers(lo, hi + 1)), a, b))
    return points


def check_binom_grid(count: int, seed: int) -> Verdict:
    for k, ell, a, b in random_binom_points(count, seed):
        if not binom_bounds_check(k, ell, a, b):
            return Verdict.fail(k=k, l=ell, alpha=a, beta=b)
    return Verdict.ok()


def exponent_constant(
    beta: Fraction | float | str | Callable[[Any], Any],
    bits: int | None = None,
) -> Enclosure:
    """
    (-beta ln beta - (1-beta) ln(1-beta)) / ln 2.

    beta may be exact, or a function of the interval context for transcendental
    parameters such as lambda ctx: 4 * ctx.log(2) / 100.
    """
    if callable(beta):
        param = beta
    else:
        b = _param(beta)
        if not 0 < b < 1:
            raise ValueError(f"exponent_constant requires 0 < beta < 1, got {b}")
        if b == Fraction(1, 2):
            return Enclosure.exact(1)

        def param(ctx: Any) -> Any:
            return to_interval(ctx, b)

    def expr(ctx: Any) -> Any:
        x = param(ctx)
        return (-x * ctx.log(x) - (1 - x) * ctx.log(1 - x)) / ctx.log(2)

    return evaluate(expr, bits)


# Censuses


@dataclass(frozen=True, slots=True)
class Threshold:
    """d_n <= t, or d_n <= epsilon ln n ("index"), or d_n <= epsilon ln limit ("window")."""
    t: Fraction | None = None
    epsilon: Fraction | None = None
    mode: str = "index"

    def __post_init__(self):
        if (self.t is None) == (self.epsilon is None):
            raise ValueError("Threshold needs exactly one of t or epsilon")
        if self.t is not None and self.t < 0:
            raise ValueError(f"Threshold t must be >= 0, got {self.t}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError(f"Threshold epsilon must be > 0, got {self.epsilon}")
        if self.mode not in MODES:
            raise ValueError(f"Unknown threshold mode: {self.mode}. Use one of: {', '.join(MODES)}")

    @classmethod
    def absolute(cls, t: Fraction | int | str) -> Threshold:
        return cls(t=_param(t))

    @classmethod
    def logarithmic(cls, epsilon: Fraction | float | str, mode: Mode = "index") -> Threshold:
        return cls(epsilon=_param(epsilon), mode=mode)

    def describe(self) -> str:
        if self.t is not None:
            return str(self.t)
        return f"{self.epsilon}*ln({'n' if self.mode == 'index' else 'limit'})"

    def max_blocks(self, limit: int) -> int:
        """Largest |n|_01 a qualifying n < limit can have (d_n >= |n|_01 / 2)."""
        if self.t is not None:
            return math.floor(2 * self.t)
        assert self.epsilon is not None
        top = limit if self.mode == "window" else limit - 1
        eps = self.epsilon
        return certified_floor(lambda bits: ln(top, bits) * (2 * eps))

    def mask(self, n: np.ndarray, scaled: np.ndarray, scale: int, limit: int) -> np.ndarray:
        """Which entries satisfy d_n <= theta(n), given scaled values d_n * 2^scale."""
        if self.t is not None:
            cutoff = (self.t.numerator << scale) // self.t.denominator
            return scaled <= cutoff
        assert self.epsilon is not None
        eps = self.epsilon
        if self.mode == "window":
            cutoff = certified_floor(lambda bits: ln(limit, bits) * (eps * (1 << scale)))
            return scaled <= cutoff
        one = float(1 << scale)
        gap = float(eps) * np.log(n.astype(np.float64)) * one - scaled.astype(np.float64)
        result = gap > 0
        for i in np.flatnonzero(np.abs(gap) <= _MARGIN * one + 1e-6).tolist():
            value = Dyadic(int(scaled[i]), scale)
            m = int(n[i])
            result[i] = decide(lambda bits, m=m, value=value: (ln(m, bits) * eps).ge(value))
        return result


@dataclass(frozen=True, slots=True)
class CensusReport:
    """Count of 1 <= n < limit with d_n under the threshold."""
    limit: int
    threshold: Threshold
    count: int
    method: str
    witnesses: tuple[int, ...] = field(default=(), compare=False)

    @property
    def empirical_exponent(self) -> float | None:
        """log count / log limit; None ("undefined") for an empty census."""
        if self.count == 0:
            return None
        return math.log(self.count) / math.log(self.limit)

    @property
    def exponent_text(self) -> str:
        exponent = self.empirical_exponent
        return "undefined" if exponent is None else format(exponent, ".17g")


# witnesses kept on a report, for printing small censuses
_WITNESSES = 64


def _census_range(rng: Range, scale: int, threshold: Threshold, limit: int) -> tuple[int, list[int]]:
    start, stop = max(rng[0], 1), rng[1]
    if start >= stop:
        return 0, []
    n = np.arange(start, stop, dtype=np.int64)
    hits = np.flatnonzero(threshold.mask(n, d_range(start, stop, scale), scale, limit))
    return int(hits.size), (hits[:_WITNESSES] + start).tolist()


def census(
    limit: int,
    threshold: Threshold,
    method: Method = "direct",
    jobs: int | None = None,
) -> CensusReport:
    """
    Count 1 <= n < limit with d_n <= theta(n).

    "direct" scans every index. "pruned" only visits n with at most
    2 * max(theta) blocks of 1s; the two must agree.
    """
    if limit < 2:
        raise ValueError(f"census requires limit >= 2, got {limit}")
    scale = scale_for(limit)
    if method == "direct":
        ranges = partition(1, limit)
        worker = partial(_census_range, scale=scale, threshold=threshold, limit=limit)
        count, witnesses = 0, []
        for part_count, part_witnesses in run_partitioned(worker, ranges, jobs):
            count += part_count
            witnesses.extend(part_witnesses)
    elif method == "pruned":
        blocks = threshold.max_blocks(limit)
        candidates = (
            np.fromiter(enumerate_low_block(limit, blocks), dtype=np.int64) if blocks >= 1
            else np.zeros(0, dtype=np.int64)
        )
        logger.debug("pruned census visits %d of %d indices", candidates.size, limit - 1)
        scaled = np.array([d_recurrence(int(m)).scaled(scale) for m in candidates], dtype=np.int64)
        hits = candidates[threshold.mask(candidates, scaled, scale, limit)] if candidates.size else candidates
        count, witnesses = int(hits.size), hits.tolist()
    else:
        raise ValueError(f"Unknown census method: {method}. Use direct or pruned")
    return CensusReport(limit, threshold, count, method, tuple(witnesses[:_WITNESSES]))


def check_census(limit: int, threshold: Threshold, jobs: int | None = None) -> Verdict:
    """Direct and pruned censuses agree."""
    direct = census(limit, threshold, "direct", jobs)
    pruned = census(limit, threshold, "pruned", jobs)
    return Verdict.of(
        direct.count == pruned.count,
        limit=limit, threshold=threshold.describe(), direct=direct.count, pruned=pruned.count,
    )


def level_count(k: int, t: Fraction | int) -> int:
    """|{N in [2^k, 2^(k+1)) : d_N <= t}|, exhaustively."""
    if k < 0:
        raise ValueError(f"level_count requires k >= 0, got {k}")
    t = Fraction(t)
    scale = k + 1
    scaled = d_range(1 << k, 1 << (k + 1), scale)
    return int(np.count_nonzero(scaled <= (t.numerator << scale) // t.denominator))


def sandwich_terms(k: int, t: Fraction | int) -> tuple[int, int, int]:
    """(sum of a_{k,l} for l <= t/2, level count, sum of a_{k,l} for l <= 2t)."""
    t = Fraction(t)
    lower = sum(a_count(k, ell) for ell in range(1, math.floor(t / 2) + 1))
    upper = sum(a_count(k, ell) for ell in range(1, math.floor(2 * t) + 1))
    return lower, level_count(k, t), upper


def sandwich_check(k: int, t: Fraction | int) -> bool:
    if k < 1 or t < 0:
        raise ValueError(f"sandwich_check requires k >= 1 and t >= 0, got ({k}, {t})")
    lower, count, upper = sandwich_terms(k, t)
    return lower <= count <= upper


def check_sandwich(levels: int, thresholds: tuple[Fraction, ...]) -> Verdict:
    for k in range(1, levels + 1):
        for t in thresholds:
            if not sandwich_check(k, t):
                lower, count, upper = sandwich_terms(k, t)
                return Verdict.fail(k=k, t=t, lower=lower, count=count, upper=upper)
    return Verdict.ok()


@dataclass(frozen=True, slots=True)
class BoundChainRow:
    """
    One level of

        sum_{l <= (eps/2) k ln 2} a_{k,l} <= #{d_N <= eps k ln 2} <= A_{k,eps}
            <= #{d_N <= eps (k+1) ln 2} <= sum_{l <= 2 eps (k+1) ln 2} a_{k,l}.
    """
    k: int
    lower_sum: int
    inner_lower: int
    count: int
    inner_upper: int
    upper_sum: int

    @property
    def holds(self) -> bool:
        return self.lower_sum <= self.inner_lower <= self.count <= self.inner_upper <= self.upper_sum


def _floor_ln2(factor: Fraction) -> int:
    """floor(factor * ln 2)."""
    return certified_floor(lambda bits: ln(2, bits) * factor)


def theorem_bound_chain(levels: int, epsilon: Fraction | float | str) -> list[BoundChainRow]:
    eps = _param(epsilon)
    if eps <= 0:
        raise ValueError(f"theorem_bound_chain requires epsilon > 0, got {eps}")
    rows = []
    for k in range(1, levels + 1):
        scale = k + 1
        n = np.arange(1 << k, 1 << (k + 1), dtype=np.int64)
        scaled = d_range(1 << k, 1 << (k + 1), scale)
        low_cut = _floor_ln2(eps * k * (1 << scale))
        high_cut = _floor_ln2(eps * (k + 1) * (1 << scale))
        index = Threshold.logarithmic(eps, "index")
        row = BoundChainRow(
            k=k,
            lower_sum=sum(a_count(k, ell) for ell in range(1, _floor_ln2(eps * k / 2) + 1)),
            inner_lower=int(np.count_nonzero(scaled <= low_cut)),
            count=int(np.count_nonzero(index.mask(n, scaled, scale, 1 << (k + 1)))),
            inner_upper=int(np.count_nonzero(scaled <= high_cut)),
            upper_sum=sum(a_count(k, ell) for ell in range(1, _floor_ln2(2 * eps * (k + 1)) + 1)),
        )
        rows.append(row)
    return rows


def check_bound_chain(levels: int, epsilon: Fraction | float | str) -> Verdict:
    for row in theorem_bound_chain(levels, epsilon):
        if not row.holds:
            return Verdict.fail(
                k=row.k, lower_sum=row.lower_sum, inner_lower=row.inner_lower, count=row.count,
                inner_upper=row.inner_upper, upper_sum=row.upper_sum,
            )
    return Verdict.ok()


def density_probe(limit: int, delta: float) -> float:
    """Fraction of 2 <= N < limit with d_N <= delta log2 N (diagnostic, float)."""
    if limit < 3:
        raise ValueError(f"density_probe requires limit >= 3, got {limit}")
    scale = scale_for(limit)
    hits = 0
    for start, stop in partition(2, limit):
        values = d_range(start, stop, scale) / float(1 << scale)
        hits += int(np.count_nonzero(values <= delta * np.log2(np.arange(start, stop, dtype=np.float64))))
    return hits / (limit - 2)


# Central limit probe


@dataclass(frozen=True, slots=True)
class CltBin:
    left: float
    right: float
    empirical_cdf: float
    normal_cdf: float


@dataclass(frozen=True, slots=True)
class CltResult:
    limit: int
    ks_distance: float
    bins: tuple[CltBin, ...]
    mean: float  # of y_N; drifts to 0 only like 1 / sqrt(log N)


def _normalized_range(rng: Range, scale: int) -> np.ndarray:
    start, stop = rng
    log_n = np.log2(np.arange(start, stop, dtype=np.float64))
    d = d_range(start, stop, scale) / float(1 << scale)
    return (d - log_n / 4) / (np.sqrt(log_n) / (4 * math.sqrt(3)))


def normalized_values(limit: int, jobs: int | None = None) -> np.ndarray:
    """y_N = (d_N - log2(N) / 4) / (sqrt(log2 N) / (4 sqrt 3)) for 2 <= N < limit."""
    if limit < 4:
        raise ValueError(f"normalized_values requires limit >= 4, got {limit}")
    scale = scale_for(limit)
    parts = run_partitioned(partial(_normalized_range, scale=scale), partition(2, limit), jobs)
    return np.concatenate(parts)


def ks_distance(samples: np.ndarray) -> float:
    """sup |F_empirical - Phi| over sorted samples."""
    y = np.sort(samples)
    n = y.size
    phi = ndtr(y)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - phi), np.max(phi - (i - 1) / n)))


def clt_histogram(limit: int, bins: int, jobs: int | None = None) -> CltResult:
    """Binned empirical CDF of y_N against the certified normal CDF, plus the KS distance."""
    if limit < 4 or bins < 10:
        raise ValueError(f"clt_histogram requires limit >= 4 and bins >= 10, got ({limit}, {bins})")
    y = np.sort(normalized_values(limit, jobs))
    edges = np.linspace(math.floor(y[0]), math.ceil(y[-1]), bins + 1)
    below = np.searchsorted(y, edges, side="right") / y.size
    rows = tuple(
        CltBin(
            left=float(edges[i]),
            right=float(edges[i + 1]),
            empirical_cdf=float(below[i + 1]),
            normal_cdf=float(normal_cdf(Fraction(float(edges[i + 1])))),
        )
        for i in range(bins)
    )
    ks = ks_distance(y)
    logger.info("clt limit %d: KS distance %.6f", limit, ks)
    return CltResult(limit, ks, rows, float(np.mean(y)))
