"""
Verification suites behind `corput verify`.

A suite is a function that runs checks through a SuiteRun, which times each
check, wraps its Verdict into a CheckRecord and collects recorded constants.
Suites register by name; "all" runs every registered suite in order.

Limits come from config. `--limit` replaces every index limit of the run and
`--level` every level count, so a whole suite can be scaled down at once.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .certified import decide
from .config import LimitsConfig, get_config
from .fluctuation import (
    calibrate_envelope,
    calibration_top,
    check_cauchy,
    check_monotone_pieces,
    check_r_invariance,
    check_s_doubling,
    check_s_prime,
    check_stern_doubling,
    check_stern_max,
    check_stern_psi,
    check_stern_reversal,
    check_stern_values,
    check_theorem3,
    continuity_modulus,
    jump_constant,
    mean_value_deviation,
    psi_eval,
    psi_sample_level,
    s_prime,
    stern_psi_sample,
    summatory,
)
from .irregularity import (
    Threshold,
    census,
    check_a_count,
    check_binom_grid,
    check_binomial_sums,
    check_bound_chain,
    check_census,
    check_robbins,
    check_sandwich,
    clt_histogram,
    density_probe,
    exponent_constant,
    tightness_probe,
    verify_block_bounds,
)
from .numerics import Dyadic
from .report import CheckRecord, Verdict, VerifyReport
from .reversal import (
    DISCREPANCY,
    IDENTITIES,
    SIDES,
    STERN,
    AffineRecurrence,
    GaussianRational,
    check_corollary,
    check_identity_grid,
    check_matrix_agreement,
    check_reversal,
    check_specialization,
    identity_records,
    random_recurrences,
    random_triples,
)
from .vdc import (
    check_agreement,
    check_batch,
    check_doubling,
    check_envelope,
    check_minimum,
    check_polygon,
    check_radical_inverse,
    check_symmetry,
    check_upper_bound,
    d_explicit,
    d_recurrence,
    limsup_probe,
    limsup_target,
)

logger = logging.getLogger(__name__)

SANDWICH_THRESHOLDS = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3))
CHAIN_EPSILONS = (Fraction(1, 100), Fraction(1, 4), Fraction(1))
LIMSUP_TOLERANCE = 1e-6
KS_CEILING = 0.3
MIN_LIMIT = 4
MIN_LEVEL = 2


def _upper_beta(ctx: Any) -> Any:
    return 4 * ctx.log(2) / 100


def _lower_beta(ctx: Any) -> Any:
    return ctx.log(2) / 100


@dataclass(frozen=True)
class SuiteOptions:
    """Per-run overrides on top of the configured limits."""
    seed: int = 0
    jobs: int | None = None
    limit: int | None = None
    level: int | None = None

    def __post_init__(self):
        if self.limit is not None and self.limit < MIN_LIMIT:
            raise ValueError(f"--limit must be >= {MIN_LIMIT}, got {self.limit}")
        if self.level is not None and self.level < MIN_LEVEL:
            raise ValueError(f"--level must be >= {MIN_LEVEL}, got {self.level}")

    @property
    def limits(self) -> LimitsConfig:
        return get_config().limits

    def index(self, default: int) -> int:
        return default if self.limit is None else self.limit

    def levels(self, default: int) -> int:
        return default if self.level is None else self.level


class SuiteRun:
    """Collects the records and constants of one verify run."""

    def __init__(self, report: VerifyReport, options: SuiteOptions):
        self.report = report
        self.options = options

    def check(
        self,
        name: str,
        run: Callable[[], Verdict | bool],
        *,
        note: str | None = None,
        soft: bool = False,
        **params: Any,
    ) -> bool:
        started = time.perf_counter()
        outcome = run()
        seconds = time.perf_counter() - started
        verdict = outcome if isinstance(outcome, Verdict) else Verdict(bool(outcome))
        self.report.add(CheckRecord(name, params, verdict.passed, verdict.witness, seconds, note, soft))
        level = logging.INFO if verdict.passed else logging.WARNING
        logger.log(level, "%s %s (%.2fs)", name, "pass" if verdict.passed else "FAIL", seconds)
        return verdict.passed

    def constant(self, name: str, value: Any) -> Any:
        self.report.constants[name] = value
        logger.info("constant %s = %s", name, value)
        return value


SuiteFn = Callable[[SuiteRun], None]

_SUITES: dict[str, SuiteFn] = {}


def suite(name: str) -> Callable[[SuiteFn], SuiteFn]:
    def register(fn: SuiteFn) -> SuiteFn:
        _SUITES[name] = fn
        return fn

    return register


def suite_names() -> list[str]:
    return ["all", *_SUITES]


def run_suite(name: str, options: SuiteOptions | None = None) -> VerifyReport:
    """Run one suite (or "all") and return its report."""
    options = options or SuiteOptions()
    if name != "all" and name not in _SUITES:
        raise ValueError(f"Unknown suite: {name}. Use one of: {', '.join(suite_names())}")
    report = VerifyReport(name, options.seed)
    run = SuiteRun(report, options)
    for suite_name in _SUITES if name == "all" else [name]:
        logger.info("suite %s", suite_name)
        _SUITES[suite_name](run)
    return report


@suite("discrepancy")
def discrepancy_suite(run: SuiteRun) -> None:
    opts, limits = run.options, run.options.limits
    n = opts.index(limits.discrepancy)
    run.check("agreement", lambda: check_agreement(n), limit=n)
    run.check("radical_inverse", lambda: check_radical_inverse(n), limit=n)
    run.check("batch", lambda: check_batch(n), limit=n)
    n = opts.index(limits.minimum)
    run.check("minimum", lambda: check_minimum(n), limit=n)
    run.check("doubling", lambda: check_doubling(n), limit=n)
    levels = opts.levels(limits.symmetry_levels)

    def symmetry() -> Verdict:
        for k in range(1, levels + 1):
            verdict = check_symmetry(k)
            if not verdict:
                return verdict
        return Verdict.ok()

    run.check("symmetry", symmetry, levels=levels)
    levels = opts.levels(limits.envelope_levels)
    run.check("envelope", lambda: check_envelope(levels), levels=levels)
    levels = opts.levels(limits.polygon_levels)
    run.check("polygon", lambda: check_polygon(levels), levels=levels)
    n = opts.index(limits.upper_bound)
    run.check("upper_bound", lambda: check_upper_bound(n, opts.jobs), limit=n)

    k = limits.limsup_level
    probe = run.constant("limsup_probe", limsup_probe(k))
    target = float(limsup_target())
    run.constant("limsup_target", target)
    run.check(
        "limsup",
        lambda: Verdict.of(abs(probe - target) < LIMSUP_TOLERANCE, probe=probe, target=target),
        level=k,
        tolerance=LIMSUP_TOLERANCE,
    )


@suite("bounds")
def bounds_suite(run: SuiteRun) -> None:
    opts, limits = run.options, run.options.limits
    n = opts.index(limits.block_bounds)
    run.check("block_bounds", lambda: verify_block_bounds(n, opts.jobs), limit=n)
    levels = opts.levels(limits.enumeration_levels)
    run.check("a_count", lambda: check_a_count(levels), levels=levels)
    levels = opts.levels(limits.binomial_sum_levels)
    run.check("binomial_sums", lambda: check_binomial_sums(levels), levels=levels)
    run.check("robbins", lambda: check_robbins(limits.robbins), limit=limits.robbins)
    run.check(
        "binomial_estimates",
        lambda: check_binom_grid(limits.binom_points, opts.seed),
        count=limits.binom_points,
        seed=opts.seed,
    )

    e_upper = run.constant("exponent_upper", float(exponent_constant(_upper_beta)))
    e_lower = run.constant("exponent_lower", float(exponent_constant(_lower_beta)))
    run.check(
        "exponent_constants",
        lambda: Verdict.of(
            decide(lambda bits: exponent_constant(_upper_beta, bits).lt(Fraction(183, 1000)))
            and decide(lambda bits: exponent_constant(_lower_beta, bits).gt(Fraction(56, 1000))),
            upper=e_upper,
            lower=e_lower,
        ),
        upper_bound=Fraction(183, 1000),
        lower_bound=Fraction(56, 1000),
    )

    levels = opts.levels(limits.sandwich_levels)
    run.check(
        "sandwich",
        lambda: check_sandwich(levels, SANDWICH_THRESHOLDS),
        levels=levels,
        thresholds=SANDWICH_THRESHOLDS,
    )
    for eps in CHAIN_EPSILONS:
        run.check("bound_chain", lambda eps=eps: check_bound_chain(levels, eps), levels=levels, epsilon=eps)

    n = opts.index(limits.census)
    small = Threshold.absolute(Fraction(3, 2))
    run.check("census_methods", lambda: check_census(n, small, opts.jobs), limit=n, threshold=small.describe())
    strong = Threshold.logarithmic(Fraction(1, 100), "index")
    report = census(n, strong, "pruned", opts.jobs)
    run.check(
        "census_empty",
        lambda: Verdict.of(report.count == 0, count=report.count),
        limit=n,
        threshold=strong.describe(),
        note=f"empirical exponent {report.exponent_text}",
    )
    low, high = tightness_probe(levels)
    run.constant("tightness_alternating", low)
    run.constant("tightness_spread", high)
    run.constant("density_eighth", density_probe(n, 1 / 8))

    ks_values = []
    limits_run = (opts.limit,) if opts.limit is not None else limits.clt_limits
    for clt_limit in limits_run:
        result = clt_histogram(clt_limit, limits.clt_bins, opts.jobs)
        ks_values.append(result.ks_distance)
        run.constant(f"ks_distance_{clt_limit}", result.ks_distance)
        run.constant(f"clt_mean_{clt_limit}", result.mean)
    run.check(
        "clt_trend",
        lambda: Verdict.of(
            all(b <= a for a, b in zip(ks_values, ks_values[1:], strict=False)),
            ks=tuple(ks_values),
        ),
        limits=tuple(limits_run),
        soft=True,
        note="diagnostic: convergence has no guaranteed rate",
    )
    run.check(
        "clt_ceiling",
        lambda: Verdict.of(ks_values[-1] < KS_CEILING, ks=ks_values[-1]),
        limit=limits_run[-1],
        ceiling=KS_CEILING,
        soft=True,
        note="the mean of y_N is still O(1) at these limits",
    )


@suite("fluctuation")
def fluctuation_suite(run: SuiteRun) -> None:
    opts, limits = run.options, run.options.limits
    n = opts.index(limits.fluctuation)
    run.check("s_prime", lambda: check_s_prime(min(n, 1 << 12)), limit=min(n, 1 << 12))
    run.check(
        "summatory",
        lambda: Verdict.of(summatory(n - 1) == s_prime(n - 1) + d_recurrence(n - 1).half()),
        n=n - 1,
    )
    run.check("s_doubling", lambda: check_s_doubling(n), limit=n)
    run.check("r_invariance", lambda: check_r_invariance(n), limit=n)
    run.check("odd_part_reduction", lambda: check_theorem3(n), limit=n)

    deviation = run.constant("mean_value_deviation", mean_value_deviation(n))
    run.check("mean_value", lambda: Verdict.of(deviation < 1, deviation=deviation), limit=n)

    def psi_at_zero() -> Verdict:
        for k in range(1, 12):
            first = psi_sample_level(k)[0]
            exact = first.r_rational - Fraction(k - 1, 4)
            if exact != Fraction(1, 2):
                return Verdict.fail(k=k, value=exact)
        return Verdict.ok()

    run.check("psi_zero", psi_at_zero, levels=11)

    k_max = opts.levels(limits.cauchy_max_level)
    k_min = min(limits.cauchy_min_level, k_max)
    top = calibration_top(k_min, k_max)
    constant = run.constant("envelope_constant", calibrate_envelope(k_min, top))
    run.constant("envelope_calibration_levels", (k_min, top))
    run.check(
        "cauchy_envelope",
        lambda: check_cauchy(k_min, k_max, constant, opts.jobs),
        k_min=k_min,
        k_max=k_max,
        constant=constant,
    )
    run.constant("jump_constant", jump_constant(k_min, k_max, opts.jobs))
    level = opts.levels(limits.monotone_level)
    run.check("monotone_pieces", lambda: check_monotone_pieces(level), level=level)
    level = opts.levels(limits.continuity_level)
    run.constant("continuity_modulus", continuity_modulus(level, opts.jobs))
    value, radius = psi_eval(Fraction(1, 2), min(level, 24), constant)
    run.constant("psi_half", value)
    run.constant("psi_half_radius", radius)


@suite("stern")
def stern_suite(run: SuiteRun) -> None:
    opts, limits = run.options, run.options.limits
    n = opts.index(limits.stern)
    run.check("stern_doubling", lambda: check_stern_doubling(n), limit=n)
    run.check("stern_values", lambda: check_stern_values(n), limit=n)
    levels = opts.levels(limits.stern_levels)
    run.check("stern_max", lambda: check_stern_max(levels), levels=levels)
    n = opts.index(limits.stern_reversal)
    run.check("stern_reversal", lambda: check_stern_reversal(n), limit=n)
    level = opts.levels(limits.stern_psi_level)
    run.check("stern_psi", lambda: check_stern_psi(level), level=level, tolerance=Fraction(1, 10**12))
    first = stern_psi_sample(level)[0]
    run.check(
        "stern_psi_zero",
        lambda: Verdict.of(abs(first.psi - 0.5) < 1e-12, n=first.n, psi=first.psi),
        level=level,
    )


@suite("reversal")
def reversal_suite(run: SuiteRun) -> None:
    opts, limits = run.options, run.options.limits
    n = opts.index(limits.corollary)
    run.check("corollary", lambda: check_corollary(n), limit=n)
    run.check(
        "corollary_example",
        lambda: Verdict.of(
            d_explicit(19) == d_explicit(25) == Dyadic(37, 4),
            d_19=d_explicit(19),
            d_25=d_explicit(25),
        ),
        n=19,
    )
    n = opts.index(limits.reversal)
    run.check("specialization", lambda: check_specialization(n), limit=n, note="(1/2, 1/2, 1/2, 1)")
    for name, rec in (("discrepancy", DISCREPANCY), ("stern", STERN)):
        run.check("reversal", lambda rec=rec: check_reversal(rec, n), limit=n, recurrence=name)
    recs = random_recurrences(limits.reversal_params, opts.seed)

    def random_reversal() -> Verdict:
        for rec in recs:
            verdict = check_reversal(rec, n)
            if not verdict:
                return verdict
        return Verdict.ok()

    run.check(
        "reversal_random",
        random_reversal,
        limit=n,
        count=len(recs),
        seed=opts.seed,
        note="x1 free",
    )
    gaussian = AffineRecurrence(
        GaussianRational(Fraction(1, 2), Fraction(1, 3)),
        GaussianRational(Fraction(-2), Fraction(1)),
        GaussianRational(Fraction(0), Fraction(-1, 5)),
        GaussianRational(Fraction(3), Fraction(1, 7)),
    )
    m = min(n, 1 << 12)
    run.check("reversal_gaussian", lambda: check_reversal(gaussian, m), limit=m)


@suite("matrices")
def matrices_suite(run: SuiteRun) -> None:
    opts, limits = run.options, run.options.limits
    triples = random_triples(limits.matrix_params, opts.seed)
    failures: dict[tuple[str, str], dict[str, Any]] = {}
    for alpha, beta, gamma in triples:
        for record in identity_records(alpha, beta, gamma):
            if not record.passed:
                failures.setdefault((record.word, record.side), {"alpha": alpha, "beta": beta, "gamma": gamma})
    for side in SIDES:
        for word in IDENTITIES:
            witness = failures.get((word, side))
            run.check(
                f"identity_{word}_{side}",
                lambda witness=witness: Verdict.ok() if witness is None else Verdict.fail(**witness),
                count=len(triples),
                seed=opts.seed,
            )
    gaussian = (
        GaussianRational(Fraction(1, 3), Fraction(2)),
        GaussianRational(Fraction(-5, 7), Fraction(1, 2)),
        GaussianRational(Fraction(4), Fraction(-3)),
    )
    run.check("identities_gaussian", lambda: check_identity_grid([gaussian]), count=1)

    n = opts.index(limits.matrix_odd)
    recs = [AffineRecurrence(a, b, c) for a, b, c in triples[: limits.matrix_eval_params]]
    run.check(
        "matrix_agreement",
        lambda: check_matrix_agreement(recs, n),
        limit=n,
        count=len(recs),
        seed=opts.seed,
        note="x1 = 1",
    )
