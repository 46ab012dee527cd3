"""
CLI interface for corput.

Every command writes a clean CSV/JSON stream (or a short text result) to
stdout, or to --out; logs go to stderr.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import Any

from . import __version__
from .config import get_config
from .formats import csv as _csv  # noqa: F401 - ensure csv format is registered
from .formats import json as _json  # noqa: F401 - ensure json format is registered
from .formats.base import registry
from .numerics import Dyadic, format_float, parse_rational

logger = logging.getLogger("corput")

METHODS = ("explicit", "recurrence", "oracle")


def _natural(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid integer: {text!r}") from e
    if value < 0:
        raise argparse.ArgumentTypeError(f"Expected an integer >= 0, got {value}")
    return value


def _positive(text: str) -> int:
    value = _natural(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"Expected an integer >= 1, got {value}")
    return value


def _rational(text: str) -> Any:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def parse_args(args: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=registry.names,
        help="Output format (default: from --out extension, else csv)",
    )
    common.add_argument("--out", "-o", type=str, help="Write output to this file instead of stdout")
    common.add_argument("--jobs", "-j", type=_positive, help="Worker processes for exhaustive sweeps")
    common.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="corput",
        description="Exact discrepancy of the base-2 Van der Corput sequence",
    )
    parser.add_argument("--version", action="version", version=f"corput {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    d = commands.add_parser("d", parents=[common], help="Print d_N exactly and as a decimal")
    d.add_argument("n", type=_natural, help="Index N >= 0")
    d.add_argument("--method", choices=METHODS, default="recurrence", help="Evaluation method")

    table = commands.add_parser("table", parents=[common], help="Table of d_n for FROM <= n < TO")
    table.add_argument("start", type=_natural, metavar="FROM")
    table.add_argument("stop", type=_natural, metavar="TO")

    oracle = commands.add_parser("oracle", parents=[common], help="Sorted-point discrepancy for FROM <= N < TO")
    oracle.add_argument("start", type=_positive, metavar="FROM")
    oracle.add_argument("stop", type=_positive, metavar="TO")

    verify = commands.add_parser("verify", parents=[common], help="Run a verification suite (JSON report)")
    verify.add_argument("--suite", default="all", help="Suite name (see --list)")
    verify.add_argument("--list", action="store_true", help="List suite names and exit")
    verify.add_argument("--seed", type=_natural, default=0, help="Seed for randomized checks")
    verify.add_argument("--limit", type=_positive, help="Replace every index limit of the run")
    verify.add_argument("--level", type=_positive, help="Replace every level count of the run")
    verify.add_argument("--timings", action="store_true", help="Include wall times in the report")

    census = commands.add_parser("census", parents=[common], help="Count n < LIMIT with small d_n")
    census.add_argument("--limit", type=_positive, required=True)
    threshold = census.add_mutually_exclusive_group(required=True)
    threshold.add_argument("--threshold", type=_rational, help="Absolute threshold p/q")
    threshold.add_argument("--epsilon", type=_rational, help="Logarithmic threshold epsilon * ln")
    census.add_argument("--mode", choices=("index", "window"), default="index")
    census.add_argument("--method", choices=("direct", "pruned"), default="direct")

    psi = commands.add_parser("psi", parents=[common], help="Level-k samples of the fluctuation function")
    psi.add_argument("--level", type=_positive, required=True)

    stern = commands.add_parser("stern", parents=[common], help="Level-k samples of the Stern fluctuation")
    stern.add_argument("--level", type=_positive, required=True)

    clt = commands.add_parser("clt", parents=[common], help="Normalized d_N against the normal law")
    clt.add_argument("--limit", type=_positive, required=True)
    clt.add_argument("--bins", type=_positive, default=None, help="Histogram bins (default from config)")

    return parser.parse_args(args)


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def emit(text: str, out: str | None) -> None:
    """Write to --out or stdout."""
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def emit_table(parsed: argparse.Namespace, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    fmt = registry.detect(parsed.format, parsed.out)
    emit(fmt.render(columns, rows), parsed.out)


def _digits() -> int:
    return get_config().output.float_digits


# Commands


def cmd_d(parsed: argparse.Namespace) -> int:
    from .vdc import d_explicit, d_recurrence, discrepancy_oracle

    n = parsed.n
    if parsed.method == "explicit":
        value = d_explicit(n)
    elif parsed.method == "recurrence":
        value = d_recurrence(n)
    else:
        if n < 1:
            raise ValueError(f"The oracle method requires N >= 1, got {n}")
        value = Dyadic.from_fraction(discrepancy_oracle(n)[0])
    emit(f"{value}\n{format_float(value, _digits())}\n", parsed.out)
    return 0


def cmd_table(parsed: argparse.Namespace) -> int:
    from .vdc import d_batch

    if parsed.start >= parsed.stop:
        raise ValueError(f"table requires FROM < TO, got {parsed.start} {parsed.stop}")
    digits = _digits()
    rows = [
        [n, str(value), format_float(value, digits)]
        for n, value in d_batch(parsed.stop, start=parsed.start)
    ]
    emit_table(parsed, ("n", "d_exact", "d_float"), rows)
    return 0


def cmd_oracle(parsed: argparse.Namespace) -> int:
    from .vdc import discrepancy_oracle

    if parsed.start >= parsed.stop:
        raise ValueError(f"oracle requires FROM < TO, got {parsed.start} {parsed.stop}")
    digits = _digits()
    rows = []
    for n in range(parsed.start, parsed.stop):
        extreme, star = discrepancy_oracle(n)
        value = Dyadic.from_fraction(extreme)
        rows.append([n, str(value), format_float(value, digits), str(Dyadic.from_fraction(star))])
    emit_table(parsed, ("n", "d_exact", "d_float", "d_star_exact"), rows)
    return 0


def cmd_verify(parsed: argparse.Namespace) -> int:
    from .suites import SuiteOptions, run_suite, suite_names

    if parsed.list:
        emit("".join(f"{name}\n" for name in suite_names()), parsed.out)
        return 0
    options = SuiteOptions(seed=parsed.seed, jobs=parsed.jobs, limit=parsed.limit, level=parsed.level)
    report = run_suite(parsed.suite, options)
    emit(report.to_json(timings=parsed.timings), parsed.out)
    for record in report.failures:
        print(f"FAIL {record.check}: {record.witness}", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_census(parsed: argparse.Namespace) -> int:
    from .irregularity import Threshold, census

    if parsed.threshold is not None:
        threshold = Threshold.absolute(parsed.threshold)
    else:
        threshold = Threshold.logarithmic(parsed.epsilon, parsed.mode)
    report = census(parsed.limit, threshold, parsed.method)
    rows = [[report.limit, threshold.describe(), report.count, report.method, report.exponent_text]]
    emit_table(parsed, ("n_limit", "threshold", "count", "method", "empirical_exponent"), rows)
    return 0


def cmd_psi(parsed: argparse.Namespace) -> int:
    from .fluctuation import psi_sample_level

    digits = _digits()
    rows = [
        [
            format_float(s.frac, digits),
            str(s.r_rational),
            format_float(s.psi_value, digits),
            s.level,
            format_float(s.error_radius, digits),
        ]
        for s in psi_sample_level(parsed.level)
    ]
    emit_table(parsed, ("frac", "r_rational", "psi_float", "level", "error_radius"), rows)
    return 0


def cmd_stern(parsed: argparse.Namespace) -> int:
    from .fluctuation import stern_psi_sample

    digits = _digits()
    rows = [
        [s.n, s.s_n, format_float(s.frac, digits), format_float(s.psi, digits)]
        for s in stern_psi_sample(parsed.level)
    ]
    emit_table(parsed, ("n", "s_n", "frac", "psi_float"), rows)
    return 0


def cmd_clt(parsed: argparse.Namespace) -> int:
    from .irregularity import clt_histogram

    bins = parsed.bins or get_config().limits.clt_bins
    result = clt_histogram(parsed.limit, bins)
    digits = _digits()
    rows = [
        [
            format_float(b.left, digits),
            format_float(b.right, digits),
            format_float(b.empirical_cdf, digits),
            format_float(b.normal_cdf, digits),
        ]
        for b in result.bins
    ]
    emit_table(parsed, ("bin_left", "bin_right", "empirical_cdf", "normal_cdf"), rows)
    print(f"ks_distance {format_float(result.ks_distance, digits)}", file=sys.stderr)
    return 0


COMMANDS = {
    "d": cmd_d,
    "table": cmd_table,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "census": cmd_census,
    "psi": cmd_psi,
    "stern": cmd_stern,
    "clt": cmd_clt,
}


def main(args: list[str] | None = None) -> int:
    """Main entry point."""
    parsed = parse_args(args)
    configure_logging(parsed.verbose)

    cfg = get_config()
    if parsed.jobs:
        cfg.parallel.jobs = parsed.jobs

    try:
        return COMMANDS[parsed.command](parsed)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
