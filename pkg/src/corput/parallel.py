"""
Index-range partitioning for exhaustive sweeps.

Workers receive contiguous [start, stop) ranges and return per-range results.
Results come back in range order (Pool.imap), so merging by concatenation or
addition gives the same output for any number of jobs.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from multiprocessing import Pool
from typing import TypeVar

from . import config as _config_module
from .config import Config, get_config

logger = logging.getLogger(__name__)

T = TypeVar("T")

Range = tuple[int, int]


def partition(start: int, stop: int, chunk: int | None = None) -> list[Range]:
    """Split [start, stop) into consecutive ranges of at most `chunk` indices."""
    if stop <= start:
        return []
    chunk = chunk or get_config().parallel.chunk
    return [(lo, min(lo + chunk, stop)) for lo in range(start, stop, chunk)]


def _init_worker(cfg: Config) -> None:
    # workers inherit the parent's effective config, including CLI overrides
    _config_module._config = cfg


def run_partitioned(
    fn: Callable[[Range], T],
    ranges: Sequence[Range],
    jobs: int | None = None,
) -> list[T]:
    """Apply fn to every range, in order. fn must be picklable when jobs > 1."""
    jobs = jobs or get_config().parallel.jobs
    if jobs <= 1 or len(ranges) <= 1:
        return [fn(r) for r in ranges]
    logger.debug("dispatching %d ranges to %d workers", len(ranges), jobs)
    with Pool(processes=jobs, initializer=_init_worker, initargs=(get_config(),)) as pool:
        return list(pool.imap(fn, ranges))
