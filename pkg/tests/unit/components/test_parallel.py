"""
Tests for range partitioning and ordered parallel sweeps.
"""

import numpy as np
import pytest

from corput.parallel import partition, run_partitioned
from corput.tables import d_range, scale_for


def _range_sum(rng):
    return int(d_range(rng[0], rng[1], scale_for(5000)).sum())


def _chunk_of(rng):
    from corput.config import get_config
    return get_config().parallel.chunk


class TestPartition:
    def test_covers_range(self):
        assert partition(3, 20, 5) == [(3, 8), (8, 13), (13, 18), (18, 20)]

    def test_empty(self):
        assert partition(5, 5, 4) == []
        assert partition(9, 2, 4) == []

    def test_default_chunk_from_config(self, small_chunks):
        assert len(partition(0, 200)) == 4


class TestRunPartitioned:
    def test_serial_keeps_order(self):
        assert run_partitioned(lambda r: r[0], partition(0, 10, 3), jobs=1) == [0, 3, 6, 9]

    @pytest.mark.parametrize("jobs", [2, 3])
    def test_jobs_do_not_change_results(self, jobs):
        ranges = partition(0, 5000, 700)
        assert run_partitioned(_range_sum, ranges, jobs=jobs) == run_partitioned(_range_sum, ranges, jobs=1)

    def test_sum_of_parts(self):
        total = sum(run_partitioned(_range_sum, partition(0, 5000, 999), jobs=2))
        assert total == int(d_range(0, 5000, scale_for(5000)).sum())

    def test_workers_see_parent_config(self, isolated_config):
        isolated_config.parallel.chunk = 123
        assert run_partitioned(_chunk_of, partition(0, 10, 5), jobs=2) == [123, 123]

    def test_single_range_runs_inline(self):
        assert run_partitioned(lambda r: np.int64(r[1]), [(0, 7)], jobs=4) == [7]
