"""
Tests for the scaled-integer tables.
"""

from fractions import Fraction

import numpy as np
import pytest

from corput.reversal import STERN, recurrence_table
from corput.tables import (
    d_range,
    d_table,
    prefix_sums,
    reversed_indices,
    s_prime_table,
    scale_for,
    stern_table,
)
from corput.vdc import d_recurrence


class TestScale:
    @pytest.mark.parametrize("limit, expected", [(1, 1), (2, 1), (3, 2), (4, 2), (32, 5), (33, 6)])
    def test_scale_for(self, limit, expected):
        assert scale_for(limit) == expected


class TestDTable:
    def test_matches_value_table(self, value_table):
        table = d_table(32)
        scale = scale_for(32)
        assert [Fraction(int(v), 1 << scale) for v in table] == value_table

    def test_rejects_coarse_scale(self):
        with pytest.raises(ValueError, match="too coarse"):
            d_table(64, 3)

    def test_finer_scale_is_a_shift(self):
        assert np.array_equal(d_table(100, 12), d_table(100) << (12 - scale_for(100)))

    @pytest.mark.parametrize("start, stop", [(0, 1), (5, 9), (4000, 4100), (10000, 30000), (2**16 - 3, 2**16 + 5)])
    def test_range_matches_full_table(self, start, stop):
        scale = scale_for(stop)
        assert np.array_equal(d_range(start, stop, scale), d_table(stop, scale)[start:stop])

    def test_range_rejects_empty(self):
        with pytest.raises(ValueError, match="start < stop"):
            d_range(5, 5, 4)


class TestPrefixSums:
    def test_small_values_stay_int64(self):
        assert prefix_sums(np.arange(10, dtype=np.int64)).dtype == np.int64

    def test_large_values_promote_to_python_ints(self):
        values = np.full(8, 2**60, dtype=np.int64)
        sums = prefix_sums(values)
        assert sums.dtype == object
        assert sums[-1] == 8 * 2**60


class TestSPrimeTable:
    def test_first_values(self):
        table, scale = s_prime_table(5)
        # S'(n) = d_1 + ... + d_{n-1} + d_n / 2
        expected = [0, Fraction(1, 2), Fraction(3, 2), Fraction(11, 4), 4]
        assert [Fraction(int(v), 1 << scale) for v in table] == expected


class TestSternTable:
    def test_matches_recurrence(self):
        table = stern_table(256)
        assert table[:9].tolist() == [0, 1, 1, 2, 1, 3, 2, 3, 1]
        assert table.tolist()[1:] == recurrence_table(STERN, 256)[1:]


class TestReversedIndices:
    def test_values(self):
        n = np.array([1, 6, 19, 25, 24], dtype=np.int64)
        assert reversed_indices(n, 5).tolist() == [1, 3, 25, 19, 3]

    def test_width_does_not_matter(self):
        n = np.arange(1, 200, dtype=np.int64)
        assert np.array_equal(reversed_indices(n, 8), reversed_indices(n, 12))


def test_table_entries_agree_with_pair_iteration():
    scale = scale_for(5000)
    table = d_table(5000, scale)
    for n in (0, 1, 2, 19, 1023, 1024, 4999):
        assert d_recurrence(n).scaled(scale) == table[n]
