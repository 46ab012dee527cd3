"""
Tests for block-count bounds, binomial estimates and censuses of small d_n.
"""

from fractions import Fraction

import numpy as np
import pytest

from corput.bits import block_count
from corput.irregularity import (
    LemmaHypothesisError,
    Threshold,
    a_count,
    binom_bounds_check,
    binomial,
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
    ks_distance,
    level_count,
    normalized_values,
    random_binom_points,
    robbins_check,
    sandwich_terms,
    theorem_bound_chain,
    tightness_probe,
    verify_block_bounds,
)
from corput.vdc import d_recurrence


class TestBlockBounds:
    def test_exhaustive(self):
        assert verify_block_bounds(1 << 14)

    def test_partitioned(self, small_chunks):
        assert verify_block_bounds(5000, jobs=2)

    def test_sampled_by_hand(self):
        for n in (1, 5, 19, 21, 51, 1023):
            d = d_recurrence(n)
            assert Fraction(block_count(n), 2) <= d <= 2 * block_count(n)

    def test_tightness(self):
        assert tightness_probe(2) == (Fraction(7, 8), Fraction(87, 64))
        assert tightness_probe(3)[0] == Fraction(13, 16)


class TestCounting:
    def test_values(self):
        assert a_count(2, 1) == 3
        assert a_count(4, 2) == 10
        assert a_count(3, 3) == 0

    def test_binomial_outside_range(self):
        assert binomial(5, 7) == 0
        assert binomial(5, -1) == 0

    def test_against_enumeration(self):
        assert check_a_count(14)

    def test_rows_sum_to_powers_of_two(self):
        assert check_binomial_sums(40)

    def test_rejects_zero_blocks(self):
        with pytest.raises(ValueError):
            a_count(3, 0)


class TestEstimates:
    def test_robbins(self):
        assert robbins_check(1)
        assert check_robbins(60)

    def test_binomial_estimate(self):
        assert binom_bounds_check(100, 20, "0.1", "0.3")

    def test_random_points_are_valid_and_seeded(self):
        points = random_binom_points(20, seed=3)
        assert points == random_binom_points(20, seed=3)
        for k, ell, a, b in points:
            assert 0 < a <= b < Fraction(368, 1000)
            assert a * k <= ell <= b * k

    def test_grid(self):
        assert check_binom_grid(15, seed=0)

    @pytest.mark.parametrize("args, message", [
        ((100, 50, "0.1", "0.3"), "alpha\\*k <= l <= beta\\*k"),
        ((100, 30, "0.1", "0.4"), "beta <= 1/e"),
        ((100, 20, "0.3", "0.1"), "0 < alpha <= beta"),
        ((0, 1, "0.1", "0.3"), "k, l >= 1"),
    ])
    def test_hypotheses(self, args, message):
        with pytest.raises(LemmaHypothesisError, match=message):
            binom_bounds_check(*args)


class TestExponentConstants:
    def test_half_is_exact(self):
        assert exponent_constant(Fraction(1, 2)).lo == 1

    def test_index_exponents(self):
        assert exponent_constant(lambda ctx: 4 * ctx.log(2) / 100).lt(Fraction(183, 1000))
        assert exponent_constant(lambda ctx: ctx.log(2) / 100).gt(Fraction(56, 1000))

    def test_float_parameter_reads_as_decimal(self):
        assert exponent_constant(0.25) == exponent_constant(Fraction(1, 4))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            exponent_constant(1)


class TestThreshold:
    def test_needs_exactly_one_parameter(self):
        with pytest.raises(ValueError, match="exactly one"):
            Threshold()
        with pytest.raises(ValueError, match="exactly one"):
            Threshold(t=Fraction(1), epsilon=Fraction(1))

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError, match="Unknown threshold mode"):
            Threshold.logarithmic("0.1", mode="bogus")

    def test_rejects_nonpositive_epsilon(self):
        with pytest.raises(ValueError):
            Threshold.logarithmic(0)

    def test_describe(self):
        assert Threshold.absolute("3/2").describe() == "3/2"
        assert Threshold.logarithmic("0.25").describe() == "1/4*ln(n)"
        assert Threshold.logarithmic("0.25", "window").describe() == "1/4*ln(limit)"

    def test_max_blocks(self):
        assert Threshold.absolute("3/2").max_blocks(32) == 3
        # 2 * ln(1000) / 4 = 3.45...
        assert Threshold.logarithmic("1/4", "window").max_blocks(1000) == 3


class TestCensus:
    @pytest.mark.parametrize("method", ["direct", "pruned"])
    def test_small_census(self, method):
        report = census(32, Threshold.absolute("3/2"), method)
        assert report.count == 9
        assert report.witnesses == (1, 2, 3, 4, 6, 8, 12, 16, 24)

    def test_empty_census_has_undefined_exponent(self):
        report = census(32, Threshold.absolute(0))
        assert report.count == 0
        assert report.empirical_exponent is None
        assert report.exponent_text == "undefined"

    def test_exponent(self):
        report = census(32, Threshold.absolute(1))
        # powers of two below 32
        assert report.count == 5
        assert report.empirical_exponent == pytest.approx(np.log(5) / np.log(32))

    @pytest.mark.parametrize("threshold", [
        Threshold.absolute("5/2"),
        Threshold.logarithmic("1/4"),
        Threshold.logarithmic("1/4", "window"),
        Threshold.logarithmic("0.01"),
    ])
    def test_methods_agree(self, threshold):
        assert check_census(1 << 13, threshold)

    def test_partitioned_census(self, small_chunks):
        threshold = Threshold.logarithmic("1/3")
        assert census(3000, threshold, jobs=2) == census(3000, threshold, jobs=1)

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="Unknown census method"):
            census(32, Threshold.absolute(1), "bogus")


class TestSandwich:
    def test_terms(self):
        assert sandwich_terms(4, 1) == (0, 1, 15)

    def test_level_count(self):
        assert level_count(4, 1) == 1
        assert level_count(0, 1) == 1

    def test_exhaustive(self):
        assert check_sandwich(12, (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)))

    @pytest.mark.parametrize("epsilon", ["1/100", "1/4", "1"])
    def test_bound_chain(self, epsilon):
        assert check_bound_chain(12, epsilon)

    def test_bound_chain_rows(self):
        rows = theorem_bound_chain(6, "1/4")
        assert [row.k for row in rows] == [1, 2, 3, 4, 5, 6]
        assert all(row.holds for row in rows)

    def test_density_probe_is_a_fraction(self):
        assert 0 <= density_probe(4096, 0.25) <= 1


class TestCentralLimit:
    def test_normalized_values(self):
        y = normalized_values(1024)
        assert y.size == 1022

    def test_histogram(self):
        result = clt_histogram(4096, 10)
        assert len(result.bins) == 10
        assert result.bins[-1].empirical_cdf == 1.0
        cdf = [b.normal_cdf for b in result.bins]
        assert cdf == sorted(cdf)
        assert 0 < result.ks_distance < 1

    def test_ks_distance_of_a_point(self):
        assert ks_distance(np.array([0.0])) == pytest.approx(0.5)

    def test_rejects_few_bins(self):
        with pytest.raises(ValueError):
            clt_histogram(4096, 5)
