"""
Tests for certified interval evaluation.
"""

import math
from fractions import Fraction

import pytest

from corput.certified import (
    Enclosure,
    PrecisionBudgetError,
    certified_floor,
    decide,
    evaluate,
    factorial_bounds,
    ln,
    log2,
    normal_cdf,
    power,
    working_precision,
)
from corput.numerics import Dyadic

LOG2_3 = Fraction("1.5849625007211561814537389439478165087598144")
SQRT_2 = Fraction("1.4142135623730950488016887242096980785696719")
PI = Fraction("3.1415926535897932384626433832795028841971694")


class TestEnclosure:
    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="Empty enclosure"):
            Enclosure(Fraction(1), Fraction(0))

    def test_three_valued_comparisons(self):
        e = Enclosure(Fraction(1), Fraction(2))
        assert e.le(2) is True
        assert e.lt(2) is None
        assert e.gt(0) is True
        assert e.ge(3) is False
        assert e.le(Fraction(3, 2)) is None

    def test_exact_endpoint_arithmetic(self):
        e = Enclosure(Fraction(1), Fraction(2))
        assert e + 1 == Enclosure(Fraction(2), Fraction(3))
        assert 3 - e == Enclosure(Fraction(1), Fraction(2))
        assert e * -2 == Enclosure(Fraction(-4), Fraction(-2))
        assert abs(Enclosure(Fraction(-3), Fraction(1))) == Enclosure(Fraction(0), Fraction(3))

    def test_accepts_dyadic(self):
        assert Enclosure.exact(Dyadic(37, 4)).contains(Fraction(37, 16))


class TestElementary:
    def test_log2_is_exact_on_powers_of_two(self):
        assert log2(1024) == Enclosure.exact(10)
        assert log2(Fraction(1, 8)) == Enclosure.exact(-3)

    def test_log2_encloses(self):
        e = log2(3)
        assert abs(e.mid - LOG2_3) < Fraction(1, 10**40)
        assert e.contains(e.mid)

    def test_ln_of_one_is_zero(self):
        assert ln(1) == Enclosure.exact(0)

    def test_ln_rejects_nonpositive(self):
        with pytest.raises(ValueError, match="positive"):
            ln(0)

    def test_power(self):
        root = power(2, Fraction(1, 2))
        assert abs(root.mid - SQRT_2) < Fraction(1, 10**40)
        assert root.width < Fraction(1, 10**40)

    def test_working_precision_restores(self):
        with working_precision(300) as ctx:
            assert ctx.prec == 300
        with working_precision(53) as ctx:
            assert ctx.prec == 53

    def test_evaluate_pi(self):
        pi = evaluate(lambda ctx: ctx.pi)
        assert pi.width < Fraction(1, 10**40)
        assert abs(pi.mid - PI) < Fraction(1, 10**40)


class TestDecide:
    def test_settled(self):
        assert decide(lambda bits: log2(3, bits).gt(Fraction(3, 2))) is True

    def test_never_settles(self):
        with pytest.raises(PrecisionBudgetError, match="undecided"):
            decide(lambda bits: None, attempts=2)

    def test_floor(self):
        assert certified_floor(lambda bits: power(2, Fraction(41, 2), bits)) == 1482910

    def test_floor_of_integer_enclosure(self):
        assert certified_floor(lambda bits: Enclosure.exact(7)) == 7


class TestNormalCdf:
    def test_zero_is_exact(self):
        assert normal_cdf(0) == Enclosure.exact(Fraction(1, 2))

    @pytest.mark.parametrize("y, value", [(1, 0.8413447460685429), (-1, 0.15865525393145707),
                                          (Fraction(5, 2), 0.9937903346742238)])
    def test_values(self, y, value):
        e = normal_cdf(y)
        assert e.width < Fraction(1, 10**30)
        assert float(e) == pytest.approx(value, rel=1e-15)

    def test_far_tail(self):
        e = normal_cdf(12)
        assert e.hi <= 1
        assert e.lo > 1 - Fraction(1, 10**30)

    def test_symmetry(self):
        a, b = normal_cdf(Fraction(3, 4)), normal_cdf(Fraction(-3, 4))
        assert (a + b).contains(1)


class TestFactorialBounds:
    @pytest.mark.parametrize("n", [1, 2, 5, 20, 100])
    def test_brackets_factorial(self, n):
        lower, upper = factorial_bounds(n)
        assert lower.hi <= math.factorial(n) <= upper.lo

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            factorial_bounds(0)
