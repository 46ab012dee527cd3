"""
Value-type contracts: Dyadic normal form, canonical text, and its agreement
with Fraction.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corput.numerics import (
    HALF,
    ONE,
    ZERO,
    Dyadic,
    as_fraction,
    dist_nearest_int,
    format_float,
    format_rational,
    parse_rational,
)

dyadics = st.builds(Dyadic, st.integers(-10**12, 10**12), st.integers(0, 80))


class TestNormalForm:
    def test_even_numerator_is_reduced(self):
        d = Dyadic(12, 4)
        assert (d.num, d.exp) == (3, 2)

    def test_zero_has_exponent_zero(self):
        assert Dyadic(0, 7).exp == 0

    def test_integer_value_keeps_exponent_zero(self):
        assert Dyadic(8, 3) == Dyadic(1)
        assert Dyadic(8, 3).exp == 0

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError, match="exponent"):
            Dyadic(1, -1)

    @given(dyadics)
    def test_normal_form_invariant(self, d):
        assert d.exp == 0 or d.num % 2 == 1


class TestCanonicalText:
    @pytest.mark.parametrize(
        "value, text",
        [(Dyadic(37, 4), "37/2^4"), (Dyadic(0), "0"), (Dyadic(1), "1"), (Dyadic(-3, 1), "-3/2^1")],
    )
    def test_str(self, value, text):
        assert str(value) == text

    def test_parse(self):
        assert Dyadic.parse("37/2^4") == Fraction(37, 16)
        assert Dyadic.parse(" 5 ") == 5

    def test_parse_rejects_other_denominators(self):
        with pytest.raises(ValueError, match="Invalid dyadic"):
            Dyadic.parse("3/5")

    @given(dyadics)
    def test_parse_inverts_str(self, d):
        assert Dyadic.parse(str(d)) == d

    def test_rational_text(self):
        assert format_rational(Fraction(6, 4)) == "3/2"
        assert format_rational(Fraction(4, 2)) == "2"
        assert parse_rational("3/2") == Fraction(3, 2)
        assert parse_rational("0.01") == Fraction(1, 100)

    def test_parse_rational_error(self):
        with pytest.raises(ValueError, match="Invalid rational"):
            parse_rational("three halves")

    def test_float_has_17_significant_digits(self):
        assert format_float(Fraction(1, 3)) == "0.33333333333333331"
        assert format_float(Dyadic(37, 4)) == "2.3125"


class TestFractionAgreement:
    @given(dyadics, dyadics)
    def test_arithmetic_matches_fraction(self, a, b):
        fa, fb = a.to_fraction(), b.to_fraction()
        assert (a + b).to_fraction() == fa + fb
        assert (a - b).to_fraction() == fa - fb
        assert (a * b).to_fraction() == fa * fb

    @given(dyadics, dyadics)
    def test_ordering_matches_fraction(self, a, b):
        assert (a < b) == (a.to_fraction() < b.to_fraction())
        assert (a <= b) == (a.to_fraction() <= b.to_fraction())

    @given(dyadics)
    def test_hash_matches_fraction(self, d):
        assert hash(d) == hash(d.to_fraction())
        assert d == d.to_fraction()

    def test_from_fraction(self):
        assert Dyadic.from_fraction(Fraction(37, 16)) == Dyadic(37, 4)
        with pytest.raises(ValueError, match="not a dyadic"):
            Dyadic.from_fraction(Fraction(1, 3))

    def test_constants(self):
        assert ZERO == 0 and ONE == 1 and HALF == Fraction(1, 2)
        assert as_fraction(HALF) == Fraction(1, 2)

    def test_half_and_shift(self):
        assert Dyadic(3).half() == Fraction(3, 2)
        assert Dyadic(3, 1).shift(-3) == 12
        assert Dyadic(3).shift(2) == Fraction(3, 4)

    def test_scaled(self):
        assert Dyadic(3, 2).scaled(5) == 24
        with pytest.raises(ValueError):
            Dyadic(3, 2).scaled(1)


class TestDistanceToNearestInteger:
    @pytest.mark.parametrize("n, j, expected", [(19, 1, Fraction(1, 2)), (19, 2, Fraction(1, 4)),
                                                (19, 3, Fraction(3, 8)), (19, 5, Fraction(13, 32))])
    def test_values(self, n, j, expected):
        assert dist_nearest_int(n, j) == expected

    def test_rejects_j_zero(self):
        with pytest.raises(ValueError):
            dist_nearest_int(3, 0)
