"""
Binary expansion contracts: digits, reversal, 1-blocks and the block-subset
bijection.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corput.bits import (
    BinaryWord,
    block_count,
    block_subset,
    enumerate_by_blocks,
    enumerate_low_block,
    from_block_subset,
    reverse,
    run_lengths,
)


class TestBinaryWord:
    def test_from_int(self):
        word = BinaryWord.from_int(19)
        assert str(word) == "10011"
        assert word.nu == 4
        assert word.to_int() == 19

    def test_digits_are_indexed_from_least_significant(self):
        word = BinaryWord.from_int(0b110)
        assert [word.digit(i) for i in range(4)] == [0, 1, 1, 0]

    def test_interior_drops_both_ends(self):
        assert BinaryWord.from_int(0b10110).interior() == (1, 1, 0)
        assert BinaryWord.from_int(0b11).interior() == ()

    def test_rejects_leading_zero(self):
        with pytest.raises(ValueError, match="Leading digit"):
            BinaryWord((0, 1))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            BinaryWord.from_int(-1)


class TestReverse:
    @pytest.mark.parametrize("n, expected", [(1, 1), (6, 3), (19, 25), (25, 19), (0b1011000, 0b1101)])
    def test_values(self, n, expected):
        assert reverse(n) == expected

    def test_rejects_zero(self):
        with pytest.raises(ValueError, match="reverse requires n >= 1, got 0"):
            reverse(0)

    @given(st.integers(1, 2**64))
    def test_result_is_odd_and_involutive_on_odd(self, n):
        r = reverse(n)
        assert r % 2 == 1
        assert reverse(r) == n // (n & -n)


class TestBlocks:
    @pytest.mark.parametrize("n, expected", [(0, 0), (1, 1), (5, 2), (6, 1), (0b1011, 2), (0b10101, 3)])
    def test_block_count(self, n, expected):
        assert block_count(n) == expected

    def test_run_lengths(self):
        assert run_lengths(0b1100111) == (2, 2, 3)
        assert run_lengths(6) == (2, 1)

    def test_enumerate_by_blocks(self):
        assert enumerate_by_blocks(2, 1) == [4, 6, 7]
        assert enumerate_by_blocks(2, 2) == [5]
        assert enumerate_by_blocks(2, 3) == []

    def test_enumerate_low_block(self):
        assert list(enumerate_low_block(8, 1)) == [1, 2, 3, 4, 6, 7]

    @given(st.integers(2, 3000), st.integers(1, 4))
    def test_enumerate_low_block_matches_scan(self, limit, blocks):
        expected = [n for n in range(1, limit) if block_count(n) <= blocks]
        assert list(enumerate_low_block(limit, blocks)) == expected

    def test_enumeration_by_blocks_matches_scan(self):
        for k in range(9):
            for blocks in range(1, 6):
                expected = [n for n in range(1 << k, 1 << (k + 1)) if block_count(n) == blocks]
                assert enumerate_by_blocks(k, blocks) == expected


class TestBlockSubset:
    def test_example(self):
        assert block_subset(6) == frozenset({1})
        assert from_block_subset(2, {1}) == 6

    @given(st.integers(1, 2**20))
    def test_size_is_odd(self, n):
        assert len(block_subset(n)) == 2 * block_count(n) - 1

    @given(st.integers(1, 2**20))
    def test_bijection(self, n):
        k = n.bit_length() - 1
        assert from_block_subset(k, block_subset(n)) == n

    def test_rejects_even_subsets(self):
        with pytest.raises(ValueError, match="odd size"):
            from_block_subset(4, {0, 1})
