"""
Binary expansions: digits, digit reversal, blocks of 1s.

Block convention: |n|_01 is the number of maximal runs of 1-digits in the
expansion of n, i.e. the number of "01" factors once a 0 is prepended. The
literal factor count over the bare expansion would miss the leading block.
block_count(0) == 0, and reverse(0) is rejected.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from itertools import groupby


@dataclass(frozen=True, slots=True)
class BinaryWord:
    """Digits eps_nu ... eps_0 of a nonnegative integer, most significant first."""
    bits: tuple[int, ...]

    def __post_init__(self):
        if not self.bits:
            raise ValueError("BinaryWord needs at least one digit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"BinaryWord digits must be 0 or 1, got {self.bits}")
        if len(self.bits) > 1 and self.bits[0] != 1:
            raise ValueError(f"Leading digit must be 1 for a proper expansion, got {self.bits}")

    @classmethod
    def from_int(cls, n: int) -> BinaryWord:
        if n < 0:
            raise ValueError(f"BinaryWord requires n >= 0, got {n}")
        return cls(tuple(int(c) for c in format(n, "b")))

    def to_int(self) -> int:
        return int(str(self), 2)

    @property
    def nu(self) -> int:
        """Index of the leading digit (0 for n in {0, 1})."""
        return len(self.bits) - 1

    def digit(self, i: int) -> int:
        """eps_i(n); digits above nu are 0."""
        if i < 0:
            raise ValueError(f"Digit index must be >= 0, got {i}")
        return self.bits[self.nu - i] if i <= self.nu else 0

    def interior(self) -> tuple[int, ...]:
        """eps_1 ... eps_{nu-1}, lowest index first."""
        return tuple(self.digit(i) for i in range(1, self.nu))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def reverse(n: int) -> int:
    """n^R: the digits of n read backwards. Always odd."""
    if n < 1:
        raise ValueError(f"reverse requires n >= 1, got {n}")
    return int(format(n, "b")[::-1], 2)


def block_count(n: int) -> int:
    """|n|_01: number of maximal blocks of 1-digits."""
    if n < 0:
        raise ValueError(f"block_count requires n >= 0, got {n}")
    # top digit of each block: eps_i = 1 and eps_{i+1} = 0
    return (n & ~(n >> 1)).bit_count()


def run_lengths(n: int) -> tuple[int, ...]:
    """Alternating run lengths of the expansion, leading 1-run first."""
    if n < 1:
        raise ValueError(f"run_lengths requires n >= 1, got {n}")
    return tuple(len(list(group)) for _, group in groupby(format(n, "b")))


def _compose(
    length: int,
    min_blocks: int,
    max_blocks: int,
    limit: int | None = None,
) -> Iterator[int]:
    """
    Words of exactly `length` digits (leading 1) with min_blocks..max_blocks
    blocks of 1s, ascending, optionally below `limit`.

    Built run by run: a 1-run grows the value with its length, a 0-run shrinks
    it, so 1-runs are tried shortest first and 0-runs longest first.
    """

    def runs(prefix: int, rem: int, bit: int, blocks: int) -> Iterator[int]:
        if rem == 0:
            if blocks >= min_blocks:
                yield prefix
            return
        # blocks still reachable from here
        reachable = (rem + 1) // 2 if bit else rem // 2
        if blocks + reachable < min_blocks:
            return
        if bit:
            if blocks == max_blocks:
                return
            for r in range(1, rem + 1):
                value = (prefix << r) | ((1 << r) - 1)
                if limit is not None and value << (rem - r) >= limit:
                    return
                yield from runs(value, rem - r, 0, blocks + 1)
        else:
            shortest = rem if blocks == max_blocks else 1
            for r in range(rem, shortest - 1, -1):
                value = prefix << r
                if limit is not None and value << (rem - r) >= limit:
                    return
                yield from runs(value, rem - r, 1, blocks)

    yield from runs(0, length, 1, 0)


def enumerate_by_blocks(k: int, blocks: int) -> list[int]:
    """All n in [2^k, 2^(k+1)) with exactly `blocks` blocks of 1s, ascending."""
    if k < 0 or blocks < 1:
        raise ValueError(f"enumerate_by_blocks requires k >= 0 and blocks >= 1, got ({k}, {blocks})")
    if 2 * blocks - 1 > k + 1:
        return []
    return list(_compose(k + 1, blocks, blocks))


def enumerate_low_block(limit: int, max_blocks: int) -> Iterator[int]:
    """Every n in [1, limit) with at most `max_blocks` blocks of 1s, ascending, without a scan."""
    if limit < 2 or max_blocks < 1:
        raise ValueError(
            f"enumerate_low_block requires limit >= 2 and max_blocks >= 1, got ({limit}, {max_blocks})"
        )
    top = (limit - 1).bit_length()
    for length in range(1, top + 1):
        yield from _compose(length, 1, max_blocks, limit if length == top else None)


def block_subset(n: int) -> frozenset[int]:
    """
    Bijection of the block counting lemma.

    For n in [2^k, 2^(k+1)) with l blocks of 1s, returns the digit indices of
    the rightmost digit of every 1-block and of the first l-1 0-blocks
    (counting 0-blocks from the most significant end). The result is a
    (2l-1)-subset of {0, ..., k}.
    """
    if n < 1:
        raise ValueError(f"block_subset requires n >= 1, got {n}")
    lengths = run_lengths(n)
    ones = (len(lengths) + 1) // 2
    kept = lengths[: 2 * ones - 1]  # drop a trailing 0-block
    index = n.bit_length()
    subset = set()
    for run in kept:
        index -= run
        subset.add(index)
    return frozenset(subset)


def from_block_subset(k: int, subset: Iterable[int]) -> int:
    """Inverse of block_subset for words of length k + 1."""
    positions = sorted(set(subset), reverse=True)
    if not positions or len(positions) % 2 == 0:
        raise ValueError(f"Subset must have odd size, got {len(positions)}")
    if positions[0] > k or positions[-1] < 0:
        raise ValueError(f"Subset must lie in [0, {k}], got {positions}")
    n = 0
    top = k + 1
    for i, pos in enumerate(positions):
        if i % 2 == 0:
            n |= ((1 << (top - pos)) - 1) << pos
        top = pos
    return n
