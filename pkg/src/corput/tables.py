"""
Vectorised tables of d_n for exhaustive sweeps.

Every d_n with n < 2^E has a denominator dividing 2^(E-1), so the table stores
the integers D[n] = d_n * 2^E ("scaled values") and fills whole dyadic levels
at once from

    d_{2m} = d_m,    d_{2m+1} = (d_m + d_{m+1} + 1) / 2.

Scaled values fit int64 comfortably. Prefix sums switch to Python integers
(object arrays) when they could overflow.
"""

from __future__ import annotations

import numpy as np


# below this size d_range builds the table from 0 instead of recursing
_DIRECT = 1 << 12


def scale_for(limit: int) -> int:
    """Smallest E such that d_n * 2^E is an integer for every n < limit."""
    return max(1, (limit - 1).bit_length())


def d_table(limit: int, scale: int | None = None) -> np.ndarray:
    """Scaled values d_n * 2^scale for 0 <= n < limit."""
    if limit < 1:
        raise ValueError(f"d_table requires limit >= 1, got {limit}")
    scale = scale_for(limit) if scale is None else scale
    if scale < scale_for(limit):
        raise ValueError(f"Scale 2^{scale} too coarse for n < {limit}")
    one = 1 << scale
    table = np.zeros(max(limit, 2), dtype=np.int64)
    table[1] = one
    lo = 2
    while lo < limit:
        hi = min(2 * lo, limit)
        evens = len(range(lo, hi, 2))
        odds = len(range(lo + 1, hi, 2))
        half = lo // 2
        table[lo:hi:2] = table[half:half + evens]
        parents = table[half:half + odds]
        table[lo + 1:hi:2] = (parents + table[half + 1:half + 1 + odds] + one) >> 1
        lo = hi
    return table[:limit]


def d_range(start: int, stop: int, scale: int) -> np.ndarray:
    """
    Scaled values for start <= n < stop without materialising [0, start).

    Recurses on the parent range [start // 2, stop // 2 + 1], so the work is
    about twice the range length.
    """
    if not 0 <= start < stop:
        raise ValueError(f"d_range requires 0 <= start < stop, got ({start}, {stop})")
    if scale < scale_for(stop):
        raise ValueError(f"Scale 2^{scale} too coarse for n < {stop}")
    if stop <= _DIRECT or start < stop - start:
        return d_table(stop, scale)[start:stop]
    parent_lo = start // 2
    parent = d_range(parent_lo, (stop - 1) // 2 + 2, scale)
    n = np.arange(start, stop, dtype=np.int64)
    idx = n // 2 - parent_lo
    odd = (parent[idx] + parent[idx + 1] + (1 << scale)) >> 1
    return np.where((n & 1) == 1, odd, parent[idx])


def prefix_sums(values: np.ndarray) -> np.ndarray:
    """Running sums of a scaled table, promoted to Python ints when int64 could overflow."""
    if len(values) and int(values.max()).bit_length() + len(values).bit_length() >= 62:
        return np.cumsum(values.astype(object))
    return np.cumsum(values)


def s_prime_table(limit: int) -> tuple[np.ndarray, int]:
    """
    S'(n) * 2^scale for 0 <= n < limit, with S'(n) = d_1 + ... + d_n - d_n / 2.

    Returns (values, scale); scale is one more than the d_n table's.
    """
    scale = scale_for(limit)
    table = d_table(limit, scale)
    return 2 * prefix_sums(table) - table, scale + 1


def stern_table(limit: int) -> np.ndarray:
    """Stern's diatomic s_n for 0 <= n < limit (s_0 = 0)."""
    if limit < 1:
        raise ValueError(f"stern_table requires limit >= 1, got {limit}")
    table = np.zeros(max(limit, 2), dtype=np.int64)
    table[1] = 1
    lo = 2
    while lo < limit:
        hi = min(2 * lo, limit)
        evens = len(range(lo, hi, 2))
        odds = len(range(lo + 1, hi, 2))
        half = lo // 2
        table[lo:hi:2] = table[half:half + evens]
        table[lo + 1:hi:2] = table[half:half + odds] + table[half + 1:half + 1 + odds]
        lo = hi
    return table[:limit]


def reversed_indices(n: np.ndarray, width: int) -> np.ndarray:
    """n^R for every 1 <= n < 2^width: the significant digits of n read backwards."""
    mirrored = np.zeros_like(n)
    length = np.zeros_like(n)
    for i in range(width):
        bit = (n >> i) & 1
        mirrored |= bit << (width - 1 - i)
        length = np.where(bit == 1, i + 1, length)
    return mirrored >> (width - length)
