"""
UAT: central limit probe (diagnostic)

The KS distance to the normal law should shrink as the limit grows. No rate
is guaranteed: the mean of y_N is still well above 0 at 2^24, so only the
trend is asserted. This only runs with the slow tests.
"""

import pytest

from corput.irregularity import clt_histogram


@pytest.mark.slow
def test_ks_distance_shrinks():
    results = [clt_histogram(limit, 64) for limit in (1 << 16, 1 << 20, 1 << 24)]
    ks = [r.ks_distance for r in results]
    assert ks == sorted(ks, reverse=True)
    assert all(0 < value < 1 for value in ks)
