"""
UAT: exact values

The published table of d_0 .. d_31 is reproduced, and the explicit formula,
the recurrence and the sorted-point oracle agree (with D* = D) up to 4096.
"""

import csv
import io

import pytest

from corput.cli import main
from corput.numerics import Dyadic
from corput.vdc import check_agreement


def test_table_reproduces_published_values(capsys, value_table):
    assert main(["table", "0", "32"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [Dyadic.parse(r["d_exact"]) for r in rows] == value_table


@pytest.mark.slow
def test_three_methods_agree_to_4096():
    assert check_agreement(4096)
