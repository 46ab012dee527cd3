"""
Shared fixtures.

Every test runs against default config: no user config file and no CORPUT_*
overrides leak in, and mutations made by a test are dropped afterwards.
"""

import csv
from fractions import Fraction
from pathlib import Path

import pytest

from corput.config import get_config, reset_config

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    for key in ("CORPUT_JOBS", "CORPUT_CHUNK", "CORPUT_PRECISION_BITS",
                "CORPUT_MAX_PSI_LEVEL", "CORPUT_FLOAT_DIGITS"):
        monkeypatch.delenv(key, raising=False)
    reset_config()
    yield get_config()
    reset_config()


@pytest.fixture
def small_chunks(isolated_config):
    """Force several partitions even for small sweeps."""
    isolated_config.parallel.chunk = 64
    return isolated_config


@pytest.fixture(scope="session")
def value_table() -> list[Fraction]:
    """The 32 exact values d_0 .. d_31."""
    with open(FIXTURES / "value_table.csv", encoding="utf-8") as f:
        return [Fraction(row["d"]) for row in csv.DictReader(f)]
