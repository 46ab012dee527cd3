"""
Tests for the verification suites at reduced limits.
"""

import json
from fractions import Fraction

import pytest

import corput.vdc
from corput.numerics import Dyadic
from corput.report import VerifyReport
from corput.suites import SuiteOptions, SuiteRun, run_suite, suite_names

SMALL = SuiteOptions(seed=7, limit=512, level=5)


@pytest.fixture
def reduced(isolated_config):
    limits = isolated_config.limits
    limits.robbins = 40
    limits.binom_points = 8
    limits.reversal_params = 5
    limits.matrix_params = 20
    limits.matrix_eval_params = 4
    limits.clt_bins = 16
    limits.cauchy_min_level = 5
    return isolated_config


class TestRegistry:
    def test_names(self):
        names = suite_names()
        assert names[0] == "all"
        assert set(names[1:]) == {"discrepancy", "bounds", "fluctuation", "stern", "reversal", "matrices"}

    def test_unknown_suite(self):
        with pytest.raises(ValueError, match="Unknown suite: nope"):
            run_suite("nope")


class TestOptions:
    def test_overrides(self):
        opts = SuiteOptions(limit=100, level=4)
        assert opts.index(4096) == 100
        assert opts.levels(20) == 4

    @pytest.mark.parametrize("kwargs, message", [
        ({"limit": 3}, "--limit must be >= 4, got 3"),
        ({"level": 1}, "--level must be >= 2, got 1"),
    ])
    def test_rejects_values_too_small_for_the_suites(self, kwargs, message):
        with pytest.raises(ValueError, match=message):
            SuiteOptions(**kwargs)

    def test_defaults_pass_through(self):
        opts = SuiteOptions()
        assert opts.index(4096) == 4096
        assert opts.levels(20) == 20

    def test_limits_follow_config(self, isolated_config):
        isolated_config.limits.discrepancy = 77
        assert SuiteOptions().limits.discrepancy == 77


class TestSuiteRun:
    def test_bool_outcomes_become_records(self):
        run = SuiteRun(VerifyReport("x", 0), SuiteOptions())
        assert run.check("yes", lambda: True, limit=3)
        assert not run.check("no", lambda: False)
        assert [(r.check, r.passed) for r in run.report.records] == [("yes", True), ("no", False)]
        assert run.report.records[0].params == {"limit": 3}

    def test_constant(self):
        run = SuiteRun(VerifyReport("x", 0), SuiteOptions())
        assert run.constant("C", 0.25) == 0.25
        assert run.report.constants == {"C": 0.25}


class TestSuites:
    @pytest.mark.parametrize("name", ["discrepancy", "bounds", "fluctuation", "stern", "reversal", "matrices"])
    def test_passes_at_small_limits(self, reduced, name):
        report = run_suite(name, SMALL)
        assert report.passed, report.failures

    def test_discrepancy_records(self, reduced):
        report = run_suite("discrepancy", SMALL)
        assert [r.check for r in report.records] == [
            "agreement", "radical_inverse", "batch", "minimum", "doubling", "symmetry", "envelope", "polygon",
            "upper_bound", "limsup",
        ]
        assert abs(report.constants["limsup_probe"] - 0.9727652) < 1e-6

    def test_bounds_records(self, reduced):
        report = run_suite("bounds", SMALL)
        by_name = {r.check: r for r in report.records}
        assert by_name["census_empty"].note == "empirical exponent undefined"
        assert by_name["clt_trend"].soft
        assert by_name["clt_ceiling"].soft
        assert "clt_mean_512" in report.constants
        assert [r.params["epsilon"] for r in report.records if r.check == "bound_chain"] == [
            Fraction(1, 100), Fraction(1, 4), Fraction(1),
        ]
        assert "ks_distance_512" in report.constants

    def test_fluctuation_constants(self, reduced):
        report = run_suite("fluctuation", SMALL)
        assert report.constants["envelope_calibration_levels"] == (5, 5)
        assert report.constants["envelope_constant"] > 0
        assert report.constants["psi_half_radius"] > 0

    def test_matrices_has_a_record_per_identity(self, reduced):
        report = run_suite("matrices", SMALL)
        identity = [r.check for r in report.records if r.check.startswith("identity_")]
        assert len(identity) == 16
        assert "identity_AAB_w" in identity
        assert report.records[-1].note == "x1 = 1"

    def test_reports_are_reproducible(self, reduced):
        assert run_suite("matrices", SMALL).to_json() == run_suite("matrices", SMALL).to_json()

    @pytest.mark.slow
    def test_all(self, reduced):
        report = run_suite("all", SMALL)
        assert report.passed
        assert json.loads(report.to_json())["suite"] == "all"


def test_broken_method_is_caught_with_witness(reduced, monkeypatch):
    honest = corput.vdc.d_recurrence
    monkeypatch.setattr(corput.vdc, "d_recurrence", lambda n: Dyadic(0) if n == 7 else honest(n))
    report = run_suite("discrepancy", SMALL)
    assert not report.passed
    failure = report.failures[0]
    assert failure.check == "agreement"
    assert failure.witness["n"] == 7
    assert failure.witness["recurrence"] == "0"


class TestSmallOverrides:
    @pytest.mark.parametrize("level", [2, 4])
    def test_fluctuation_below_calibration_level(self, reduced, level):
        report = run_suite("fluctuation", SuiteOptions(limit=256, level=level))
        assert report.passed, report.failures
        assert report.constants["envelope_calibration_levels"] == (level, level)

    def test_bounds_at_smallest_limit(self, reduced):
        report = run_suite("bounds", SuiteOptions(limit=4, level=2))
        assert report.passed, report.failures


class TestScalarCoverage:
    def test_reversal_has_specialization(self, reduced):
        report = run_suite("reversal", SMALL)
        record = next(r for r in report.records if r.check == "specialization")
        assert record.passed
        assert record.params == {"limit": 512}

    def test_stern_scalar_records(self, reduced):
        report = run_suite("stern", SMALL)
        names = [r.check for r in report.records]
        assert "stern_values" in names
        assert "stern_psi_zero" in names
        assert report.passed


def test_broken_scalar_radical_inverse_is_caught(reduced, monkeypatch):
    honest = corput.vdc.radical_inverse
    monkeypatch.setattr(corput.vdc, "radical_inverse", lambda n: Dyadic(0) if n == 5 else honest(n))
    report = run_suite("discrepancy", SMALL)
    failure = report.failures[0]
    assert failure.check == "radical_inverse"
    assert failure.witness["n"] == 5
