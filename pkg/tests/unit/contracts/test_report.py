"""
Report contracts: verdict truthiness, witness rendering, deterministic JSON.
"""

import json
from fractions import Fraction

from corput.numerics import Dyadic
from corput.report import CheckRecord, Verdict, VerifyReport, render


class TestVerdict:
    def test_truthiness(self):
        assert Verdict.ok()
        assert not Verdict.fail(n=3)

    def test_witness_is_rendered_canonically(self):
        verdict = Verdict.fail(n=19, d=Dyadic(37, 4), ratio=Fraction(2, 3), x=0.5)
        assert verdict.witness == {"n": 19, "d": "37/2^4", "ratio": "2/3", "x": "0.5"}

    def test_of(self):
        assert Verdict.of(True, n=1).witness is None
        assert Verdict.of(False, n=1).witness == {"n": 1}

    def test_render_sequences(self):
        assert render((Fraction(1, 2), 3)) == ["1/2", 3]
        assert render(None) is None
        assert render(True) is True


class TestVerifyReport:
    def _report(self):
        report = VerifyReport("discrepancy", seed=7)
        report.add(CheckRecord("agreement", {"limit": 4096}, True, seconds=1.25))
        report.add(CheckRecord("minimum", {"limit": 64}, False, {"n": 5}))
        return report

    def test_status_is_fail_when_any_record_fails(self):
        report = self._report()
        assert not report.passed
        assert [r.check for r in report.failures] == ["minimum"]
        assert report.to_dict()["status"] == "fail"

    def test_soft_records_never_fail_the_run(self):
        report = VerifyReport("bounds", seed=0)
        report.add(CheckRecord("clt_trend", {}, False, soft=True))
        assert report.passed
        assert report.to_dict()["records"][0]["soft"] is True

    def test_json_is_deterministic_without_timings(self):
        a, b = self._report(), self._report()
        b.records[0].seconds = 99.0
        assert a.to_json() == b.to_json()
        assert "seconds" not in a.to_json()

    def test_timings_on_request(self):
        data = json.loads(self._report().to_json(timings=True))
        assert data["records"][0]["seconds"] == 1.25

    def test_constants_are_rendered(self):
        report = VerifyReport("fluctuation", seed=0, constants={"C": 0.25, "exact": Fraction(1, 3)})
        data = json.loads(report.to_json())
        assert data["constants"] == {"C": "0.25", "exact": "1/3"}

    def test_json_ends_with_newline_and_sorts_keys(self):
        text = self._report().to_json()
        assert text.endswith("\n")
        assert list(json.loads(text)) == sorted(json.loads(text))
