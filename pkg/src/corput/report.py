"""
Verification outcomes.

Verdict is what every check_* function returns: truthy on pass, falsy on
failure, with the first witness attached. The suite layer wraps verdicts into
CheckRecords and collects them in a VerifyReport, whose JSON form is
deterministic (sorted keys, no timings unless asked for).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .numerics import Dyadic, format_float, format_rational


def render(value: Any) -> Any:
    """Canonical JSON-safe form of an exact or float value."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Dyadic):
        return str(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, int | str):
        return value
    if isinstance(value, tuple | list):
        return [render(v) for v in value]
    return str(value)


@dataclass(frozen=True, slots=True)
class Verdict:
    """Pass/fail of one check, with the first counterexample on failure."""
    passed: bool
    witness: dict[str, Any] | None = None

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls) -> Verdict:
        return cls(True)

    @classmethod
    def fail(cls, **witness: Any) -> Verdict:
        return cls(False, {k: render(v) for k, v in witness.items()})

    @classmethod
    def of(cls, passed: bool, **witness: Any) -> Verdict:
        return cls.ok() if passed else cls.fail(**witness)


@dataclass
class CheckRecord:
    """One executed check inside a suite."""
    check: str
    params: dict[str, Any]
    passed: bool
    witness: dict[str, Any] | None = None
    seconds: float = 0.0
    note: str | None = None
    soft: bool = False  # diagnostic: reported, never fails the run

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {
            "check": self.check,
            "params": {k: render(v) for k, v in self.params.items()},
            "passed": self.passed,
        }
        if self.witness is not None:
            data["witness"] = self.witness
        if self.note:
            data["note"] = self.note
        if self.soft:
            data["soft"] = True
        if timings:
            data["seconds"] = round(self.seconds, 3)
        return data


@dataclass
class VerifyReport:
    """All records of one `verify` run."""
    suite: str
    seed: int
    records: list[CheckRecord] = field(default_factory=list)
    constants: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed or r.soft for r in self.records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not (r.passed or r.soft)]

    def add(self, record: CheckRecord) -> None:
        self.records.append(record)

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "status": "pass" if self.passed else "fail",
            "constants": {k: render(v) for k, v in self.constants.items()},
            "records": [r.to_dict(timings) for r in self.records],
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True, indent=2) + "\n"
