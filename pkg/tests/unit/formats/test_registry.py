"""
Unit tests for format lookup.
"""

import pytest

from corput.formats import csv as _csv  # noqa: F401
from corput.formats import json as _json  # noqa: F401
from corput.formats.base import FormatRegistry, registry
from corput.formats.csv import CSVFormat


class TestDetect:
    def test_explicit_name_wins(self):
        assert registry.detect("json", "out.csv").name == "json"

    def test_extension(self):
        assert registry.detect(None, "values.JSON").name == "json"
        assert registry.detect(None, "values.csv").name == "csv"

    def test_fallback_is_csv(self):
        assert registry.detect().name == "csv"
        assert registry.detect(None, "values.txt").name == "csv"
        assert registry.detect(None, "no_extension").name == "csv"

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="Unknown format: xml"):
            registry.detect("xml")

    def test_names(self):
        assert set(registry.names) >= {"csv", "json"}


class TestRegistry:
    def test_extension_without_dot(self):
        local = FormatRegistry()
        local.register(CSVFormat())
        assert local.get_by_extension("csv") is local.get_by_name("csv")

    def test_first_registration_keeps_extension(self):
        local = FormatRegistry()
        first, second = CSVFormat(), CSVFormat()
        local.register(first)
        local.register(second)
        assert local.get_by_extension(".csv") is first

    def test_empty_registry_has_no_fallback(self):
        with pytest.raises(RuntimeError):
            FormatRegistry().detect()
