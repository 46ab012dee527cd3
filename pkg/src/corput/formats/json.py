"""
JSON table format: a list of row objects keyed by column, sorted keys, indent 2.
"""

from __future__ import annotations

import json
from collections.abc import Sequence

from .base import Row, TableFormat, registry


class JSONFormat(TableFormat):

    @property
    def name(self) -> str:
        return "json"

    @property
    def extensions(self) -> list[str]:
        return [".json"]

    def render(self, columns: Sequence[str], rows: Sequence[Row]) -> str:
        self.check_shape(columns, rows)
        objects = [dict(zip(columns, row, strict=True)) for row in rows]
        return json.dumps(objects, sort_keys=True, indent=2) + "\n"


registry.register(JSONFormat())
