"""
CSV table format: comma delimiter, header row, \\n line ends.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence

from .base import Row, TableFormat, registry


class CSVFormat(TableFormat):

    @property
    def name(self) -> str:
        return "csv"

    @property
    def extensions(self) -> list[str]:
        return [".csv"]

    def render(self, columns: Sequence[str], rows: Sequence[Row]) -> str:
        self.check_shape(columns, rows)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
        return buffer.getvalue()


registry.register(CSVFormat())
