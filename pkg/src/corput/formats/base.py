"""
Base table format interface and registry.

Each format renders a header plus rows of already-canonical cells (strings and
ints). The registry resolves a format by name, then by the extension of the
output path, then falls back to csv.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any

Row = Sequence[Any]


class TableFormat(ABC):
    """Base class for table emitters."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Format name used by --format."""
        ...

    @property
    @abstractmethod
    def extensions(self) -> list[str]:
        """File extensions this format handles (e.g., ['.csv'])."""
        ...

    @abstractmethod
    def render(self, columns: Sequence[str], rows: Sequence[Row]) -> str:
        """Serialize the table; output ends with a newline."""
        ...

    @staticmethod
    def check_shape(columns: Sequence[str], rows: Sequence[Row]) -> None:
        for i, row in enumerate(rows):
            if len(row) != len(columns):
                raise ValueError(f"Row {i} has {len(row)} cells, expected {len(columns)}")


class FormatRegistry:
    """Registry of table formats with name and extension lookup."""

    def __init__(self):
        self._formats: list[TableFormat] = []
        self._by_extension: dict[str, TableFormat] = {}
        self._by_name: dict[str, TableFormat] = {}

    def register(self, fmt: TableFormat) -> None:
        self._formats.append(fmt)
        self._by_name[fmt.name] = fmt
        for ext in fmt.extensions:
            # First registered wins for extension conflicts
            if ext not in self._by_extension:
                self._by_extension[ext] = fmt

    def get_by_name(self, name: str) -> TableFormat | None:
        return self._by_name.get(name)

    def get_by_extension(self, ext: str) -> TableFormat | None:
        if not ext.startswith('.'):
            ext = '.' + ext
        return self._by_extension.get(ext.lower())

    def detect(self, name: str | None = None, filename: str | None = None) -> TableFormat:
        """
        Pick a format.

        Priority:
        1. Explicit name (unknown names are an error)
        2. Extension of the output path
        3. csv
        """
        if name:
            fmt = self.get_by_name(name)
            if fmt is None:
                raise ValueError(f"Unknown format: {name}. Use one of: {', '.join(self.names)}")
            return fmt
        if filename and '.' in filename:
            fmt = self.get_by_extension(filename.rsplit('.', 1)[-1])
            if fmt is not None:
                return fmt
        fallback = self.get_by_name("csv")
        if fallback is None:
            raise RuntimeError("No table format available")
        return fallback

    @property
    def names(self) -> list[str]:
        return [f.name for f in self._formats]


# Global registry instance
registry = FormatRegistry()
