"""
JSON exporter for containerlab.

Keys keep insertion order, counts are decimal strings and reals carry 12
significant digits, so equal reports serialise to equal bytes.
"""

from __future__ import annotations

import json

from containerlab.exporters.base import Exporter, ExportFormat
from containerlab.models.reports import Report


class JsonExporter(Exporter):
    """Exports reports to JSON."""

    def __init__(self, indent: int | None = 2, include_run: bool = False):
        """
        Initialize the JSON exporter.

        Args:
            indent: JSON indentation level (None for compact)
            include_run: Emit the run block
        """
        super().__init__(include_run=include_run)
        self.indent: int | None = indent

    @property
    def format(self) -> ExportFormat:
        return ExportFormat.JSON

    @property
    def file_extension(self) -> str:
        return "json"

    def export(self, report: Report) -> str:
        return json.dumps(self.body(report), indent=self.indent, ensure_ascii=False) + "\n"

    def export_compact(self, report: Report) -> str:
        """Export to compact JSON (no indentation)."""
        original = self.indent
        self.indent = None
        output = self.export(report)
        self.indent = original
        return output
