"""
Export formats for containerlab reports.

Supports JSON, CSV and text output.
"""

from __future__ import annotations

from containerlab.exporters.base import Exporter, ExportFormat, normalize
from containerlab.exporters.csv_export import CsvExporter
from containerlab.exporters.json_export import JsonExporter
from containerlab.exporters.text import TextExporter

__all__ = [
    "Exporter",
    "ExportFormat",
    "TextExporter",
    "JsonExporter",
    "CsvExporter",
    "get_exporter",
    "normalize",
]


def get_exporter(format: str, include_run: bool = False, use_colors: bool = False) -> Exporter:
    """
    Get an exporter instance by format name.

    Args:
        format: Format name (json, csv, text)
        include_run: Emit wall time and worker count
        use_colors: Color the text report

    Returns:
        Exporter instance

    Raises:
        ValueError: If format is not supported
    """
    format_lower = format.lower()
    if format_lower == "json":
        return JsonExporter(include_run=include_run)
    if format_lower == "csv":
        return CsvExporter()
    if format_lower == "text":
        return TextExporter(use_colors=use_colors, include_run=include_run)
    raise ValueError(
        f"Unsupported format: {format}. Supported formats: json, csv, text"
    )
