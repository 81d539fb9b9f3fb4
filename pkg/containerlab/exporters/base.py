"""
Base exporter class for containerlab reports.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import Any

from containerlab.models.reports import Report
from containerlab.utils.formatting import format_real


class ExportFormat(Enum):
    """Supported export formats."""
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


def normalize(value: Any) -> Any:
    """Round every real inside a report body; containers keep their order."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, dict):
        return {str(key): normalize(inner) for key, inner in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(inner) for inner in value]
    return value


class Exporter(ABC):
    """
    Abstract base class for exporters.

    Each exporter turns a report into its format. The ``run`` block (wall
    time, workers) is only included when ``include_run`` is set.
    """

    def __init__(self, include_run: bool = False):
        self.include_run = include_run

    @property
    @abstractmethod
    def format(self) -> ExportFormat:
        """Return the export format."""
        pass

    @property
    @abstractmethod
    def file_extension(self) -> str:
        """Return the file extension for this format."""
        pass

    @abstractmethod
    def export(self, report: Report) -> str:
        """
        Export a report to string.

        Args:
            report: Report to export

        Returns:
            Formatted string representation
        """
        pass

    def body(self, report: Report) -> dict[str, Any]:
        return normalize(report.to_dict(include_run=self.include_run))

    def export_for_file(self, report: Report) -> str:
        return self.export(report)

    def export_to_file(self, report: Report, output_path: str | Path) -> Path:
        """
        Export a report to a file.

        Args:
            report: Report to export
            output_path: Path to output file

        Returns:
            Path to the created file
        """
        output_path = Path(output_path)

        if not output_path.suffix:
            output_path = output_path.with_suffix(f".{self.file_extension}")

        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, "w", encoding="utf-8", newline="") as f:
            f.write(self.export_for_file(report))

        return output_path
