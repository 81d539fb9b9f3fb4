"""
Plain text exporter for containerlab.

Produces a readable report for terminal display.
"""

from __future__ import annotations

import json
from typing import Any

from containerlab.exporters.base import Exporter, ExportFormat
from containerlab.models.reports import Report, VerificationSummary
from containerlab.utils.colors import Colors, colorize, strip_colors, verdict
from containerlab.utils.formatting import create_progress_bar, create_table, format_duration


class TextExporter(Exporter):
    """Exports reports as an indented key/value listing."""

    def __init__(self, use_colors: bool = True, width: int = 70, include_run: bool = False):
        """
        Initialize the text exporter.

        Args:
            use_colors: Whether to include ANSI color codes
            width: Width of the header rule
            include_run: Show wall time and workers
        """
        super().__init__(include_run=include_run)
        self.use_colors = use_colors
        self.width = width

    @property
    def format(self) -> ExportFormat:
        return ExportFormat.TEXT

    @property
    def file_extension(self) -> str:
        return "txt"

    def export_for_file(self, report: Report) -> str:
        """Files never carry ANSI codes."""
        return strip_colors(self.export(report))

    def _header(self, text: str) -> str:
        line = "=" * self.width
        return "\n".join([
            colorize(line, Colors.CYAN, enabled=self.use_colors),
            colorize(text.center(self.width), Colors.CYAN, bold=True, enabled=self.use_colors),
            colorize(line, Colors.CYAN, enabled=self.use_colors),
        ])

    def _lines(self, data: dict[str, Any], depth: int = 0) -> list[str]:
        pad = "  " * depth
        lines = []
        for key, value in data.items():
            if isinstance(value, dict) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(self._lines(value, depth + 1))
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{pad}{key}: {len(value)} entries")
            else:
                shown = json.dumps(value) if isinstance(value, (list, dict)) else value
                lines.append(f"{pad}{key}: {shown}")
        return lines

    def export(self, report: Report) -> str:
        body = self.body(report)
        passed = body.pop("passed")
        title = str(body.pop("report"))
        run = body.get("run")
        if isinstance(run, dict) and isinstance(run.get("wall_time"), float):
            run["wall_time"] = format_duration(run["wall_time"])

        lines = [self._header(f"containerlab {title}")]
        if isinstance(report, VerificationSummary):
            body.pop("checks", None)
            lines.extend(self._lines(body))
            lines.append("")
            rows = [
                [check.name, verdict(check.passed, enabled=self.use_colors)]
                for check in report.checks
            ]
            lines.append(create_table(["check", "result"], rows))
            good = len(report.checks) - len(report.failures)
            lines.append("")
            lines.append(create_progress_bar(good, len(report.checks)))
        else:
            lines.extend(self._lines(body))
        lines.append("")
        lines.append(f"result: {verdict(passed, enabled=self.use_colors)}")
        return "\n".join(lines) + "\n"
