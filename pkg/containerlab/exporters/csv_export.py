"""
CSV exporter for containerlab.

Histogram reports produce one row per key; everything else flattens to
``key,value`` rows.
"""

from __future__ import annotations

import csv
import io

from containerlab.exporters.base import Exporter, ExportFormat, normalize
from containerlab.models.reports import Report


class CsvExporter(Exporter):
    """Exports reports to CSV."""

    def __init__(self, delimiter: str = ",", include_headers: bool = True):
        """
        Initialize the CSV exporter.

        Args:
            delimiter: Field delimiter character
            include_headers: Include header row
        """
        super().__init__()
        self.delimiter = delimiter
        self.include_headers = include_headers

    @property
    def format(self) -> ExportFormat:
        return ExportFormat.CSV

    @property
    def file_extension(self) -> str:
        return "csv"

    def export(self, report: Report) -> str:
        output = io.StringIO()
        writer = csv.writer(output, delimiter=self.delimiter, lineterminator="\n")

        if self.include_headers:
            writer.writerow(report.csv_headers())

        for row in report.csv_rows():
            writer.writerow(normalize(row))

        return output.getvalue()
