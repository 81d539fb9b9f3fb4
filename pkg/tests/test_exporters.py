"""
Tests for exporters.
"""

import json

import pytest

from containerlab.core.enumeration import count_intersecting, maximal_profile
from containerlab.exporters import CsvExporter, JsonExporter, TextExporter, get_exporter, normalize
from containerlab.models.reports import CheckResult, RunInfo, VerificationSummary
from containerlab.utils.colors import strip_colors


@pytest.fixture
def count_report():
    return count_intersecting(5, 2, include_profile=True)


@pytest.fixture
def summary():
    return VerificationSummary(
        tier="quick",
        checks=[
            CheckResult(name="exact_counts", passed=True, detail={"totals": {"4,2": "27"}}),
            CheckResult(name="cover_lemma", passed=False, detail={"max_ratio": 1.5}),
        ],
        run=RunInfo(wall_time=0.5, workers=2),
    )


class TestNormalize:
    """Tests for real-number normalisation."""

    def test_rounds_reals(self):
        assert normalize({"x": 1 / 3}) == {"x": 0.333333333333}

    def test_infinity(self):
        assert normalize([float("inf")]) == ["inf"]

    def test_leaves_other_values(self):
        assert normalize({"a": True, "b": None, "c": "7", 4: 2}) == {"a": True, "b": None, "c": "7", "4": 2}


class TestJsonExporter:
    """Tests for JSON export."""

    def test_export_json(self, count_report):
        data = json.loads(JsonExporter().export(count_report))
        assert data["report"] == "count"
        assert data["total"] == "76"
        assert data["maximal_profile"] == {"1": "10"}
        assert data["passed"] is True

    def test_run_block_optional(self, count_report):
        assert "run" not in json.loads(JsonExporter().export(count_report))
        data = json.loads(JsonExporter(include_run=True).export(count_report))
        assert data["run"]["workers"] == 1

    def test_byte_identical(self):
        first = JsonExporter().export(count_intersecting(5, 2, workers=1))
        second = JsonExporter().export(count_intersecting(5, 2, workers=4))
        assert first == second

    def test_export_compact(self, count_report):
        exporter = JsonExporter()
        compact = exporter.export_compact(count_report)
        assert "\n" not in compact.strip()
        assert exporter.indent == 2

    def test_export_to_file(self, count_report, temp_dir):
        path = JsonExporter().export_to_file(count_report, temp_dir / "out")
        assert path.suffix == ".json"
        assert json.loads(path.read_text())["total"] == "76"


class TestCsvExporter:
    """Tests for CSV export."""

    def test_histogram_rows(self):
        output = CsvExporter().export(maximal_profile(5, 2))
        assert output.splitlines() == ["ell,count", "1,10"]

    def test_summary_rows(self, summary):
        lines = CsvExporter().export(summary).splitlines()
        assert lines[0] == "check,passed"
        assert lines[2] == "cover_lemma,False"


class TestTextExporter:
    """Tests for text export."""

    def test_export_text(self, count_report):
        output = TextExporter(use_colors=False).export(count_report)
        assert "containerlab count" in output
        assert "total: 76" in output
        assert output.rstrip().endswith("result: PASS")

    def test_summary_table(self, summary):
        output = TextExporter(use_colors=False).export(summary)
        assert "exact_counts" in output
        assert "50.0%" in output
        assert "result: FAIL" in output

    def test_export_with_colors(self, count_report):
        output = TextExporter(use_colors=True).export(count_report)
        assert "\033[" in output

    def test_export_without_colors(self, count_report):
        assert "\033[" not in TextExporter(use_colors=False).export(count_report)


class TestGetExporter:
    """Tests for get_exporter function."""

    def test_get_exporters(self):
        assert isinstance(get_exporter("json"), JsonExporter)
        assert isinstance(get_exporter("CSV"), CsvExporter)
        assert isinstance(get_exporter("text"), TextExporter)

    def test_invalid_format(self):
        with pytest.raises(ValueError):
            get_exporter("html")


class TestTextOutput:
    """Tests for the run block and file output of text reports."""

    def test_wall_time_is_readable(self, summary):
        output = TextExporter(use_colors=True, include_run=True).export(summary)
        plain = strip_colors(output)
        assert "wall_time: 500ms" in plain
        assert "workers: 2" in plain

    def test_file_output_has_no_colors(self, count_report, temp_dir):
        path = TextExporter(use_colors=True).export_to_file(count_report, temp_dir / "report")
        assert path.suffix == ".txt"
        content = path.read_text()
        assert "\033[" not in content
        assert "result: PASS" in content
