"""
Tests for the acceptance suite.
"""

from dataclasses import replace

import pytest

from containerlab.core import containers, verifier
from containerlab.core.verifier import DeskVerifier, container_test_graphs
from containerlab.errors import ConvergenceError


class TestDeskVerifier:
    """Tests for verify-all on the quick tier."""

    def test_quick_tier_passes(self, small_config):
        summary = DeskVerifier(config=small_config, tier="quick", workers=2).run()
        assert [check.name for check in summary.checks] == [
            "exact_counts",
            "oracle_equivalence",
            "phi_correctness",
            "isoperimetry",
            "container_soundness",
            "container_counting",
            "cover_lemma",
            "partition_identity",
            "structural_bounds",
            "combinatorics_identities",
            "determinism",
        ]
        assert summary.failures == []
        assert summary.passed

    def test_progress_callback(self, small_config):
        seen = []
        verifier = DeskVerifier(
            config=small_config,
            tier="quick",
            progress_callback=lambda name, i, total: seen.append((name, i, total)),
        )
        verifier.run()
        assert seen[0] == ("exact_counts", 1, 11)
        assert seen[-1][1] == 11

    def test_unknown_tier(self):
        with pytest.raises(ValueError):
            DeskVerifier(tier="overnight")

    def test_test_graphs(self):
        assert len(container_test_graphs("quick")) == 3
        assert [g.name for g in container_test_graphs("desk")][-1] == "H(6,2,2)"


class TestContainerChecks:
    """Tests for how container failures reach the summary."""

    def test_exhausted_T0_search_is_recorded(self, small_config, monkeypatch):
        def no_T0(graph, A, params, stats=None, max_exhaustive=0):
            raise ConvergenceError("no T0 found", {"attempts": params.retry_cap})

        small_config.containers.retry_cap = 1
        monkeypatch.setattr(containers, "find_T0", no_T0)
        summary = DeskVerifier(config=small_config, tier="quick").run()
        assert len(summary.checks) == 11
        soundness = next(c for c in summary.checks if c.name == "container_soundness")
        assert not soundness.passed
        assert soundness.detail["witness"] == {"attempts": 1}
        assert not summary.passed

    def test_uncertified_sets_fail_soundness(self, small_config, monkeypatch):
        real = verifier.container_family

        def short(*args, **kwargs):
            report = real(*args, **kwargs)
            return replace(report, certified=max(0, report.sets - 1))

        monkeypatch.setattr(verifier, "container_family", short)
        passed, detail = DeskVerifier(config=small_config, tier="quick").check_container_soundness()
        assert not passed
        assert "sets certified" in detail["violations"][0]["problems"][0]

    def test_soundness_counts_certified_sets(self, small_config):
        passed, detail = DeskVerifier(config=small_config, tier="quick").check_container_soundness()
        assert passed
        assert detail["violations"] == []
        assert int(detail["sets_certified"]) > 0
