"""
Tests for counting and enumerating intersecting families and independent sets.
"""

import pytest

from containerlab.core.enumeration import (
    DisjointnessGraph,
    IndependentSetCounter,
    closure_classifier,
    closure_profile,
    count_independent_sets_by_bottom,
    count_intersecting,
    enumerate_independent_sets,
    iter_intersecting_families,
    maximal_families,
    maximal_profile,
    phi_images_report,
    raw_count_intersecting,
    removal_probe,
    verify_C_partition,
)
from containerlab.core.combinatorics import mask_of
from containerlab.core.families import is_intersecting, is_maximal
from containerlab.core.layer_graph import LayerGraphParams
from containerlab.errors import CapExceededError


class TestIndependentSetCounter:
    """Tests for branch-and-count."""

    def test_path(self):
        # path 0 - 1 - 2: {}, {0}, {1}, {2}, {0, 2}
        counter = IndependentSetCounter([0b010, 0b101, 0b010])
        assert counter.count(0b111) == 5

    def test_components_multiply(self):
        counter = IndependentSetCounter([0b10, 0b01, 0b0])
        assert counter.components(0b111) == [0b011, 0b100]
        assert counter.count(0b111) == 3 * 2

    def test_tasks_partition_the_count(self):
        graph = DisjointnessGraph.build(5, 2)
        counter = IndependentSetCounter(graph.adjacency)
        full = (1 << graph.size) - 1
        for depth in range(0, 5):
            assert sum(counter.count(m) for m in counter.tasks(full, depth)) == counter.count(full)

    def test_parallel_matches_serial(self):
        graph = DisjointnessGraph.build(5, 2)
        full = (1 << graph.size) - 1
        serial = IndependentSetCounter(graph.adjacency).count(full)
        assert IndependentSetCounter(graph.adjacency).count_parallel(full, workers=2, depth=3) == serial


class TestCountIntersecting:
    """Tests for the intersecting-family counts."""

    @pytest.mark.parametrize(
        "n,k,total,trivial",
        [(4, 2, 27, 23), (5, 2, 76, 66)],
    )
    def test_known_counts(self, n, k, total, trivial):
        report = count_intersecting(n, k)
        assert report.total == total
        assert report.trivial == trivial
        assert report.nontrivial == total - trivial
        assert report.passed

    def test_six_two_nontrivial(self):
        assert count_intersecting(6, 2).nontrivial == 20

    def test_six_three(self):
        assert count_intersecting(6, 3, workers=4).total == 59049

    def test_worker_independence(self):
        counts = {count_intersecting(5, 2, workers=w, split_depth=3).total for w in (1, 2, 8)}
        assert counts == {76}

    def test_raw_agrees(self):
        for n, k in [(4, 2), (5, 2), (6, 2)]:
            raw = raw_count_intersecting(n, k)
            fast = count_intersecting(n, k)
            assert (raw.total, raw.trivial) == (fast.total, fast.trivial)
            assert raw.method == "raw"

    def test_cap(self):
        with pytest.raises(CapExceededError):
            count_intersecting(8, 3)
        with pytest.raises(CapExceededError):
            raw_count_intersecting(6, 3, max_vertices=10)

    def test_profile(self):
        report = count_intersecting(5, 2, include_profile=True)
        assert report.maximal_profile == {1: 10}


class TestFamilyIteration:
    """Tests for direct iteration and maximal families."""

    def test_iteration_count(self):
        families = list(iter_intersecting_families(4, 2))
        assert len(families) == 27
        assert len(families[0]) == 0
        assert all(is_intersecting(f) for f in families)

    def test_maximal_counts(self):
        assert len(maximal_families(4, 2)) == 8
        assert len(maximal_families(5, 2)) == 15

    def test_maximal_families_are_maximal(self):
        assert all(is_maximal(f) for f in maximal_families(5, 2))

    def test_maximal_profile(self):
        report = maximal_profile(5, 2)
        assert report.maximal_total == 15
        assert report.trivial_maximal == 5
        assert report.profile == {1: 10}
        assert report.max_nontrivial == 3
        assert report.hilton_milner == 3
        assert report.nontrivial_count == 10
        assert report.covering_sum == 80
        assert report.passed

    def test_maximal_profile_at_2k(self):
        report = maximal_profile(4, 2)
        assert report.hilton_milner is None
        assert report.nontrivial_count == 4


class TestProbes:
    """Tests for the removal and closure probes."""

    def test_removal_probe(self):
        report = removal_probe(5, 2)
        assert report.families == 76
        assert report.trivial_distance_ok
        assert report.max_constant is not None

    def test_closure_profile(self):
        report = closure_profile(5, 2)
        assert report.nontrivial == 10
        assert report.histogram == {1: 10}
        assert report.small == 10
        assert report.large == 0

    def test_closure_profile_needs_r(self):
        with pytest.raises(ValueError):
            closure_profile(4, 2)

    def test_classifier(self):
        classify = closure_classifier(LayerGraphParams(5, 2, 1))
        assert classify(0) == "empty"
        assert classify(1) == "small"
        assert classify(9) == "large"

    def test_phi_images(self):
        report = phi_images_report(5, 2)
        assert report["families"] == 75
        for key in ("collisions", "dependent", "size_mismatch", "unrestored"):
            assert report[key] == 0


class TestIndependentSetsOfH:
    """Tests for the independent sets of the containment graph."""

    def test_bottom_count(self):
        assert count_independent_sets_by_bottom(LayerGraphParams(5, 2, 1)) == 113

    def test_enumeration_matches(self):
        items = list(enumerate_independent_sets(LayerGraphParams(5, 2, 1)))
        assert len(items) == 113
        assert len({(i.top, i.bottom) for i in items}) == 113

    def test_empty_top_bucket(self):
        first = next(enumerate_independent_sets(LayerGraphParams(5, 2, 1)))
        assert first.top == 0 and first.bottom == 0
        assert first.bucket == "empty"
        assert first.components == ()

    def test_partition(self):
        report = verify_C_partition(LayerGraphParams(5, 2, 1))
        assert report.passed
        assert report.groups == 64
        assert report.total == report.oracle_total == 113

    def test_containers_per_g(self):
        report = verify_C_partition(LayerGraphParams(5, 2, 1))
        # 1 empty top, 6 single pairs, 16 pair sets inside a triple, the rest cover [4]
        assert report.containers_by_g == {0: 1, 2: 6, 3: 16, 4: 41}
        assert report.weighted_total == 113
        assert report.content()["containers_by_g"] == {"0": "1", "2": "6", "3": "16", "4": "41"}

    def test_single_pair_decomposition(self, h521):
        top = h521.top_pattern([mask_of([1, 2])])
        item = next(
            i for i in enumerate_independent_sets(LayerGraphParams(5, 2, 1)) if i.top == top and i.bottom == 0
        )
        assert item.components == (top,)
        assert item.component_stats == ((1, 2),)
        assert (item.a, item.g) == (1, 2)
        assert item.bucket == "small"
        assert item.container == (top, h521.bottom_pattern([mask_of([3]), mask_of([4])]))
        assert item.to_dict(h521)["components"] == [["{1,2}"]]

    def test_partition_cap(self):
        with pytest.raises(CapExceededError):
            verify_C_partition(LayerGraphParams(6, 2, 2), max_vertices=10)
