"""
Tests for biregular graphs and the containment graph.
"""

import pytest

from containerlab.core.combinatorics import mask_of
from containerlab.core.layer_graph import (
    ContainmentGraph,
    EdgeListGraph,
    LayerGraphParams,
    Side,
    biregular_check,
    count_linked_subsets,
    cycle_graph,
    d_bounds,
)
from containerlab.errors import CapExceededError, PropertyViolation


class TestLayerGraphParams:
    """Tests for H(n,k,r) parameters."""

    def test_degrees(self):
        params = LayerGraphParams(5, 2, 1)
        assert (params.q, params.s) == (2, 3)
        assert (params.top_size, params.bottom_size) == (6, 4)

    def test_larger_degrees(self):
        params = LayerGraphParams(6, 2, 2)
        assert (params.q, params.s) == (3, 6)
        assert params.top_size == 10

    def test_from_kr(self):
        assert LayerGraphParams.from_kr(3, 1) == LayerGraphParams(7, 3, 1)

    @pytest.mark.parametrize("k", [2, 3, 4])
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_edge_count_consistency(self, k, r):
        params = LayerGraphParams.from_kr(k, r)
        assert params.q * params.top_size == params.s * params.bottom_size
        graph = ContainmentGraph(params)
        assert biregular_check(graph).ok
        assert graph.degrees == (params.q, params.s)

    @pytest.mark.parametrize("n,k,r", [(6, 2, 1), (4, 1, 2), (4, 2, 0)])
    def test_invalid(self, n, k, r):
        with pytest.raises(ValueError):
            LayerGraphParams(n, k, r)


class TestContainmentGraph:
    """Tests for the containment graph between two layers."""

    def test_biregular(self, h521, h622):
        for graph in (h521, h622):
            report = biregular_check(graph)
            assert report.ok
            assert (report.q, report.s) == graph.degrees

    def test_adjacency_is_containment(self, h521):
        pair = h521.top_index(mask_of([2, 4]))
        neighbors = h521.x_neighbors(pair)
        expected = {h521.bottom_index(mask_of([2])), h521.bottom_index(mask_of([4]))}
        assert {i for i in range(h521.y_count) if neighbors >> i & 1} == expected

    def test_member_check(self, h521):
        with pytest.raises(ValueError):
            h521.top_index(mask_of([1, 2, 3]))

    def test_vertex_label(self, h521):
        assert h521.vertex_label(Side.X, 0) == "{1,2}"
        assert h521.vertex_label(Side.Y, 3) == "{4}"

    def test_closure_of_star_pairs(self, h521):
        # the pairs through 1 cover every singleton, so the closure is all of X
        star = h521.top_pattern([mask_of([1, 2]), mask_of([1, 3]), mask_of([1, 4])])
        assert h521.neighborhood(star).bit_count() == 4
        assert h521.closure(star) == h521.full(Side.X)


class TestClosure:
    """Closure laws, checked on every top subset of H(5,2,1)."""

    def test_extensive_and_idempotent(self, h521):
        for A in range(1 << h521.x_count):
            closed = h521.closure(A)
            assert A & ~closed == 0
            assert h521.closure(closed) == closed
            assert h521.neighborhood(closed) == h521.neighborhood(A)

    def test_monotone(self, h521):
        closures = [h521.closure(A) for A in range(1 << h521.x_count)]
        for A in range(1 << h521.x_count):
            B = A
            while B:
                assert closures[B] & ~closures[A] == 0
                B = (B - 1) & A


class TestEdgeListGraph:
    """Tests for explicit graphs and the edge-list format."""

    def test_cycle_structure(self, cycle6):
        assert cycle6.degrees == (2, 2)
        assert cycle6.x_neighbors(0) == 0b101
        assert cycle6.y_neighbors(0) == 0b011

    def test_closure_of_single_vertex(self, cycle6):
        assert cycle6.closure(0b001) == 0b001
        assert cycle6.closure(0b011) == 0b111

    def test_parse_round_trip(self, k33):
        parsed = EdgeListGraph.from_text(k33.to_text())
        assert sorted(parsed.edges()) == sorted(k33.edges())

    def test_parse_comments(self):
        graph = EdgeListGraph.from_text("# path\nX 2 Y 1\n0 0  # first\n1 0\n")
        assert graph.y_neighbors(0) == 0b11

    @pytest.mark.parametrize("text", ["", "X 2\n", "X 1 Y 1\n0\n", "X 1 Y 1\n0 3\n"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            EdgeListGraph.from_text(text)

    def test_from_file(self, temp_dir, cycle6):
        path = temp_dir / "c6.txt"
        path.write_text(cycle6.to_text())
        graph = EdgeListGraph.from_file(path)
        assert graph.name == "c6"
        assert graph.degrees == (2, 2)

    def test_cycle_length(self):
        with pytest.raises(ValueError):
            cycle_graph(5)


class TestBiregularCheck:
    """Tests for the degree scan."""

    def test_removed_edge_reported(self, k33):
        broken = k33.without_edge(1, 2)
        report = biregular_check(broken)
        assert not report.ok
        assert report.first_violation == (Side.X, 1, 2)
        assert (Side.Y, 2, 2) in report.violations

    def test_degrees_raise(self, k33):
        with pytest.raises(PropertyViolation):
            _ = k33.without_edge(0, 0).degrees


class TestLinkedness:
    """Tests for balls and linked components."""

    def test_ball_radius_two(self, cycle6):
        assert cycle6.ball(Side.X, 0, 2) == 0b111
        assert cycle6.ball(Side.X, 0, 1) == 0b001

    def test_components_of_matching(self):
        matching = EdgeListGraph(3, 3, [(0, 0), (1, 1), (2, 2)])
        assert matching.linked_components(0b111, Side.X, 2) == [0b001, 0b010, 0b100]
        assert not matching.is_linked(0b011)

    def test_empty_not_linked(self, cycle6):
        assert not cycle6.is_linked(0)

    def test_count_linked_subsets(self, cycle6):
        result = count_linked_subsets(cycle6, 0, 2, 1)
        assert result.count == 2
        assert result.holds

    def test_count_linked_cap(self, h622):
        with pytest.raises(CapExceededError):
            count_linked_subsets(h622, 0, 5, 1, max_candidates=10)


class TestDBounds:
    """Tests for the bounds on d."""

    @pytest.mark.parametrize("k,r", [(2, 1), (3, 2), (5, 3), (10, 4)])
    def test_sandwich(self, k, r):
        assert d_bounds(k, r).holds
