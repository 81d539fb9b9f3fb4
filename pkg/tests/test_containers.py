"""
Tests for the graph container algorithm.
"""

import math

import numpy as np
import pytest

from containerlab.core.containers import (
    certify,
    container_family,
    container_stats,
    find_T0,
    general_log_bound,
    greedy_cover,
    heavy_neighbors,
    is_phi_approximation,
    layer_log_bound,
    linked_profiles,
    lovasz_m_phi_lower,
    m_phi,
    phi_approximation,
    psi_approximation,
    psi_violations,
    theorem_bounds,
)
from containerlab.core.layer_graph import EdgeListGraph, LayerGraphParams, Side
from containerlab.core.verifier import random_cover_instance
from containerlab.errors import CapExceededError, ConvergenceError
from containerlab.models.certificate import ContainerParams, ContainerStats


class TestContainerParams:
    """Tests for parameter validation."""

    def test_defaults_fit_cycle(self, default_params):
        default_params.check(2, 2)

    @pytest.mark.parametrize(
        "params",
        [
            ContainerParams(phi=2),
            ContainerParams(psi=0),
            ContainerParams(big_c=0),
            ContainerParams(big_c=10.0),
            ContainerParams(retry_cap=0),
        ],
    )
    def test_rejected(self, params):
        with pytest.raises(ValueError):
            params.check(2, 2)

    def test_degree_too_small(self, default_params):
        with pytest.raises(ValueError):
            default_params.check(1, 3)

    def test_sampling_rate(self, default_params):
        assert default_params.sampling_rate(2) == pytest.approx(math.log(2) / 2)


class TestMPhi:
    """Tests for m_phi."""

    def test_cycle(self, cycle6):
        assert m_phi(cycle6, 1) == 3

    def test_complete(self, k33):
        assert m_phi(k33, 1) == 3

    def test_small_layer_graph(self, h521):
        # two pairs through a common point cover three singletons
        assert m_phi(h521, 1) == 3

    def test_domain(self, cycle6):
        with pytest.raises(ValueError):
            m_phi(cycle6, 2)

    def test_cap(self, h622):
        with pytest.raises(CapExceededError):
            m_phi(h622, 1, max_degree=5)

    def test_shadow_lower_bound(self, h622):
        params = LayerGraphParams(6, 2, 2)
        assert lovasz_m_phi_lower(params, 1) <= m_phi(h622, 1)


class TestGreedyCover:
    """Tests for the greedy cover and its size bound."""

    def test_complete_bipartite(self, k33):
        result = greedy_cover(k33, 0b111, 0b111)
        assert result.size == 1
        assert result.bound == pytest.approx(1 + math.log(3))

    def test_perfect_matching(self):
        matching = EdgeListGraph(3, 3, [(0, 0), (1, 1), (2, 2)])
        result = greedy_cover(matching, 0b111, 0b111)
        assert result.size == 3
        assert result.bound == pytest.approx(3.0)

    def test_empty_targets(self, k33):
        result = greedy_cover(k33, 0, 0b111)
        assert result.size == 0

    def test_lowest_index_on_ties(self, cycle6):
        assert greedy_cover(cycle6, 0b001, 0b101).cover == 0b001

    def test_stranded_target(self, cycle6):
        with pytest.raises(ValueError):
            greedy_cover(cycle6, 0b001, 0b010)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_instances_within_bound(self, seed):
        graph = random_cover_instance(np.random.default_rng(seed))
        targets = graph.full(Side.X)
        result = greedy_cover(graph, targets, graph.full(Side.Y))
        assert graph.neighborhood(result.cover, Side.Y) & targets == targets
        assert result.size <= result.bound + 1e-9


class TestPhiApproximation:
    """Tests for the first container stage."""

    def test_hand_trace(self, cycle6, default_params):
        approx = phi_approximation(cycle6, 0b001, default_params, t0=0)
        assert approx.t0 == 0
        assert approx.t0_prime == 0
        assert approx.t1 == 0b001
        assert approx.f_prime == 0b001
        assert approx.t0_method == "given"
        assert approx.stats.t == 2

    def test_sampled_is_valid(self, cycle6, default_params):
        approx = phi_approximation(cycle6, 0b001, default_params)
        assert is_phi_approximation(cycle6, 0b001, approx.f_prime, 1)

    def test_rejects_unlinked(self, cycle6, default_params):
        matching = EdgeListGraph(3, 3, [(0, 0), (1, 1), (2, 2)])
        with pytest.raises(ValueError):
            phi_approximation(matching, 0b011, default_params)
        with pytest.raises(ValueError):
            phi_approximation(cycle6, 0, default_params)

    def test_rejects_t0_outside(self, cycle6, default_params):
        with pytest.raises(ValueError):
            phi_approximation(cycle6, 0b001, default_params, t0=0b010)

    def test_find_t0_deterministic(self, cycle6, default_params):
        first = find_T0(cycle6, 0b001, default_params)
        again = find_T0(cycle6, 0b001, default_params)
        assert first == again
        assert first.t0 & ~cycle6.neighborhood(0b001) == 0

    def test_find_t0_exhausted(self, k33, default_params):
        # every draw and every subset fails once the bound is forced below zero
        stats = container_stats(k33, 0b001, default_params)
        starved = ContainerStats(a=stats.a, g=stats.g, q=3, s=3, m_phi=0, p=-1.0, phi=1)
        with pytest.raises(ConvergenceError):
            find_T0(k33, 0b001, default_params.with_seed(0), stats=starved, max_exhaustive=0)

    def test_heavy_neighbors(self, k33):
        assert heavy_neighbors(k33, 0b001, 1) == 0b111


class TestPsiApproximation:
    """Tests for the second container stage."""

    def test_hand_trace(self, cycle6, default_params):
        cert = psi_approximation(cycle6, 0b001, 0b001, default_params)
        assert cert.S == 0b011
        assert cert.F == 0b001
        assert cert.P1 == 0 and cert.P2 == 0
        assert psi_violations(cycle6, 0b001, cert.S, cert.F, 1) == []

    def test_rejects_bad_f_prime(self, cycle6, default_params):
        with pytest.raises(ValueError):
            psi_approximation(cycle6, 0b001, 0b010, default_params)

    def test_certify_hand_trace(self, cycle6, default_params):
        cert = certify(cycle6, 0b001, default_params, t0=0)
        assert cert.key() == (0b011, 0b001)
        data = cert.to_dict()
        assert data["S"] == [0, 1]
        assert data["F"] == [0]
        assert data["provenance"]["T1"] == [0]

    def test_violations_listed(self, cycle6):
        assert "S contains [A]" in psi_violations(cycle6, 0b001, 0, 0b001, 1)


class TestContainerFamily:
    """Tests for whole container families and their bounds."""

    def test_cycle_profiles(self, cycle6):
        profiles = linked_profiles(cycle6)
        assert sorted(profiles) == [(1, 2), (3, 3)]
        assert len(profiles[(1, 2)]) == 3
        assert len(profiles[(3, 3)]) == 4

    def test_profiles_cap(self, h622):
        with pytest.raises(CapExceededError):
            linked_profiles(h622, max_side=5)

    @pytest.mark.parametrize("graph_name", ["cycle6", "k33", "h521"])
    def test_families_pass(self, graph_name, request, default_params):
        graph = request.getfixturevalue(graph_name)
        for (a, g), members in linked_profiles(graph).items():
            report = container_family(graph, a, g, default_params, members=members)
            assert report.passed
            assert report.sets == len(members)
            assert 1 <= report.distinct <= report.sets

    def test_workers_do_not_change_result(self, h521, default_params):
        one = container_family(h521, 1, 2, default_params, workers=1)
        many = container_family(h521, 1, 2, default_params, workers=4)
        assert [c.key() for c in one.certificates] == [c.key() for c in many.certificates]

    def test_general_bound_rejects_negative_t(self):
        with pytest.raises(ValueError):
            general_log_bound(5, 1, 2, 2, 3, 3, 1, 1, 1.0)

    def test_general_bound_empty_neighbourhood(self):
        assert general_log_bound(0, 0, 2, 3, 4, 1, 1, 1, 1.0) == pytest.approx(math.log(4))


class TestTheoremBounds:
    """Tests for the closed-form container-count bounds."""

    def test_finite_logs(self):
        report = theorem_bounds(1, 2, 2, 1, 1, 1, 1.0)
        assert report.passed
        assert report.t == 2 * 3 - 1 * 2
        assert report.m_phi == 3

    def test_layer_bound_large_instance(self):
        value = layer_log_bound(8, 20, 8, 2, 1, 1, 1.0)
        assert math.isfinite(value)
        assert value > 0

    def test_shadow_fallback(self):
        report = theorem_bounds(1, 10, 3, 2, 1, 1, 1.0, max_degree=5)
        assert report.m_phi == lovasz_m_phi_lower(LayerGraphParams.from_kr(3, 2), 1)

    def test_domain(self):
        with pytest.raises(ValueError):
            theorem_bounds(1, 2, 2, 1, 5, 1, 1.0)

    def test_layer_parameter_point(self):
        d = 36
        phi, psi = d / 2, math.sqrt(d * math.log(d))
        report = theorem_bounds(1, 1, 8, 2, phi, psi, 1.0, m_phi_value=1)
        t = 10 / 8 * d - d
        ln_d = math.log(d)
        expected = math.log(math.comb(17, 7)) + 54 * (
            ln_d**2 / (phi * d)
            + t * ln_d**2 / (d * (d - phi))
            + t * ln_d**2 / (phi * d)
            + t * ln_d / ((d - phi) * psi)
            + t * ln_d / ((d - psi) * psi)
        )
        assert report.t == 45 - 36
        assert report.passed
        assert report.layer_log == pytest.approx(expected)
        assert report.layer > 0
