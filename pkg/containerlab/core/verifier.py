"""
The desk-scale acceptance suite behind ``verify-all``.

Each check recomputes a known identity or inequality exhaustively and records
pass/fail with the numbers it compared. Property violations and exhausted
searches raised inside a check are recorded with their witness; cap refusals
propagate.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from typing import Any

import numpy as np

from containerlab.config.default import Config
from containerlab.core.combinatorics import compositions, iter_compositions
from containerlab.core.containers import (
    container_family,
    greedy_cover,
    is_phi_approximation,
    linked_profiles,
    m_phi,
    psi_violations,
)
from containerlab.core.enumeration import (
    count_intersecting,
    maximal_profile,
    phi_images_report,
    raw_count_intersecting,
    verify_C_partition,
)
from containerlab.core.isoperimetry import verify_isoperimetry
from containerlab.core.layer_graph import (
    BiregularGraph,
    ContainmentGraph,
    EdgeListGraph,
    LayerGraphParams,
    Side,
    biregular_check,
    complete_bipartite,
    count_linked_subsets,
    cycle_graph,
    d_bounds,
)
from containerlab.errors import ConvergenceError, PropertyViolation
from containerlab.exporters.json_export import JsonExporter
from containerlab.models.certificate import ContainerFamilyReport
from containerlab.models.reports import CheckResult, RunInfo, VerificationSummary

logger = logging.getLogger(__name__)

TIERS = ("desk", "quick")

COVER_INSTANCES = 100


def container_test_graphs(tier: str = "desk") -> list[BiregularGraph]:
    """The 6-cycle, K3,3, H(5,2,1) and, on the desk tier, H(6,2,2)."""
    graphs: list[BiregularGraph] = [
        cycle_graph(6),
        complete_bipartite(3, 3),
        ContainmentGraph(LayerGraphParams(5, 2, 1)),
    ]
    if tier == "desk":
        graphs.append(ContainmentGraph(LayerGraphParams(6, 2, 2)))
    return graphs


def random_cover_instance(rng: np.random.Generator) -> EdgeListGraph:
    """A random bipartite graph in which every X-vertex has a neighbour."""
    x_count = int(rng.integers(1, 13))
    y_count = int(rng.integers(1, 13))
    edges = []
    for x in range(x_count):
        row = rng.random(y_count) < 0.35
        if not row.any():
            row[int(rng.integers(0, y_count))] = True
        edges.extend((x, int(y)) for y in np.flatnonzero(row))
    return EdgeListGraph(x_count, y_count, edges, name="random")


class DeskVerifier:
    """
    Runs the acceptance checks.

    Reports are compared through their JSON serialisation, so the
    determinism check sees exactly what the CLI would emit.
    """

    def __init__(
        self,
        config: Config | None = None,
        tier: str = "desk",
        workers: int = 1,
        seed: int = 0,
        progress_callback: Callable[[str, int, int], None] | None = None,
    ):
        """
        Initialize the verifier.

        Args:
            config: Caps and container defaults (defaults if None)
            tier: ``desk`` runs everything, ``quick`` skips the slowest cases
            workers: Worker count for counting, isoperimetry and container runs
            seed: Base seed of the random cover instances
            progress_callback: Called as (check name, index, total) before each check

        Raises:
            ValueError: On an unknown tier
        """
        if tier not in TIERS:
            raise ValueError(f"unknown tier {tier!r}; expected one of {', '.join(TIERS)}")
        self.config = config or Config()
        self.tier = tier
        self.workers = workers
        self.seed = seed
        self.progress_callback = progress_callback
        self._sweeps: list[ContainerFamilyReport] | None = None
        self._graphs: dict[str, BiregularGraph] = {}

    @property
    def desk(self) -> bool:
        return self.tier == "desk"

    def checks(self) -> list[tuple[str, Callable[[], tuple[bool, dict[str, Any]]]]]:
        return [
            ("exact_counts", self.check_exact_counts),
            ("oracle_equivalence", self.check_oracle_equivalence),
            ("phi_correctness", self.check_phi),
            ("isoperimetry", self.check_isoperimetry),
            ("container_soundness", self.check_container_soundness),
            ("container_counting", self.check_container_counting),
            ("cover_lemma", self.check_cover_lemma),
            ("partition_identity", self.check_partition),
            ("structural_bounds", self.check_structural),
            ("combinatorics_identities", self.check_combinatorics),
            ("determinism", self.check_determinism),
        ]

    def run(self) -> VerificationSummary:
        start = time.time()
        summary = VerificationSummary(tier=self.tier)
        checks = self.checks()
        for index, (name, check) in enumerate(checks, 1):
            if self.progress_callback:
                self.progress_callback(name, index, len(checks))
            began = time.time()
            try:
                passed, detail = check()
            except (PropertyViolation, ConvergenceError) as e:
                passed, detail = False, {"error": str(e), "witness": e.witness}
            result = CheckResult(name=name, passed=passed, detail=detail, seconds=time.time() - began)
            if not passed:
                logger.warning("check %s failed: %s", name, detail)
            summary.checks.append(result)
        summary.run = RunInfo(wall_time=time.time() - start, workers=self.workers)
        return summary

    def _count(self, n: int, k: int, workers: int | None = None) -> int:
        report = count_intersecting(
            n,
            k,
            workers=self.workers if workers is None else workers,
            split_depth=self.config.settings.split_depth,
            max_vertices=self.config.caps.max_family_vertices,
        )
        return report.total

    def check_exact_counts(self) -> tuple[bool, dict[str, Any]]:
        expected = {(4, 2): 27}
        if self.desk:
            expected[(6, 3)] = 59049
        got = {f"{n},{k}": str(self._count(n, k)) for n, k in expected}
        passed = all(got[f"{n},{k}"] == str(value) for (n, k), value in expected.items())
        return passed, {"totals": got}

    def check_oracle_equivalence(self) -> tuple[bool, dict[str, Any]]:
        detail: dict[str, Any] = {}
        passed = True
        for n, k in [(4, 2), (5, 2), (6, 2)]:
            fast = count_intersecting(n, k, workers=self.workers, max_vertices=self.config.caps.max_family_vertices)
            raw = raw_count_intersecting(n, k, max_vertices=self.config.caps.max_raw_vertices)
            same = (fast.total, fast.trivial, fast.nontrivial) == (raw.total, raw.trivial, raw.nontrivial)
            passed &= same
            detail[f"{n},{k}"] = {"total": str(raw.total), "nontrivial": str(raw.nontrivial), "agree": same}
        passed &= detail["5,2"]["total"] == "76" and detail["5,2"]["nontrivial"] == "10"
        passed &= detail["6,2"]["nontrivial"] == "20"
        return passed, detail

    def check_phi(self) -> tuple[bool, dict[str, Any]]:
        detail = {}
        passed = True
        for n, k in [(4, 2), (5, 2), (6, 2)]:
            stats = phi_images_report(n, k, max_vertices=self.config.caps.max_raw_vertices)
            passed &= stats["collisions"] == stats["dependent"] == stats["size_mismatch"] == stats["unrestored"] == 0
            detail[f"{n},{k}"] = stats
        return passed, detail

    def check_isoperimetry(self) -> tuple[bool, dict[str, Any]]:
        runs = [(LayerGraphParams(5, 2, 1), "exhaustive"), (LayerGraphParams(6, 2, 2), "colex")]
        if self.desk:
            runs.append((LayerGraphParams(7, 2, 3), "colex"))
        detail = {}
        passed = True
        for params, mode in runs:
            report = verify_isoperimetry(
                params, mode=mode, workers=self.workers, max_exhaustive=self.config.caps.max_exhaustive_subsets
            )
            passed &= report.passed
            detail[f"{params.label()} {mode}"] = {"sizes": report.sizes_checked, "witness": report.witness}
        return passed, detail

    def _container_sweeps(self) -> list[ContainerFamilyReport]:
        """Container families for every feasible (a, g), graph and seed; computed once."""
        if self._sweeps is not None:
            return self._sweeps
        caps = self.config.caps
        sweeps = []
        for graph in container_test_graphs(self.tier):
            self._graphs[graph.name] = graph
            m = m_phi(graph, self.config.containers.phi, caps.max_m_phi_degree)
            profiles = linked_profiles(graph, caps.max_container_side)
            for seed in self.config.containers.seeds:
                params = self.config.containers.params(seed)
                for (a, g), members in profiles.items():
                    sweeps.append(container_family(
                        graph, a, g, params, m_phi_value=m, workers=self.workers, members=members,
                        max_exhaustive=caps.max_exhaustive_t0,
                    ))
        self._sweeps = sweeps
        return sweeps

    def check_container_soundness(self) -> tuple[bool, dict[str, Any]]:
        sweeps = self._container_sweeps()
        failed = []
        for report in sweeps:
            graph = self._graphs[report.graph]
            problems = []
            if report.certified != report.sets:
                problems.append(f"{report.certified} of {report.sets} sets certified")
            for cert in report.certificates:
                problems.extend(psi_violations(graph, cert.A, cert.S, cert.F, report.params.psi))
                approx = cert.phi_approx
                if approx is not None and not is_phi_approximation(graph, cert.A, approx.f_prime, report.params.phi):
                    problems.append("F' is not a phi-approximation")
            if problems:
                failed.append({
                    "graph": report.graph,
                    "a": report.a,
                    "g": report.g,
                    "seed": report.params.seed,
                    "problems": problems,
                })
        detail = {
            "families": len(sweeps),
            "sets_certified": sum(report.certified for report in sweeps),
            "violations": failed,
        }
        return not failed, detail

    def check_container_counting(self) -> tuple[bool, dict[str, Any]]:
        failed = [
            {"graph": r.graph, "a": r.a, "g": r.g, "seed": r.params.seed, "distinct": r.distinct}
            for r in self._container_sweeps()
            if not r.passed
        ]
        return not failed, {"violations": failed}

    def check_cover_lemma(self) -> tuple[bool, dict[str, Any]]:
        hand = [
            (complete_bipartite(3, 3), 0),
            (complete_bipartite(3, 3), None),
            (EdgeListGraph(4, 4, [(i, i) for i in range(4)], name="matching"), None),
        ]
        for graph, targets in hand:
            full = graph.full(Side.X) if targets is None else targets
            greedy_cover(graph, full, graph.full(Side.Y))

        rng = np.random.default_rng(self.seed)
        worst = 0.0
        for _ in range(COVER_INSTANCES):
            graph = random_cover_instance(rng)
            result = greedy_cover(graph, graph.full(Side.X), graph.full(Side.Y))
            worst = max(worst, result.size / result.bound)
        return True, {"instances": COVER_INSTANCES + len(hand), "max_ratio": worst}

    def check_partition(self) -> tuple[bool, dict[str, Any]]:
        report = verify_C_partition(LayerGraphParams(5, 2, 1), max_vertices=self.config.caps.max_layer_vertices)
        return report.passed, {
            "groups": report.groups,
            "total": str(report.total),
            "oracle_total": str(report.oracle_total),
            "mismatches": len(report.mismatches),
        }

    def check_structural(self) -> tuple[bool, dict[str, Any]]:
        cap = self.config.caps.max_family_vertices
        profiles = {(n, k): maximal_profile(n, k, max_vertices=cap) for n, k in [(4, 2), (5, 2), (6, 2)]}
        detail: dict[str, Any] = {
            f"{n},{k}": {
                "maximal": p.maximal_total,
                "max_nontrivial": p.max_nontrivial,
                "hilton_milner": p.hilton_milner,
                "bollobas": p.bollobas_holds,
                "covering": p.covering_holds,
            }
            for (n, k), p in profiles.items()
        }
        passed = all(p.passed for p in profiles.values())
        passed &= profiles[(4, 2)].maximal_total == 8 and profiles[(5, 2)].maximal_total == 15
        for key in [(5, 2), (6, 2)]:
            passed &= profiles[key].max_nontrivial == profiles[key].hilton_milner == 3
        return passed, detail

    def check_combinatorics(self) -> tuple[bool, dict[str, Any]]:
        passed = True
        for n in range(1, 13):
            passed &= compositions(n) == sum(1 for _ in iter_compositions(n))
            for b in range(1, n + 1):
                passed &= compositions(n, b) == sum(1 for _ in iter_compositions(n, b))

        graph = ContainmentGraph(LayerGraphParams(5, 2, 1))
        counts = {}
        for size in range(1, 5):
            for m in (1, 2):
                found = count_linked_subsets(graph, 0, size, m, self.config.caps.max_linked_subsets)
                counts[f"size={size},m={m}"] = found.count

        params = graph.params
        passed &= biregular_check(graph).ok and graph.degrees == (params.q, params.s)
        passed &= d_bounds(params.k, params.r).holds
        return passed, {"compositions_up_to": 12, "linked_subsets": counts}

    def check_determinism(self) -> tuple[bool, dict[str, Any]]:
        exporter = JsonExporter()
        outputs: dict[str, set[str]] = {"count": set(), "isoperimetry": set(), "containers": set()}
        graph = ContainmentGraph(LayerGraphParams(5, 2, 1))
        params = self.config.containers.params(self.seed)
        a, g = next(iter(linked_profiles(graph, self.config.caps.max_container_side)))
        for workers in (1, 2, 8):
            outputs["count"].add(exporter.export(count_intersecting(5, 2, workers=workers)))
            outputs["isoperimetry"].add(exporter.export(
                verify_isoperimetry(graph.params, mode="exhaustive", workers=workers)
            ))
            outputs["containers"].add(exporter.export(container_family(graph, a, g, params, workers=workers)))
        detail = {name: len(variants) for name, variants in outputs.items()}
        return all(count == 1 for count in detail.values()), {"distinct_outputs": detail}
