"""
Data models for the graph container pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any

from containerlab.core.combinatorics import bit_indices
from containerlab.models.reports import Report, RunInfo
from containerlab.utils.formatting import format_count


def indices(mask: int) -> list[int]:
    return list(bit_indices(mask))


@dataclass(frozen=True)
class ContainerParams:
    """
    Tuning of one container run.

    ``phi`` and ``psi`` are the approximation thresholds, ``big_c`` the
    constant in the sampling rate p = C ln q / (phi q).
    """
    phi: int = 1
    psi: int = 1
    big_c: float = 1.0
    seed: int = 0
    retry_cap: int = 1000

    def check(self, q: int, s: int) -> None:
        """
        Raises:
            ValueError: If any parameter is outside its domain for a (q, s)-biregular graph
        """
        if q < 2 or s < 2:
            raise ValueError(f"containers need q, s >= 2, got q={q}, s={s}")
        if not 1 <= self.phi <= s - 1:
            raise ValueError(f"phi must lie in [1, {s - 1}], got {self.phi}")
        if not 1 <= self.psi <= min(q, s) - 1:
            raise ValueError(f"psi must lie in [1, {min(q, s) - 1}], got {self.psi}")
        if self.big_c <= 0:
            raise ValueError(f"C must be positive, got {self.big_c}")
        if self.sampling_rate(q) >= 1:
            raise ValueError(
                f"C ln q / (phi q) must be below 1, got {self.sampling_rate(q):.6g}"
            )
        if self.retry_cap < 1:
            raise ValueError(f"retry cap must be positive, got {self.retry_cap}")

    def sampling_rate(self, q: int) -> float:
        return self.big_c * math.log(q) / (self.phi * q)

    def with_seed(self, seed: int) -> ContainerParams:
        return replace(self, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "phi": self.phi,
            "psi": self.psi,
            "big_c": self.big_c,
            "seed": self.seed,
            "retry_cap": self.retry_cap,
        }


@dataclass(frozen=True)
class ContainerStats:
    """Sizes around a 2-linked set A and the bound on |T| they imply."""
    a: int
    g: int
    q: int
    s: int
    m_phi: int
    p: float
    phi: int

    @property
    def t(self) -> int:
        """Edges from N(A) to X - [A]."""
        return self.g * self.s - self.a * self.q

    @property
    def t0_bound(self) -> float:
        return 3 * self.g * self.p

    @property
    def omega_bound(self) -> float:
        return 3 * self.t * self.p

    @property
    def t0_prime_bound(self) -> float:
        return 3 * self.g * math.exp(-self.p * self.m_phi)

    @property
    def t1_bound(self) -> float:
        return 3 * self.t * math.log(self.s) / (self.q * (self.s - self.phi))

    @property
    def t_bound(self) -> float:
        return self.t0_bound + self.t0_prime_bound + self.t1_bound

    def to_dict(self) -> dict[str, Any]:
        return {
            "a": self.a,
            "g": self.g,
            "t": self.t,
            "m_phi": self.m_phi,
            "p": self.p,
            "t_bound": self.t_bound,
        }


@dataclass(frozen=True)
class PhiApproximation:
    """F' with every intermediate set that produced it."""
    f_prime: int
    t0: int
    t0_prime: int
    t1: int
    omega: tuple[tuple[int, int], ...]
    stats: ContainerStats
    attempts: int = 0
    t0_method: str = "sampled"

    @property
    def link_set(self) -> int:
        """T = T0 + T0' + T1."""
        return self.t0 | self.t0_prime | self.t1

    def to_dict(self) -> dict[str, Any]:
        return {
            "F_prime": indices(self.f_prime),
            "T0": indices(self.t0),
            "T0_prime": indices(self.t0_prime),
            "T1": indices(self.t1),
            "Omega": [list(edge) for edge in self.omega],
            "T0_method": self.t0_method,
            "T0_attempts": self.attempts,
        }


@dataclass(frozen=True)
class Certificate:
    """A psi-approximation (S, F) of A with its provenance."""
    A: int
    S: int
    F: int
    P1: int
    P2: int
    params: ContainerParams
    phi_approx: PhiApproximation | None = None

    def key(self) -> tuple[int, int]:
        return (self.S, self.F)

    def to_dict(self) -> dict[str, Any]:
        provenance: dict[str, Any] = {"A": indices(self.A), "params": self.params.to_dict()}
        if self.phi_approx is not None:
            provenance["stats"] = self.phi_approx.stats.to_dict()
            provenance.update(self.phi_approx.to_dict())
        provenance["P1"] = indices(self.P1)
        provenance["P2"] = indices(self.P2)
        return {"S": indices(self.S), "F": indices(self.F), "provenance": provenance}


@dataclass
class ContainerFamilyReport(Report):
    """Certificates for every A in G(a, g) and the bound on their number."""
    graph: str
    a: int
    g: int
    params: ContainerParams
    sets: int
    certificates: list[Certificate] = field(default_factory=list)
    certified: int = 0
    log_bound: float = 0.0
    bound: float = 0.0
    m_phi: int = 0
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "containers"

    @property
    def distinct(self) -> int:
        return len(self.certificates)

    @property
    def passed(self) -> bool:
        return self.distinct == 0 or math.log(self.distinct) <= self.log_bound + 1e-9

    def content(self) -> dict[str, Any]:
        return {
            "graph": self.graph,
            "a": self.a,
            "g": self.g,
            "params": self.params.to_dict(),
            "m_phi": self.m_phi,
            "sets": format_count(self.sets),
            "certified": format_count(self.certified),
            "distinct_certificates": format_count(self.distinct),
            "log_bound": self.log_bound,
            "bound": self.bound,
            "certificates": [c.to_dict() for c in self.certificates],
        }

    def csv_headers(self) -> list[str]:
        return ["S", "F"]

    def csv_rows(self) -> list[list[Any]]:
        return [
            [" ".join(map(str, indices(c.S))), " ".join(map(str, indices(c.F)))]
            for c in self.certificates
        ]


@dataclass
class ContainerSweepReport(Report):
    """Container families for every feasible (a, g) on one graph and seed battery."""
    graph: str
    seeds: list[int]
    families: list[ContainerFamilyReport] = field(default_factory=list)
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "containers-sweep"

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    def content(self) -> dict[str, Any]:
        return {
            "graph": self.graph,
            "seeds": self.seeds,
            "profiles": len({(f.a, f.g) for f in self.families}),
            "sets": format_count(sum(f.sets for f in self.families)),
            "families": [
                {
                    "a": f.a,
                    "g": f.g,
                    "seed": f.params.seed,
                    "sets": format_count(f.sets),
                    "distinct": format_count(f.distinct),
                    "log_bound": f.log_bound,
                    "passed": f.passed,
                }
                for f in self.families
            ],
        }

    def csv_headers(self) -> list[str]:
        return ["a", "g", "seed", "sets", "distinct", "log_bound"]

    def csv_rows(self) -> list[list[Any]]:
        return [[f.a, f.g, f.params.seed, f.sets, f.distinct, f.log_bound] for f in self.families]


def exp_or_inf(log_value: float) -> float:
    """exp, saturating to infinity instead of overflowing."""
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf


@dataclass
class TheoremBounds(Report):
    """Both container-count bounds for H(2k+r, k, r), in log space and as values."""
    a: int
    g: int
    k: int
    r: int
    phi: float
    psi: float
    big_c: float
    t: int
    m_phi: int
    general_log: float
    layer_log: float
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "bounds"

    @property
    def general(self) -> float:
        return exp_or_inf(self.general_log)

    @property
    def layer(self) -> float:
        return exp_or_inf(self.layer_log)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.general_log) and math.isfinite(self.layer_log)

    def content(self) -> dict[str, Any]:
        return {
            "params": {"a": self.a, "g": self.g, "k": self.k, "r": self.r},
            "phi": self.phi,
            "psi": self.psi,
            "big_c": self.big_c,
            "t": self.t,
            "m_phi": self.m_phi,
            "general_log": self.general_log,
            "general": self.general,
            "layer_log": self.layer_log,
            "layer": self.layer,
        }
