"""
Report models produced by enumeration and verification runs.

Every report serialises through ``to_dict``; counts are decimal strings so
consumers never hit integer-width limits. Wall time and worker count live in
an optional ``run`` block that is only emitted on request, which keeps the
content identical across worker counts.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

from containerlab.core.combinatorics import binomial
from containerlab.models.family import (
    FamilyClass,
    KFamily,
    NiceReport,
    PhiImage,
    StarDistance,
)
from containerlab.utils.formatting import format_count


@dataclass(frozen=True)
class RunInfo:
    """How a report was produced; excluded from content by default."""
    wall_time: float = 0.0
    workers: int = 1

    def to_dict(self) -> dict:
        return {"wall_time": self.wall_time, "workers": self.workers}


def _histogram(profile: dict[int, int]) -> dict[str, str]:
    return {str(ell): format_count(profile[ell]) for ell in sorted(profile)}


class Report(ABC):
    """
    Common surface of everything the CLI can emit.

    Subclasses implement ``title``, ``passed`` and ``content``.
    """

    run: RunInfo | None

    @property
    @abstractmethod
    def title(self) -> str:
        pass

    @property
    @abstractmethod
    def passed(self) -> bool:
        pass

    @abstractmethod
    def content(self) -> dict[str, Any]:
        """The report body, without the run block."""
        pass

    def to_dict(self, include_run: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {"report": self.title}
        data.update(self.content())
        data["passed"] = self.passed
        if include_run and self.run is not None:
            data["run"] = self.run.to_dict()
        return data

    def csv_headers(self) -> list[str]:
        return ["key", "value"]

    def csv_rows(self) -> list[list[Any]]:
        """Scalar entries of the body, flattened with dotted keys."""
        rows: list[list[Any]] = []

        def walk(prefix: str, value: Any) -> None:
            if isinstance(value, dict):
                for key, inner in value.items():
                    walk(f"{prefix}.{key}" if prefix else str(key), inner)
            elif not isinstance(value, list):
                rows.append([prefix, value])

        walk("", self.to_dict())
        return rows


@dataclass
class CountReport(Report):
    """Intersecting-family counts at (n, k)."""
    n: int = 0
    k: int = 0
    total: int = 0
    trivial: int = 0
    nontrivial: int = 0
    maximal_profile: dict[int, int] = field(default_factory=dict)
    method: str = "branch-and-count"
    oracle_total: int | None = None
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "count"

    @property
    def passed(self) -> bool:
        if self.total != self.trivial + self.nontrivial:
            return False
        return self.oracle_total is None or self.oracle_total == self.total

    def content(self) -> dict[str, Any]:
        return {
            "params": {"n": self.n, "k": self.k, "r": self.n - 2 * self.k},
            "method": self.method,
            "total": format_count(self.total),
            "trivial": format_count(self.trivial),
            "nontrivial": format_count(self.nontrivial),
            "maximal_profile": _histogram(self.maximal_profile),
            "oracle_total": None if self.oracle_total is None else format_count(self.oracle_total),
        }

    def csv_headers(self) -> list[str]:
        return ["ell", "count"]

    def csv_rows(self) -> list[list[Any]]:
        return [[ell, self.maximal_profile[ell]] for ell in sorted(self.maximal_profile)]


@dataclass
class MaximalProfileReport(Report):
    """Maximal intersecting families at (n, k) and the bounds they obey."""
    n: int
    k: int
    maximal_total: int
    trivial_maximal: int
    profile: dict[int, int]
    max_nontrivial: int | None
    hilton_milner: int | None
    nontrivial_count: int
    covering_sum: int
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "maximal"

    @property
    def nontrivial_maximal(self) -> int:
        return sum(self.profile.values())

    @property
    def bollobas_holds(self) -> bool:
        """(sum M_l)^2 <= 2^(n C(2k,k)), exact."""
        return self.nontrivial_maximal ** 2 <= 1 << (self.n * binomial(2 * self.k, self.k))

    @property
    def hilton_milner_holds(self) -> bool:
        if self.hilton_milner is None or self.max_nontrivial is None:
            return True
        return self.max_nontrivial <= self.hilton_milner

    @property
    def covering_holds(self) -> bool:
        return self.nontrivial_count <= self.covering_sum

    @property
    def passed(self) -> bool:
        return self.bollobas_holds and self.hilton_milner_holds and self.covering_holds

    def content(self) -> dict[str, Any]:
        return {
            "params": {"n": self.n, "k": self.k, "r": self.n - 2 * self.k},
            "maximal_total": format_count(self.maximal_total),
            "trivial_maximal": format_count(self.trivial_maximal),
            "nontrivial_maximal": format_count(self.nontrivial_maximal),
            "profile": _histogram(self.profile),
            "bollobas_holds": self.bollobas_holds,
            "max_nontrivial": self.max_nontrivial,
            "hilton_milner": self.hilton_milner,
            "hilton_milner_holds": self.hilton_milner_holds,
            "nontrivial_count": format_count(self.nontrivial_count),
            "covering_sum": format_count(self.covering_sum),
            "covering_holds": self.covering_holds,
        }

    def csv_headers(self) -> list[str]:
        return ["ell", "count"]

    def csv_rows(self) -> list[list[Any]]:
        return [[ell, self.profile[ell]] for ell in sorted(self.profile)]


@dataclass
class PhiReport(Report):
    """A family, its encoding and the checks around it."""
    family: KFamily
    image: PhiImage
    restored: bool
    classification: FamilyClass
    star: StarDistance
    nice: NiceReport | None = None
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "phi"

    @property
    def passed(self) -> bool:
        return self.image.independent and self.restored and self.image.size == len(self.family)

    def content(self) -> dict[str, Any]:
        return {
            "family": self.family.to_dict(),
            "image": self.image.to_dict(),
            "restored": self.restored,
            "classification": self.classification.to_dict(),
            "nearest_star": self.star.to_dict(),
            "nice": None if self.nice is None else self.nice.to_dict(),
        }


@dataclass
class IsoperimetryReport(Report):
    """Shadow bounds checked over a sweep of subsets of the top layer."""
    params: dict[str, int]
    mode: str
    subsets_checked: int
    sizes_checked: int
    checks: dict[str, int]
    min_slack: float | None
    witness: dict[str, Any] | None = None
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "isoperimetry"

    @property
    def passed(self) -> bool:
        return self.witness is None

    def content(self) -> dict[str, Any]:
        return {
            "params": self.params,
            "mode": self.mode,
            "subsets_checked": format_count(self.subsets_checked),
            "sizes_checked": self.sizes_checked,
            "checks": {name: format_count(count) for name, count in self.checks.items()},
            "min_slack": self.min_slack,
            "witness": self.witness,
        }


@dataclass
class PartitionReport(Report):
    """Independent sets of H grouped by their container set C."""
    params: dict[str, int]
    groups: int
    total: int
    oracle_total: int
    bottom_size: int
    mismatches: list[dict[str, Any]] = field(default_factory=list)
    containers_by_g: dict[int, int] = field(default_factory=dict)
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "partition"

    @property
    def weighted_total(self) -> int:
        """Sum over g of C_g * 2^(|L_{k-1}| - g)."""
        return sum(count << (self.bottom_size - g) for g, count in self.containers_by_g.items())

    @property
    def passed(self) -> bool:
        return not self.mismatches and self.total == self.oracle_total == self.weighted_total

    def content(self) -> dict[str, Any]:
        return {
            "params": self.params,
            "groups": format_count(self.groups),
            "total": format_count(self.total),
            "oracle_total": format_count(self.oracle_total),
            "bottom_size": self.bottom_size,
            "containers_by_g": _histogram(self.containers_by_g),
            "weighted_total": format_count(self.weighted_total),
            "mismatches": self.mismatches,
        }


@dataclass
class RemovalProbeReport(Report):
    """Empirical constants of the star-removal inequality over all families."""
    n: int
    k: int
    families: int
    max_constant: float | None
    worst_family: list[list[int]] | None
    trivial_distance_ok: bool
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "removal-probe"

    @property
    def passed(self) -> bool:
        return self.trivial_distance_ok

    def content(self) -> dict[str, Any]:
        return {
            "params": {"n": self.n, "k": self.k, "r": self.n - 2 * self.k},
            "families": format_count(self.families),
            "max_constant": self.max_constant,
            "worst_family": self.worst_family,
            "trivial_distance_ok": self.trivial_distance_ok,
        }


@dataclass
class ClosureProfileReport(Report):
    """Closure sizes of the top part of encoded non-trivial families."""
    n: int
    k: int
    threshold: float
    histogram: dict[int, int]
    small: int
    large: int
    nontrivial: int
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "closure-profile"

    @property
    def passed(self) -> bool:
        return self.small + self.large == self.nontrivial

    def content(self) -> dict[str, Any]:
        return {
            "params": {"n": self.n, "k": self.k, "r": self.n - 2 * self.k},
            "threshold": self.threshold,
            "histogram": _histogram(self.histogram),
            "small": format_count(self.small),
            "large": format_count(self.large),
            "nontrivial": format_count(self.nontrivial),
        }

    def csv_headers(self) -> list[str]:
        return ["a", "count"]

    def csv_rows(self) -> list[list[Any]]:
        return [[a, self.histogram[a]] for a in sorted(self.histogram)]


@dataclass
class CheckResult:
    """One line of the acceptance suite."""
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self, include_run: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if include_run:
            data["seconds"] = self.seconds
        return data


@dataclass
class VerificationSummary(Report):
    """Outcome of ``verify-all``."""
    tier: str
    checks: list[CheckResult] = field(default_factory=list)
    run: RunInfo | None = None

    @property
    def title(self) -> str:
        return "verify-all"

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def content(self) -> dict[str, Any]:
        return {
            "tier": self.tier,
            "checks_run": len(self.checks),
            "checks_failed": len(self.failures),
            "checks": [check.to_dict() for check in self.checks],
        }

    def to_dict(self, include_run: bool = False) -> dict[str, Any]:
        data = super().to_dict(include_run)
        if include_run:
            data["checks"] = [check.to_dict(include_run=True) for check in self.checks]
        return data

    def csv_headers(self) -> list[str]:
        return ["check", "passed"]

    def csv_rows(self) -> list[list[Any]]:
        return [[check.name, check.passed] for check in self.checks]
