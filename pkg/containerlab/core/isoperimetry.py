"""
Shadow sizes and the lower bounds they obey.

The shadow of a family of m-sets at level j is the family of all j-subsets
of its members. In the containment graph the neighbourhood of a set of top
vertices is exactly such a shadow.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Any

from containerlab.core.combinatorics import (
    binomial,
    bit_indices,
    elements_of,
    real_binomial,
    real_binomial_root,
    sub_masks_of_size,
)
from containerlab.core.layer_graph import ContainmentGraph, LayerGraphParams
from containerlab.errors import CapExceededError
from containerlab.models.reports import IsoperimetryReport, RunInfo

logger = logging.getLogger(__name__)

SLACK = 1e-9

MODES = ("exhaustive", "colex")


def shadow(members: Iterable[int], level: int) -> set[int]:
    """All ``level``-subsets of the given sets."""
    result: set[int] = set()
    for member in members:
        if member.bit_count() < level:
            raise ValueError(f"cannot take a {level}-shadow of {elements_of(member)}")
        result.update(sub_masks_of_size(member, level))
    return result


def shadow_size(members: Iterable[int], level: int) -> int:
    """Exact size of the ``level``-shadow."""
    return len(shadow(members, level))


def lovasz_bound(size: int, m: int, level: int) -> float:
    """
    Lower bound C(x, level) on the shadow of ``size`` m-sets, where C(x, m) = size.

    Raises:
        ValueError: If size < 1 or the levels are inconsistent
    """
    if size < 1:
        raise ValueError(f"size must be at least 1, got {size}")
    if not 0 <= level <= m:
        raise ValueError(f"need 0 <= level <= m, got level={level}, m={m}")
    x = real_binomial_root(m, size)
    return real_binomial(x, level)


def iso_bound_i(a: int, k: int, r: int, c: int) -> float:
    """
    a * prod_{j=0}^{r-1} (1 + c/(k - c + j)).

    Valid as a shadow bound when a <= C(n-2-c, k+r-1); see
    :func:`iso_bound_i_applies`.

    Raises:
        ValueError: If c is negative or c >= k
    """
    if c < 0 or c >= k:
        raise ValueError(f"need 0 <= c < k, got c={c}, k={k}")
    value = float(a)
    for j in range(r):
        value *= 1 + c / (k - c + j)
    return value


def iso_bound_i_applies(a: int, k: int, r: int, c: int) -> bool:
    n = 2 * k + r
    return n - 2 - c >= 0 and a <= binomial(n - 2 - c, k + r - 1)


def iso_bound_ii(a: int, k: int, r: int) -> float:
    """
    d * a / (5e)^r with d = C(k+r-1, k-1).

    Raises:
        ValueError: If a > d^3
    """
    d = binomial(k + r - 1, k - 1)
    if a > d ** 3:
        raise ValueError(f"the second bound needs a <= d^3 = {d ** 3}, got a={a}")
    return d * a / (5 * math.e) ** r


def iso_bounds_apply(k: int, r: int) -> bool:
    """Bounds (i) and (ii) are only claimed for 1 <= r <= 2 + 2 sqrt(k ln k)."""
    return k >= 2 and 1 <= r <= 2 + 2 * math.sqrt(k * math.log(k))


def _size_checks(a: int, params: LayerGraphParams) -> list[tuple[str, float]]:
    """Every (name, bound) that applies to a family of ``a`` top sets."""
    k, r = params.k, params.r
    checks = [("lovasz", lovasz_bound(a, params.top_level, params.bottom_level))]
    if not iso_bounds_apply(k, r):
        return checks
    for c in range(1, k):
        if iso_bound_i_applies(a, k, r, c):
            checks.append((f"part_i_c{c}", iso_bound_i(a, k, r, c)))
    if a <= params.d ** 3:
        checks.append(("part_ii", iso_bound_ii(a, k, r)))
    return checks


def _min_shadows(x_adj: list[int], lo: int, hi: int) -> dict[int, tuple[int, int]]:
    """Smallest shadow per subset size over patterns in [lo, hi), with the earliest witness."""
    best: dict[int, tuple[int, int]] = {}
    for mask in range(max(lo, 1), hi):
        outer = 0
        for i in bit_indices(mask):
            outer |= x_adj[i]
        size = mask.bit_count()
        entry = (outer.bit_count(), mask)
        current = best.get(size)
        if current is None or entry < current:
            best[size] = entry
    return best


def verify_isoperimetry(
    params: LayerGraphParams,
    mode: str = "exhaustive",
    workers: int = 1,
    max_exhaustive: int = 20,
) -> IsoperimetryReport:
    """
    Check shadow bounds on subsets of the top layer of H(n, k, r).

    ``exhaustive`` takes the smallest shadow of every size over all subsets
    (the bounds depend on the size only); ``colex`` takes the colex initial
    segments. The sweep stops at the first violation and reports it.

    Raises:
        ValueError: On an unknown mode
        CapExceededError: If the exhaustive sweep exceeds ``max_exhaustive`` top vertices
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    start = time.time()
    graph = ContainmentGraph(params)
    top = graph.x_count

    candidates: list[tuple[int, int, int]]
    if mode == "exhaustive":
        if top > max_exhaustive:
            raise CapExceededError("top layer size for an exhaustive sweep", top, max_exhaustive)
        total = 1 << top
        chunk = max(1, -(-total // max(1, workers * 4)))
        bounds = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
        x_adj = [graph.x_neighbors(i) for i in range(top)]
        los, his = [lo for lo, _ in bounds], [hi for _, hi in bounds]
        if workers <= 1:
            parts = list(map(_min_shadows, repeat(x_adj), los, his))
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                parts = list(executor.map(_min_shadows, repeat(x_adj), los, his))
        merged: dict[int, tuple[int, int]] = {}
        for part in parts:
            for size, entry in part.items():
                if size not in merged or entry < merged[size]:
                    merged[size] = entry
        subsets_checked = total - 1
        candidates = [(size, merged[size][0], merged[size][1]) for size in sorted(merged)]
    else:
        candidates = []
        for size in range(1, top + 1):
            segment = (1 << size) - 1
            candidates.append((size, graph.neighborhood(segment).bit_count(), segment))
        subsets_checked = top

    tally: dict[str, int] = {}
    min_slack: float | None = None
    witness: dict[str, Any] | None = None
    for size, actual, mask in candidates:
        checks = _size_checks(size, params)
        if size == top:
            checks.append(("full_layer", float(params.bottom_size)))
        for name, bound in checks:
            tally[name] = tally.get(name, 0) + 1
            if bound > 0:
                slack = actual / bound
                min_slack = slack if min_slack is None else min(min_slack, slack)
            failed = actual != bound if name == "full_layer" else actual < bound - SLACK * max(1.0, bound)
            if failed:
                witness = {
                    "check": name,
                    "size": size,
                    "shadow": actual,
                    "bound": bound,
                    "A": [list(elements_of(graph.top_member(i))) for i in bit_indices(mask)],
                }
                logger.warning("isoperimetry violation on %s: %s", params.label(), witness)
                break
        if witness is not None:
            break

    report = IsoperimetryReport(
        params=params.to_dict(),
        mode=mode,
        subsets_checked=subsets_checked,
        sizes_checked=len(candidates),
        checks=dict(sorted(tally.items())),
        min_slack=min_slack,
        witness=witness,
        run=RunInfo(wall_time=time.time() - start, workers=workers),
    )
    logger.info(
        "isoperimetry %s on %s: %d subsets, passed=%s",
        mode, params.label(), subsets_checked, report.passed,
    )
    return report
