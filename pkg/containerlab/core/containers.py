"""
The graph container algorithm for (q, s)-biregular bipartite graphs.

A 2-linked set A inside X is mapped in two stages to a certificate (S, F):
first a phi-approximation F' of A is built from a sampled set T0 and a
greedy cover, then F' is refined into a psi-approximation. Every stage checks
the inequalities its output must satisfy and raises ``PropertyViolation``
with the offending sets when one fails.

Vertex preference is index order on both sides, which for the containment
graph is colex order.
"""

from __future__ import annotations

import logging
import math
import time
from collections import defaultdict
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Any

import numpy as np

from containerlab.core.combinatorics import binomial, binomial_at_most, bit_indices
from containerlab.core.isoperimetry import lovasz_bound
from containerlab.core.layer_graph import BiregularGraph, ContainmentGraph, LayerGraphParams, Side
from containerlab.errors import CapExceededError, ConvergenceError, PropertyViolation
from containerlab.models.certificate import (
    Certificate,
    ContainerFamilyReport,
    ContainerParams,
    ContainerStats,
    PhiApproximation,
    TheoremBounds,
    exp_or_inf,
    indices,
)
from containerlab.models.reports import RunInfo

logger = logging.getLogger(__name__)

SLACK = 1e-9
LINK_DISTANCE = 8
MAX_M_PHI_DEGREE = 20
MAX_CONTAINER_SIDE = 20
MAX_EXHAUSTIVE_T0 = 16


def _exceeds(value: float, bound: float) -> bool:
    return value > bound + SLACK * max(1.0, abs(bound))


def m_phi(graph: BiregularGraph, phi: float, max_degree: int = MAX_M_PHI_DEGREE) -> int:
    """
    Smallest |N(K)| over y in Y and K inside N(y) with |K| > phi.

    N is monotone, so only sets K of size floor(phi) + 1 are scanned.

    Raises:
        ValueError: If phi is outside [1, s - 1]
        CapExceededError: If s exceeds ``max_degree``
    """
    _, s = graph.degrees
    if not 1 <= phi <= s - 1:
        raise ValueError(f"phi must lie in [1, {s - 1}], got {phi}")
    if s > max_degree:
        raise CapExceededError("Y-degree s for an exact m_phi scan", s, max_degree)

    size = math.floor(phi) + 1
    best: int | None = None
    for y in range(graph.y_count):
        for chosen in combinations(bit_indices(graph.y_neighbors(y)), size):
            mask = 0
            for x in chosen:
                mask |= 1 << x
            outer = graph.neighborhood(mask).bit_count()
            if best is None or outer < best:
                best = outer
    if best is None:
        raise ValueError(f"{graph.name} has no Y-vertex of degree above {phi}")
    logger.debug("m_phi(%s, phi=%s) = %d", graph.name, phi, best)
    return best


def lovasz_m_phi_lower(params: LayerGraphParams, phi: float) -> int:
    """Lower bound on m_phi for H: the shadow bound for floor(phi) + 1 top sets."""
    bound = lovasz_bound(math.floor(phi) + 1, params.top_level, params.bottom_level)
    return max(1, math.ceil(bound - SLACK * max(1.0, bound)))


@dataclass(frozen=True)
class CoverResult:
    """A greedy cover with the degree bounds that limit its size."""
    cover: int
    min_degree: int
    max_degree: int
    pool_size: int

    @property
    def size(self) -> int:
        return self.cover.bit_count()

    @property
    def bound(self) -> float:
        """(|Y'| / a)(1 + ln b)."""
        if self.min_degree == 0:
            return 0.0
        return self.pool_size / self.min_degree * (1 + math.log(self.max_degree))


def greedy_cover(graph: BiregularGraph, targets: int, pool: int) -> CoverResult:
    """
    Cover the X-vertices ``targets`` by Y-vertices from ``pool``.

    Each step takes the pool vertex covering most uncovered targets, the
    lowest index on ties.

    Raises:
        ValueError: If some target has no neighbour in the pool
        PropertyViolation: If the cover exceeds (|Y'| / a)(1 + ln b)
    """
    if targets == 0:
        return CoverResult(cover=0, min_degree=0, max_degree=0, pool_size=pool.bit_count())

    min_degree = min(graph.degree_into(Side.X, x, pool) for x in bit_indices(targets))
    if min_degree == 0:
        stranded = [x for x in bit_indices(targets) if graph.degree_into(Side.X, x, pool) == 0]
        raise ValueError(f"targets {stranded} have no neighbour in the pool")
    max_degree = max(graph.degree_into(Side.Y, y, targets) for y in bit_indices(pool))

    remaining = targets
    cover = 0
    while remaining:
        best_y, best_gain = -1, 0
        for y in bit_indices(pool & ~cover):
            gain = graph.degree_into(Side.Y, y, remaining)
            if gain > best_gain:
                best_y, best_gain = y, gain
        cover |= 1 << best_y
        remaining &= ~graph.y_neighbors(best_y)

    result = CoverResult(cover=cover, min_degree=min_degree, max_degree=max_degree, pool_size=pool.bit_count())
    if _exceeds(result.size, result.bound):
        raise PropertyViolation(
            "greedy cover exceeds its size bound",
            {"targets": indices(targets), "pool": indices(pool), "cover": indices(cover), "bound": result.bound},
        )
    return result


def container_stats(
    graph: BiregularGraph,
    A: int,
    params: ContainerParams,
    m_phi_value: int | None = None,
) -> ContainerStats:
    """
    Raises:
        ValueError: If the parameters do not fit the graph
    """
    q, s = graph.degrees
    params.check(q, s)
    if m_phi_value is None:
        m_phi_value = m_phi(graph, params.phi)
    return ContainerStats(
        a=graph.closure(A).bit_count(),
        g=graph.neighborhood(A).bit_count(),
        q=q,
        s=s,
        m_phi=m_phi_value,
        p=params.sampling_rate(q),
        phi=params.phi,
    )


def heavy_neighbors(graph: BiregularGraph, A: int, phi: float) -> int:
    """N(A)^phi: vertices of N(A) with more than phi neighbours in [A]."""
    closure = graph.closure(A)
    heavy = 0
    for y in bit_indices(graph.neighborhood(A)):
        if graph.degree_into(Side.Y, y, closure) > phi:
            heavy |= 1 << y
    return heavy


def is_phi_approximation(graph: BiregularGraph, A: int, f_prime: int, phi: float) -> bool:
    """N(A)^phi <= F' <= N(A) and N(F') >= [A]."""
    outer = graph.neighborhood(A)
    if f_prime & ~outer:
        return False
    if heavy_neighbors(graph, A, phi) & ~f_prime:
        return False
    return graph.closure(A) & ~graph.neighborhood(f_prime, Side.Y) == 0


def psi_violations(graph: BiregularGraph, A: int, S: int, F: int, psi: float) -> list[str]:
    """Names of the psi-approximation conditions (S, F) fails for A."""
    q, s = graph.degrees
    failed = []
    if F & ~graph.neighborhood(A):
        failed.append("F inside N(A)")
    if graph.closure(A) & ~S:
        failed.append("S contains [A]")
    if any(graph.degree_into(Side.X, u, F) < q - psi for u in bit_indices(S)):
        failed.append("d_F(u) >= q - psi on S")
    outside = graph.full(Side.X) & ~S
    if any(graph.degree_into(Side.Y, v, outside) < s - psi for v in bit_indices(graph.full(Side.Y) & ~F)):
        failed.append("d_{X-S}(v) >= s - psi off F")
    return failed


@dataclass(frozen=True)
class T0Search:
    """Outcome of the search for T0."""
    t0: int
    attempts: int
    method: str


def _t0_check(graph: BiregularGraph, A: int, stats: ContainerStats, heavy: int) -> Callable[[int], bool]:
    closure = graph.closure(A)
    outside = graph.full(Side.X) & ~closure

    def check(t0: int) -> bool:
        if _exceeds(t0.bit_count(), stats.t0_bound):
            return False
        if _exceeds(graph.edge_count(t0, outside), stats.omega_bound):
            return False
        inner = graph.neighborhood(t0, Side.Y) & closure
        missed = heavy & ~graph.neighborhood(inner)
        return not _exceeds(missed.bit_count(), stats.t0_prime_bound)

    return check


def find_T0(
    graph: BiregularGraph,
    A: int,
    params: ContainerParams,
    stats: ContainerStats | None = None,
    max_exhaustive: int = MAX_EXHAUSTIVE_T0,
) -> T0Search:
    """
    Find T0 inside N(A) meeting the three sampling bounds.

    Candidates are drawn by keeping each vertex of N(A) with probability p,
    up to ``params.retry_cap`` times. When every draw fails and N(A) is small
    enough, subsets are searched exhaustively by size, then colex order.

    Raises:
        ConvergenceError: If no candidate is found
    """
    if stats is None:
        stats = container_stats(graph, A, params)
    outer = graph.neighborhood(A)
    check = _t0_check(graph, A, stats, heavy_neighbors(graph, A, params.phi))
    members = list(bit_indices(outer))

    rng = np.random.default_rng(params.seed)
    for attempt in range(1, params.retry_cap + 1):
        keep = rng.random(len(members)) < stats.p
        t0 = 0
        for y, kept in zip(members, keep):
            if kept:
                t0 |= 1 << y
        if check(t0):
            if attempt > 1:
                logger.debug("T0 for %s accepted after %d draws", indices(A), attempt)
            return T0Search(t0=t0, attempts=attempt, method="sampled")

    logger.warning("T0 sampling for %s failed %d times", indices(A), params.retry_cap)
    if len(members) <= max_exhaustive:
        for size in range(len(members) + 1):
            for chosen in combinations(members, size):
                t0 = 0
                for y in chosen:
                    t0 |= 1 << y
                if check(t0):
                    return T0Search(t0=t0, attempts=params.retry_cap, method="exhaustive")

    raise ConvergenceError(
        f"no T0 found for A={indices(A)}",
        {"attempts": params.retry_cap, "g": stats.g, "t": stats.t, "p": stats.p, "m_phi": stats.m_phi},
    )


def phi_approximation(
    graph: BiregularGraph,
    A: int,
    params: ContainerParams,
    m_phi_value: int | None = None,
    t0: int | None = None,
    max_exhaustive: int = MAX_EXHAUSTIVE_T0,
) -> PhiApproximation:
    """
    Build a phi-approximation F' of a 2-linked set A.

    With ``t0`` given the sampling step is skipped and that set is used.

    Raises:
        ValueError: If A is not a non-empty 2-linked set, or t0 is not inside N(A)
        ConvergenceError: If no T0 is found
        PropertyViolation: If F' or the link set T breaks a bound
    """
    if A == 0 or not graph.is_linked(A, Side.X, 2):
        raise ValueError(f"A={indices(A)} is not a non-empty 2-linked set")
    stats = container_stats(graph, A, params, m_phi_value)
    closure = graph.closure(A)
    outer = graph.neighborhood(A)

    if t0 is None:
        search = find_T0(graph, A, params, stats=stats, max_exhaustive=max_exhaustive)
    else:
        if t0 & ~outer:
            raise ValueError(f"T0={indices(t0)} is not inside N(A)")
        search = T0Search(t0=t0, attempts=0, method="given")
    t0 = search.t0

    inner = graph.neighborhood(t0, Side.Y) & closure
    covered = graph.neighborhood(inner)
    t0_prime = heavy_neighbors(graph, A, params.phi) & ~covered
    link = t0_prime | covered
    outside = graph.full(Side.X) & ~closure
    omega = tuple(
        (y, x) for y in bit_indices(t0) for x in bit_indices(graph.y_neighbors(y) & outside)
    )
    targets = closure & ~graph.neighborhood(link, Side.Y)
    t1 = greedy_cover(graph, targets, outer & ~link).cover
    result = PhiApproximation(
        f_prime=link | t1,
        t0=t0,
        t0_prime=t0_prime,
        t1=t1,
        omega=omega,
        stats=stats,
        attempts=search.attempts,
        t0_method=search.method,
    )

    witness: dict[str, Any] = {"A": indices(A), **result.to_dict()}
    if not is_phi_approximation(graph, A, result.f_prime, params.phi):
        raise PropertyViolation("F' is not a phi-approximation", witness)
    T = result.link_set
    if T and not graph.is_linked(T, Side.Y, LINK_DISTANCE):
        raise PropertyViolation(f"T is not {LINK_DISTANCE}-linked", witness)
    if _exceeds(T.bit_count(), stats.t_bound):
        raise PropertyViolation("|T| exceeds t_bound", {**witness, "t_bound": stats.t_bound})
    if _exceeds(t1.bit_count(), stats.t1_bound):
        raise PropertyViolation("|T1| exceeds its bound", {**witness, "t1_bound": stats.t1_bound})
    logger.debug("phi-approximation of %s: F'=%s", indices(A), indices(result.f_prime))
    return result


def psi_approximation(
    graph: BiregularGraph,
    A: int,
    f_prime: int,
    params: ContainerParams,
) -> Certificate:
    """
    Refine a phi-approximation F' of A into a psi-approximation (S, F).

    Step 1 grows F from F' by the neighbourhoods of vertices of [A] with more
    than psi neighbours in N(A) - F. Step 2 shrinks S by the neighbourhoods of
    vertices outside N(A) with more than psi neighbours in S.

    Raises:
        ValueError: If F' is not a phi-approximation of A
        PropertyViolation: If (S, F) or the step counts break a bound
    """
    q, s = graph.degrees
    params.check(q, s)
    if not is_phi_approximation(graph, A, f_prime, params.phi):
        raise ValueError(f"F'={indices(f_prime)} is not a phi-approximation of A={indices(A)}")
    psi, phi = params.psi, params.phi
    closure = graph.closure(A)
    outer = graph.neighborhood(A)
    t = outer.bit_count() * s - closure.bit_count() * q

    f1, p1 = f_prime, 0
    while True:
        pick = next(
            (v for v in bit_indices(closure) if graph.degree_into(Side.X, v, outer & ~f1) > psi),
            None,
        )
        if pick is None:
            break
        f1 |= graph.x_neighbors(pick)
        p1 |= 1 << pick
    s1 = 0
    for v in range(graph.x_count):
        if graph.degree_into(Side.X, v, f1) >= q - psi:
            s1 |= 1 << v

    s2, p2 = s1, 0
    away = graph.full(Side.Y) & ~outer
    while True:
        pick = next((u for u in bit_indices(away) if graph.degree_into(Side.Y, u, s2) > psi), None)
        if pick is None:
            break
        s2 &= ~graph.y_neighbors(pick)
        p2 |= 1 << pick
    f2 = 0
    for u in range(graph.y_count):
        if graph.degree_into(Side.Y, u, s2) > psi:
            f2 |= 1 << u

    cert = Certificate(A=A, S=s2, F=f1 | f2, P1=p1, P2=p2, params=params)
    witness = {"A": indices(A), "S": indices(cert.S), "F": indices(cert.F), "P1": indices(p1), "P2": indices(p2)}
    failed = psi_violations(graph, A, cert.S, cert.F, psi)
    if failed:
        raise PropertyViolation(f"psi-approximation conditions failed: {', '.join(failed)}", witness)
    if _exceeds(p1.bit_count(), t / ((s - phi) * psi)):
        raise PropertyViolation("Step 1 ran too many iterations", witness)
    if _exceeds(p2.bit_count(), t / ((q - psi) * psi)):
        raise PropertyViolation("Step 2 ran too many iterations", witness)
    size_bound = s / q * cert.F.bit_count() + psi * t / q * (1 / (q - psi) + 1 / (s - psi))
    if _exceeds(cert.S.bit_count(), size_bound):
        raise PropertyViolation("|S| exceeds its size bound", {**witness, "bound": size_bound})
    return cert


def certify(
    graph: BiregularGraph,
    A: int,
    params: ContainerParams,
    m_phi_value: int | None = None,
    t0: int | None = None,
    max_exhaustive: int = MAX_EXHAUSTIVE_T0,
) -> Certificate:
    """Run both stages on A and return the certificate with its provenance."""
    approx = phi_approximation(
        graph, A, params, m_phi_value=m_phi_value, t0=t0, max_exhaustive=max_exhaustive
    )
    cert = psi_approximation(graph, A, approx.f_prime, params)
    return replace(cert, phi_approx=approx)


def linked_profiles(graph: BiregularGraph, max_side: int = MAX_CONTAINER_SIDE) -> dict[tuple[int, int], list[int]]:
    """
    Every 2-linked A inside X, grouped by (|[A]|, |N(A)|).

    Raises:
        CapExceededError: If |X| exceeds ``max_side``
    """
    if graph.x_count > max_side:
        raise CapExceededError("|X| for 2-linked set enumeration", graph.x_count, max_side)
    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for A in range(1, 1 << graph.x_count):
        if graph.is_linked(A, Side.X, 2):
            key = (graph.closure(A).bit_count(), graph.neighborhood(A).bit_count())
            groups[key].append(A)
    return dict(sorted(groups.items()))


def general_log_bound(
    a: int,
    g: int,
    q: int,
    s: int,
    y_count: int,
    m_phi_value: int,
    phi: float,
    psi: float,
    big_c: float,
) -> float:
    """
    Natural log of the container-count bound for a (q, s)-biregular graph.

    The three binomial factors C(N, <= K) are exact integer sums over
    floored arguments.

    Raises:
        ValueError: If t = gs - aq is negative
    """
    t = g * s - a * q
    if t < 0:
        raise ValueError(f"t = gs - aq must be non-negative, got {t}")
    ln_q, ln_qs = math.log(q), math.log(q * s)
    exponent = (
        54 * big_c * g * ln_q * ln_qs / (phi * q)
        + 54 * g * ln_qs / q ** (big_c * m_phi_value / (phi * q))
        + 54 * t * math.log(s) * ln_qs / (q * (s - phi))
    )
    factors = (
        binomial_at_most(3 * big_c * g * s * ln_q / (phi * q), 3 * big_c * t * ln_q / (phi * q)),
        binomial_at_most(g * s, t / ((s - phi) * psi)),
        binomial_at_most(g * s * q, t / ((q - psi) * psi)),
    )
    return math.log(y_count) + exponent + sum(math.log(f) for f in factors)


def container_family(
    graph: BiregularGraph,
    a: int,
    g: int,
    params: ContainerParams,
    m_phi_value: int | None = None,
    workers: int = 1,
    max_side: int = MAX_CONTAINER_SIDE,
    members: list[int] | None = None,
    max_exhaustive: int = MAX_EXHAUSTIVE_T0,
) -> ContainerFamilyReport:
    """
    Certify every 2-linked A with |[A]| = a and |N(A)| = g.

    Each A runs with seed ``params.seed`` XOR its lowest index, so results do
    not depend on ``workers``. The runs share threads and hold the GIL, so
    ``workers`` exercises that independence rather than adding speed.
    ``members`` skips the enumeration when the sets are already known.

    Raises:
        CapExceededError: If |X| exceeds ``max_side``
        PropertyViolation: If any certificate fails its conditions
    """
    start = time.time()
    q, s = graph.degrees
    params.check(q, s)
    if m_phi_value is None:
        m_phi_value = m_phi(graph, params.phi)
    if members is None:
        members = linked_profiles(graph, max_side).get((a, g), [])

    def run(A: int) -> Certificate:
        seeded = params.with_seed(params.seed ^ ((A & -A).bit_length() - 1))
        return certify(graph, A, seeded, m_phi_value=m_phi_value, max_exhaustive=max_exhaustive)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        certificates = list(executor.map(run, members))

    distinct: dict[tuple[int, int], Certificate] = {}
    for cert in certificates:
        distinct.setdefault(cert.key(), cert)

    log_bound = general_log_bound(a, g, q, s, graph.y_count, m_phi_value, params.phi, params.psi, params.big_c)
    report = ContainerFamilyReport(
        graph=graph.name,
        a=a,
        g=g,
        params=params,
        sets=len(members),
        certificates=[distinct[key] for key in sorted(distinct)],
        certified=len(certificates),
        log_bound=log_bound,
        bound=exp_or_inf(log_bound),
        m_phi=m_phi_value,
        run=RunInfo(wall_time=time.time() - start, workers=workers),
    )
    logger.info(
        "containers on %s (a=%d, g=%d): %d sets, %d certificates",
        graph.name, a, g, report.sets, report.distinct,
    )
    return report


def layer_log_bound(a: int, g: int, k: int, r: int, phi: float, psi: float, big_c: float) -> float:
    """
    Natural log of the layer form of the bound, in terms of d only.

    Each O(.) slot carries the constant 54 * max(1, C).
    """
    d = binomial(k + r - 1, k - 1)
    if d < 2:
        raise ValueError(f"the layer bound needs d >= 2, got d={d}")
    if not (1 <= phi <= d - 1 and 1 <= psi <= d - 1):
        raise ValueError(f"need 1 <= phi, psi <= d - 1 = {d - 1}, got phi={phi}, psi={psi}")
    t = (k + r) / k * g * d - a * d
    ln_d = math.log(d)
    slot = 54 * max(1.0, big_c)
    terms = (
        g * ln_d ** 2 / (phi * d)
        + t * ln_d ** 2 / (d * (d - phi))
        + t * ln_d ** 2 / (phi * d)
        + t * ln_d / ((d - phi) * psi)
        + t * ln_d / ((d - psi) * psi)
    )
    return math.log(binomial(2 * k + r - 1, k - 1)) + slot * terms


def theorem_bounds(
    a: int,
    g: int,
    k: int,
    r: int,
    phi: float,
    psi: float,
    big_c: float,
    m_phi_value: int | None = None,
    max_degree: int = MAX_M_PHI_DEGREE,
) -> TheoremBounds:
    """
    Evaluate the general and the layer form of the container bound for H(2k+r, k, r).

    m_phi is scanned exactly when s <= ``max_degree`` and otherwise replaced by
    its shadow lower bound, which only enlarges the bound.

    Raises:
        ValueError: If phi, psi or C lie outside their domains
    """
    params = LayerGraphParams.from_kr(k, r)
    q, s = params.q, params.s
    if not 1 <= phi <= s - 1:
        raise ValueError(f"phi must lie in [1, {s - 1}], got {phi}")
    if not 1 <= psi <= min(q, s) - 1:
        raise ValueError(f"psi must lie in [1, {min(q, s) - 1}], got {psi}")
    if big_c <= 0 or big_c * math.log(q) / (phi * q) >= 1:
        raise ValueError(f"C must be positive with C ln q / (phi q) < 1, got C={big_c}")

    if m_phi_value is None:
        if s <= max_degree:
            m_phi_value = m_phi(ContainmentGraph(params), phi, max_degree)
        else:
            m_phi_value = lovasz_m_phi_lower(params, phi)

    return TheoremBounds(
        a=a,
        g=g,
        k=k,
        r=r,
        phi=phi,
        psi=psi,
        big_c=big_c,
        t=g * s - a * q,
        m_phi=m_phi_value,
        general_log=general_log_bound(a, g, q, s, params.bottom_size, m_phi_value, phi, psi, big_c),
        layer_log=layer_log_bound(a, g, k, r, phi, psi, big_c),
    )
