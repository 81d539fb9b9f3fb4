"""
Exact enumeration of intersecting families and of independent sets in H.

Intersecting k-uniform families on [n] are the independent sets of the
disjointness graph on the k-subsets of [n]. They are counted by branching on
the lowest undecided vertex and factoring over connected components of what
is left; component counts are memoised by their vertex pattern.
"""

from __future__ import annotations

import logging
import math
import time
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import networkx as nx

from containerlab.core.combinatorics import (
    binomial,
    bit_indices,
    count_trivial,
    iter_k_subsets,
    real_binomial,
)
from containerlab.core.families import (
    classify_family,
    hilton_milner_bound,
    nearest_star,
    phi_inverse,
    phi_map,
    star_size,
)
from containerlab.core.layer_graph import ContainmentGraph, LayerGraphParams, Side
from containerlab.errors import CapExceededError
from containerlab.models.family import KFamily
from containerlab.models.reports import (
    ClosureProfileReport,
    CountReport,
    MaximalProfileReport,
    PartitionReport,
    RemovalProbeReport,
    RunInfo,
)

logger = logging.getLogger(__name__)

FAMILY_CAP = 24
RAW_CAP = 20
LAYER_CAP = 24


@dataclass(frozen=True)
class DisjointnessGraph:
    """The k-subsets of [n] in colex order, adjacent when disjoint."""
    n: int
    k: int
    members: tuple[int, ...]
    adjacency: tuple[int, ...]

    @classmethod
    def build(cls, n: int, k: int) -> DisjointnessGraph:
        if not 1 <= k <= n:
            raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
        members = tuple(iter_k_subsets(n, k))
        adjacency = []
        for a in members:
            row = 0
            for j, b in enumerate(members):
                if a & b == 0:
                    row |= 1 << j
            adjacency.append(row)
        return cls(n=n, k=k, members=members, adjacency=tuple(adjacency))

    @property
    def size(self) -> int:
        return len(self.members)

    def family(self, mask: int) -> KFamily:
        return KFamily(n=self.n, k=self.k, members=tuple(self.members[i] for i in bit_indices(mask)))


def _check_cap(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise CapExceededError(what, size, cap)


class IndependentSetCounter:
    """
    Branch-and-count over a graph given by adjacency patterns.

    With several workers the split tasks run in separate processes, each
    holding its own memo table.
    """

    def __init__(self, adjacency: Sequence[int]):
        self.adjacency = adjacency
        self._memo: dict[int, int] = {}

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def components(self, mask: int) -> list[int]:
        """Connected components of the subgraph induced on ``mask``."""
        parts = []
        rest = mask
        while rest:
            component = frontier = rest & -rest
            while frontier:
                reach = 0
                for i in bit_indices(frontier):
                    reach |= self.adjacency[i]
                frontier = reach & rest & ~component
                component |= frontier
            parts.append(component)
            rest &= ~component
        return parts

    def count(self, mask: int) -> int:
        """Number of independent sets inside ``mask``, the empty set included."""
        if mask == 0:
            return 1
        cached = self._memo.get(mask)
        if cached is not None:
            return cached

        parts = self.components(mask)
        if len(parts) > 1:
            result = math.prod(self.count(part) for part in parts)
        else:
            low = mask & -mask
            rest = mask & ~low
            result = self.count(rest) + self.count(rest & ~self.adjacency[low.bit_length() - 1])
        return self._memo.setdefault(mask, result)

    def tasks(self, mask: int, depth: int) -> list[int]:
        """
        Residual patterns after fixing the first ``depth`` vertices of ``mask``.

        Summing :meth:`count` over the residuals gives the count of ``mask``.
        """
        order = list(bit_indices(mask))[:depth]
        decided = 0
        for v in order:
            decided |= 1 << v
        residuals: list[int] = []

        def walk(i: int, blocked: int) -> None:
            if i == len(order):
                residuals.append(mask & ~decided & ~blocked)
                return
            v = order[i]
            walk(i + 1, blocked)
            if not blocked >> v & 1:
                walk(i + 1, blocked | self.adjacency[v])

        walk(0, 0)
        return residuals

    def count_parallel(self, mask: int, workers: int = 1, depth: int = 4) -> int:
        residuals = self.tasks(mask, depth)
        logger.debug("split into %d tasks over %d workers", len(residuals), workers)
        if workers <= 1:
            return sum(self.count(residual) for residual in residuals)
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(tuple(self.adjacency),)
        ) as executor:
            chunk = max(1, len(residuals) // (workers * 4))
            return sum(executor.map(_count_residual, residuals, chunksize=chunk))


_worker_counter: IndependentSetCounter | None = None


def _init_worker(adjacency: tuple[int, ...]) -> None:
    global _worker_counter
    _worker_counter = IndependentSetCounter(adjacency)


def _count_residual(mask: int) -> int:
    if _worker_counter is None:
        raise RuntimeError("worker process was not initialised")
    return _worker_counter.count(mask)


def count_intersecting(
    n: int,
    k: int,
    workers: int = 1,
    split_depth: int = 4,
    max_vertices: int = FAMILY_CAP,
    include_profile: bool = False,
) -> CountReport:
    """
    Count the k-uniform intersecting families on [n], the empty family included.

    Args:
        n: Ground set size
        k: Uniformity
        workers: Processes working through the split tasks
        split_depth: Top branching levels turned into independent tasks
        max_vertices: Cap on C(n, k)
        include_profile: Also enumerate maximal families for the M_l histogram

    Raises:
        CapExceededError: If C(n, k) exceeds ``max_vertices``
    """
    _check_cap("C(n,k)", binomial(n, k), max_vertices)
    start = time.time()
    graph = DisjointnessGraph.build(n, k)
    counter = IndependentSetCounter(graph.adjacency)
    total = counter.count_parallel((1 << graph.size) - 1, workers=workers, depth=split_depth)
    trivial = count_trivial(n, k)

    profile: dict[int, int] = {}
    if include_profile:
        profile = maximal_profile(n, k, max_vertices=max_vertices, nontrivial_count=total - trivial).profile

    report = CountReport(
        n=n,
        k=k,
        total=total,
        trivial=trivial,
        nontrivial=total - trivial,
        maximal_profile=profile,
        run=RunInfo(wall_time=time.time() - start, workers=workers),
    )
    logger.info(
        "count(%d,%d): total=%d trivial=%d memo=%d", n, k, total, trivial, counter.memo_size
    )
    return report


def raw_count_intersecting(n: int, k: int, max_vertices: int = RAW_CAP) -> CountReport:
    """
    Count by direct iteration over every subset of the k-subsets of [n].

    Each subset is tested for independence and for a common element,
    incrementally from the subset with its lowest member removed.

    Raises:
        CapExceededError: If C(n, k) exceeds ``max_vertices``
    """
    _check_cap("C(n,k) for the raw iterator", binomial(n, k), max_vertices)
    start = time.time()
    graph = DisjointnessGraph.build(n, k)
    size = 1 << graph.size
    independent = bytearray(size)
    common = [0] * size
    independent[0] = 1
    common[0] = (1 << n) - 1
    total = trivial = 1
    for mask in range(1, size):
        low = mask & -mask
        prev = mask ^ low
        v = low.bit_length() - 1
        if independent[prev] and not graph.adjacency[v] & prev:
            independent[mask] = 1
            common[mask] = common[prev] & graph.members[v]
            total += 1
            if common[mask]:
                trivial += 1
    return CountReport(
        n=n,
        k=k,
        total=total,
        trivial=trivial,
        nontrivial=total - trivial,
        method="raw",
        run=RunInfo(wall_time=time.time() - start, workers=1),
    )


def iter_intersecting_families(n: int, k: int, max_vertices: int = RAW_CAP) -> Iterator[KFamily]:
    """Yield every intersecting family (the empty one first), members in colex order."""
    _check_cap("C(n,k) for family iteration", binomial(n, k), max_vertices)
    graph = DisjointnessGraph.build(n, k)
    stack: list[tuple[int, int, int]] = [(0, 0, 0)]
    while stack:
        index, chosen, blocked = stack.pop()
        if index == graph.size:
            yield graph.family(chosen)
            continue
        if not blocked >> index & 1:
            stack.append((index + 1, chosen | 1 << index, blocked | graph.adjacency[index]))
        stack.append((index + 1, chosen, blocked))


def maximal_families(n: int, k: int, max_vertices: int = FAMILY_CAP) -> list[KFamily]:
    """All maximal intersecting families: maximal cliques of the intersection graph."""
    _check_cap("C(n,k)", binomial(n, k), max_vertices)
    members = list(iter_k_subsets(n, k))
    graph = nx.Graph()
    graph.add_nodes_from(members)
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if a & b:
                graph.add_edge(a, b)
    families = [KFamily(n=n, k=k, members=tuple(clique)) for clique in nx.find_cliques(graph)]
    families.sort(key=lambda f: f.members)
    return families


def maximal_profile(
    n: int,
    k: int,
    max_vertices: int = FAMILY_CAP,
    nontrivial_count: int | None = None,
) -> MaximalProfileReport:
    """
    Histogram of deficiencies l = C(n-1,k-1) - |F| over maximal non-trivial families.

    Also returns the largest non-trivial size against the Hilton-Milner bound
    and the covering sum of 2^|F| over maximal non-trivial F, which bounds the
    number of non-trivial intersecting families.
    """
    start = time.time()
    star = star_size(n, k)
    profile: Counter[int] = Counter()
    trivial_maximal = 0
    max_nontrivial: int | None = None
    covering = 0
    families = maximal_families(n, k, max_vertices=max_vertices)
    for family in families:
        if classify_family(family).trivial:
            trivial_maximal += 1
            continue
        profile[star - len(family)] += 1
        covering += 1 << len(family)
        max_nontrivial = len(family) if max_nontrivial is None else max(max_nontrivial, len(family))

    if nontrivial_count is None:
        nontrivial_count = count_intersecting(n, k, max_vertices=max_vertices).nontrivial

    hm = hilton_milner_bound(n, k) if n >= 2 * k + 1 else None

    return MaximalProfileReport(
        n=n,
        k=k,
        maximal_total=len(families),
        trivial_maximal=trivial_maximal,
        profile=dict(sorted(profile.items())),
        max_nontrivial=max_nontrivial,
        hilton_milner=hm,
        nontrivial_count=nontrivial_count,
        covering_sum=covering,
        run=RunInfo(wall_time=time.time() - start, workers=1),
    )


def removal_probe(n: int, k: int, max_vertices: int = RAW_CAP) -> RemovalProbeReport:
    """
    Nearest-star distances over every intersecting family.

    Reports the largest empirical removal constant, and checks that a
    trivial family sits at distance star size - |F| from a star.
    """
    start = time.time()
    star = star_size(n, k)
    worst: float | None = None
    worst_family: list[list[int]] | None = None
    trivial_ok = True
    families = 0
    for family in iter_intersecting_families(n, k, max_vertices=max_vertices):
        families += 1
        distance = nearest_star(family)
        if classify_family(family).trivial and distance.distance != star - len(family):
            trivial_ok = False
            logger.warning("trivial family %s at distance %d", family.sets(), distance.distance)
        constant = distance.implied_constant
        if constant is not None and (worst is None or constant > worst):
            worst = constant
            worst_family = [list(s) for s in family.sets()]
    return RemovalProbeReport(
        n=n,
        k=k,
        families=families,
        max_constant=worst,
        worst_family=worst_family,
        trivial_distance_ok=trivial_ok,
        run=RunInfo(wall_time=time.time() - start, workers=1),
    )


def closure_threshold(params: LayerGraphParams) -> float:
    """C(2k + 3r/4, k + r - 1) as a real binomial."""
    return real_binomial(2 * params.k + 3 * params.r / 4, params.top_level)


def closure_profile(n: int, k: int, max_vertices: int = RAW_CAP) -> ClosureProfileReport:
    """
    Closure sizes a = |[phi(F) top part]| over non-trivial intersecting families.

    Raises:
        ValueError: Unless n >= 2k + 1 and k >= 2
    """
    params = LayerGraphParams(n=n, k=k, r=n - 2 * k)
    graph = ContainmentGraph(params)
    threshold = closure_threshold(params)
    start = time.time()
    histogram: Counter[int] = Counter()
    nontrivial = 0
    for family in iter_intersecting_families(n, k, max_vertices=max_vertices):
        if classify_family(family).trivial:
            continue
        nontrivial += 1
        image = phi_map(family)
        top = graph.top_pattern(list(image.top))
        histogram[graph.closure(top).bit_count()] += 1

    small = sum(count for a, count in histogram.items() if a <= threshold)
    return ClosureProfileReport(
        n=n,
        k=k,
        threshold=threshold,
        histogram=dict(sorted(histogram.items())),
        small=small,
        large=sum(histogram.values()) - small,
        nontrivial=nontrivial,
        run=RunInfo(wall_time=time.time() - start, workers=1),
    )


# Independent sets of the containment graph


@dataclass(frozen=True)
class ComponentDecomposition:
    """An independent set I of H with the 2-linked structure of its top part."""
    top: int
    bottom: int
    components: tuple[int, ...]
    component_stats: tuple[tuple[int, int], ...]
    a: int
    g: int
    container: tuple[int, int]
    bucket: str

    def to_dict(self, graph: ContainmentGraph) -> dict:
        return {
            "top": graph.describe(self.top, Side.X),
            "bottom": graph.describe(self.bottom, Side.Y),
            "components": [graph.describe(c, Side.X) for c in self.components],
            "component_stats": [{"a": a, "g": g} for a, g in self.component_stats],
            "a": self.a,
            "g": self.g,
            "bucket": self.bucket,
        }


def closure_classifier(params: LayerGraphParams) -> Callable[[int], str]:
    """Bucket a closure size as empty, small (up to the threshold) or large."""
    threshold = closure_threshold(params)

    def classify(a: int) -> str:
        if a == 0:
            return "empty"
        return "small" if a <= threshold else "large"

    return classify


def _submasks(mask: int) -> Iterator[int]:
    """Sub-patterns of ``mask`` in increasing order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def enumerate_independent_sets(
    params: LayerGraphParams,
    classifier: Callable[[int], str] | None = None,
    max_vertices: int = LAYER_CAP,
) -> Iterator[ComponentDecomposition]:
    """
    Yield every independent set of H(n, k, r) exactly once, with its decomposition.

    The top part T is any subset of the top layer; the bottom part is any
    subset of the bottom vertices outside N(T).

    Raises:
        CapExceededError: If the two layers together exceed ``max_vertices``
    """
    _check_cap("|L_{k-1}| + |L_{k+r-1}|", params.top_size + params.bottom_size, max_vertices)
    graph = ContainmentGraph(params)
    classify = classifier or closure_classifier(params)
    full_bottom = graph.full(Side.Y)
    for top in range(1 << graph.x_count):
        outer = graph.neighborhood(top)
        free = full_bottom & ~outer
        components = tuple(graph.linked_components(top, Side.X, 2))
        stats = tuple(
            (graph.closure(c).bit_count(), graph.neighborhood(c).bit_count()) for c in components
        )
        a = graph.closure(top).bit_count()
        bucket = classify(a)
        for bottom in _submasks(free):
            yield ComponentDecomposition(
                top=top,
                bottom=bottom,
                components=components,
                component_stats=stats,
                a=a,
                g=outer.bit_count(),
                container=(top, free),
                bucket=bucket,
            )


def count_independent_sets_by_bottom(params: LayerGraphParams, max_vertices: int = LAYER_CAP) -> int:
    """Independent sets of H counted from the bottom side: sum over B of 2^|X - N(B)|."""
    _check_cap("|L_{k-1}| + |L_{k+r-1}|", params.top_size + params.bottom_size, max_vertices)
    graph = ContainmentGraph(params)
    total = 0
    for bottom in range(1 << graph.y_count):
        blocked = graph.neighborhood(bottom, Side.Y)
        total += 1 << (graph.x_count - blocked.bit_count())
    return total


def verify_C_partition(params: LayerGraphParams, max_vertices: int = LAYER_CAP) -> PartitionReport:
    """
    Group the independent sets of H by their container set C and check group sizes.

    Every group must hold exactly 2^(|L_{k-1}| - g) sets, g being the size of
    the neighbourhood shared by the group. The number C_g of groups per g is
    reported, and sum_g C_g 2^(|L_{k-1}| - g) must give the total.
    """
    start = time.time()
    graph = ContainmentGraph(params)
    sizes: Counter[tuple[int, int]] = Counter()
    shared_g: dict[tuple[int, int], int] = {}
    for item in enumerate_independent_sets(params, max_vertices=max_vertices):
        sizes[item.container] += 1
        shared_g[item.container] = item.g

    mismatches = []
    for container, size in sorted(sizes.items()):
        expected = 1 << (params.bottom_size - shared_g[container])
        if size != expected:
            top, free = container
            mismatches.append({
                "C_top": graph.describe(top, Side.X),
                "C_bottom": graph.describe(free, Side.Y),
                "size": str(size),
                "expected": str(expected),
            })

    report = PartitionReport(
        params=params.to_dict(),
        groups=len(sizes),
        total=sum(sizes.values()),
        oracle_total=count_independent_sets_by_bottom(params, max_vertices=max_vertices),
        bottom_size=params.bottom_size,
        mismatches=mismatches,
        containers_by_g=dict(sorted(Counter(shared_g.values()).items())),
        run=RunInfo(wall_time=time.time() - start, workers=1),
    )
    logger.info("C-partition on %s: %d groups, passed=%s", params.label(), report.groups, report.passed)
    return report


def phi_images_report(n: int, k: int, max_vertices: int = RAW_CAP) -> dict:
    """
    Encode every intersecting family and check independence, size and injectivity.

    Returns:
        Counts of families, collisions, dependent images, size mismatches
        and images the inverse map fails to restore
    """
    seen: dict[tuple, list[list[int]]] = {}
    collisions = dependent = size_mismatch = unrestored = families = 0
    for family in iter_intersecting_families(n, k, max_vertices=max_vertices):
        if not family.members:
            continue
        families += 1
        image = phi_map(family)
        if not image.independent:
            dependent += 1
        if image.size != len(family):
            size_mismatch += 1
        if phi_inverse(image) != family:
            unrestored += 1
        key = image.key()
        if key in seen:
            collisions += 1
            logger.warning("phi collision: %s and %s", seen[key], family.sets())
        else:
            seen[key] = [list(s) for s in family.sets()]
    return {
        "n": n,
        "k": k,
        "families": families,
        "collisions": collisions,
        "dependent": dependent,
        "size_mismatch": size_mismatch,
        "unrestored": unrestored,
    }

