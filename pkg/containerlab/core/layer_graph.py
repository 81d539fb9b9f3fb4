"""
Biregular bipartite graphs and the containment graph between two layers.

Vertex sets are bit patterns over a part's index space. For the containment
graph the index of a vertex is the colex rank of the subset it stands for,
so index order is the library-wide vertex ordering.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path

import networkx as nx

from containerlab.core.combinatorics import (
    MAX_GROUND,
    binomial,
    bit_indices,
    colex_rank,
    colex_unrank,
    elements_of,
    sub_masks_of_size,
)
from containerlab.errors import CapExceededError, PropertyViolation

logger = logging.getLogger(__name__)


class Side(Enum):
    """The two parts of a bipartite graph."""
    X = "X"
    Y = "Y"

    @property
    def other(self) -> Side:
        return Side.Y if self is Side.X else Side.X


@dataclass(frozen=True)
class LayerGraphParams:
    """Parameters of the containment graph H(n, k, r) with n = 2k + r."""
    n: int
    k: int
    r: int

    def __post_init__(self) -> None:
        if self.n != 2 * self.k + self.r:
            raise ValueError(f"need n = 2k + r, got n={self.n}, k={self.k}, r={self.r}")
        if self.k < 2:
            raise ValueError(f"the containment graph needs k >= 2, got k={self.k}")
        if self.r < 1:
            raise ValueError(f"the containment graph needs r >= 1, got r={self.r}")
        if self.ground > MAX_GROUND:
            raise ValueError(f"ground set of size {self.ground} exceeds {MAX_GROUND}")

    @classmethod
    def from_kr(cls, k: int, r: int) -> LayerGraphParams:
        return cls(n=2 * k + r, k=k, r=r)

    @property
    def ground(self) -> int:
        """Size of the ground set [n - 1]."""
        return self.n - 1

    @property
    def top_level(self) -> int:
        return self.k + self.r - 1

    @property
    def bottom_level(self) -> int:
        return self.k - 1

    @property
    def q(self) -> int:
        """Degree of a top vertex, also called d."""
        return binomial(self.k + self.r - 1, self.k - 1)

    @property
    def d(self) -> int:
        return self.q

    @property
    def s(self) -> int:
        """Degree of a bottom vertex."""
        return binomial(self.k + self.r, self.r)

    @property
    def top_size(self) -> int:
        return binomial(self.ground, self.top_level)

    @property
    def bottom_size(self) -> int:
        return binomial(self.ground, self.bottom_level)

    def label(self) -> str:
        return f"H({self.n},{self.k},{self.r})"

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "r": self.r, "q": self.q, "s": self.s}


@dataclass(frozen=True)
class BiregularReport:
    """Outcome of a degree scan."""
    ok: bool
    q: int
    s: int
    violations: tuple[tuple[Side, int, int], ...] = ()

    @property
    def first_violation(self) -> tuple[Side, int, int] | None:
        return self.violations[0] if self.violations else None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "q": self.q,
            "s": self.s,
            "violations": [
                {"side": side.value, "vertex": index, "degree": degree}
                for side, index, degree in self.violations
            ],
        }


class BiregularGraph(ABC):
    """
    Abstract bipartite graph with parts X and Y.

    Subclasses provide part sizes and neighbour patterns; everything else
    (neighbourhoods, closures, balls, linked components) is derived here.
    """

    def __init__(self) -> None:
        self._balls: dict[tuple[Side, int, int], int] = {}
        self._degrees: tuple[int, int] | None = None

    @property
    @abstractmethod
    def name(self) -> str:
        """Short human-readable name."""
        pass

    @property
    @abstractmethod
    def x_count(self) -> int:
        pass

    @property
    @abstractmethod
    def y_count(self) -> int:
        pass

    @abstractmethod
    def x_neighbors(self, index: int) -> int:
        """Neighbours of X-vertex ``index`` as a pattern over Y."""
        pass

    @abstractmethod
    def y_neighbors(self, index: int) -> int:
        """Neighbours of Y-vertex ``index`` as a pattern over X."""
        pass

    def vertex_label(self, side: Side, index: int) -> str:
        return f"{side.value.lower()}{index}"

    def count(self, side: Side) -> int:
        return self.x_count if side is Side.X else self.y_count

    def full(self, side: Side) -> int:
        return (1 << self.count(side)) - 1

    def neighbors(self, side: Side, index: int) -> int:
        return self.x_neighbors(index) if side is Side.X else self.y_neighbors(index)

    @property
    def degrees(self) -> tuple[int, int]:
        """
        The degree pair (q, s).

        Raises:
            PropertyViolation: If the graph is not biregular
        """
        if self._degrees is None:
            report = biregular_check(self)
            if not report.ok:
                raise PropertyViolation(
                    f"{self.name} is not biregular", {"degree_scan": report.to_dict()}
                )
            self._degrees = (report.q, report.s)
        return self._degrees

    def neighborhood(self, mask: int, side: Side = Side.X) -> int:
        """N(A) for A given as a pattern on ``side``."""
        result = 0
        for i in bit_indices(mask):
            result |= self.neighbors(side, i)
        return result

    def closure(self, mask: int) -> int:
        """[A] = {v in X : N(v) is inside N(A)} for A inside X."""
        outer = self.neighborhood(mask, Side.X)
        candidates = self.neighborhood(outer, Side.Y)
        closed = 0
        for v in bit_indices(candidates):
            if self.x_neighbors(v) & ~outer == 0:
                closed |= 1 << v
        return closed

    def degree_into(self, side: Side, index: int, mask: int) -> int:
        """Number of neighbours of a vertex inside ``mask``."""
        return (self.neighbors(side, index) & mask).bit_count()

    def edge_count(self, y_mask: int, x_mask: int) -> int:
        """e(T, S) for T inside Y and S inside X."""
        return sum((self.y_neighbors(j) & x_mask).bit_count() for j in bit_indices(y_mask))

    def ball(self, side: Side, index: int, radius: int) -> int:
        """Same-side vertices within graph distance ``radius`` of a vertex."""
        key = (side, index, radius)
        cached = self._balls.get(key)
        if cached is not None:
            return cached

        same = frontier_same = 1 << index
        other = frontier_other = 0
        for step in range(1, radius + 1):
            if step % 2:
                fresh = self.neighborhood(frontier_same, side) & ~other
                other |= fresh
                frontier_other = fresh
            else:
                fresh = self.neighborhood(frontier_other, side.other) & ~same
                same |= fresh
                frontier_same = fresh
            if not fresh:
                break

        self._balls[key] = same
        return same

    def link_graph(self, mask: int, side: Side, distance: int) -> nx.Graph:
        """Graph on the vertices of ``mask`` joining pairs at distance <= ``distance``."""
        graph = nx.Graph()
        members = list(bit_indices(mask))
        graph.add_nodes_from(members)
        for u in members:
            near = self.ball(side, u, distance) & mask
            for v in bit_indices(near):
                if v > u:
                    graph.add_edge(u, v)
        return graph

    def linked_components(self, mask: int, side: Side = Side.X, m: int = 2) -> list[int]:
        """
        Partition ``mask`` into maximal m-linked subsets.

        Returns:
            Component patterns, ordered by their lowest vertex
        """
        if m < 1:
            raise ValueError(f"link parameter must be positive, got {m}")
        graph = self.link_graph(mask, side, m)
        parts = []
        for component in nx.connected_components(graph):
            part = 0
            for v in component:
                part |= 1 << v
            parts.append(part)
        parts.sort(key=lambda p: p & -p)
        return parts

    def is_linked(self, mask: int, side: Side = Side.X, m: int = 2) -> bool:
        return mask != 0 and len(self.linked_components(mask, side, m)) == 1

    def describe(self, mask: int, side: Side) -> list[str]:
        return [self.vertex_label(side, i) for i in bit_indices(mask)]


class ContainmentGraph(BiregularGraph):
    """
    The containment graph H(n, k, r).

    X is the layer of (k+r-1)-subsets of [n-1] and Y the layer of
    (k-1)-subsets; two vertices are adjacent when one set contains the
    other. Adjacency is generated on demand from the bit patterns.
    """

    def __init__(self, params: LayerGraphParams):
        super().__init__()
        self.params = params
        self._x_cache: dict[int, int] = {}
        self._y_cache: dict[int, int] = {}

    @property
    def name(self) -> str:
        return self.params.label()

    @property
    def x_count(self) -> int:
        return self.params.top_size

    @property
    def y_count(self) -> int:
        return self.params.bottom_size

    @property
    def degrees(self) -> tuple[int, int]:
        return (self.params.q, self.params.s)

    def top_member(self, index: int) -> int:
        return colex_unrank(index, self.params.top_level, self.params.ground)

    def bottom_member(self, index: int) -> int:
        return colex_unrank(index, self.params.bottom_level, self.params.ground)

    def top_index(self, member: int) -> int:
        self._check_member(member, self.params.top_level)
        return colex_rank(member)

    def bottom_index(self, member: int) -> int:
        self._check_member(member, self.params.bottom_level)
        return colex_rank(member)

    def top_pattern(self, members: list[int]) -> int:
        """Vertex pattern over X of a list of (k+r-1)-subsets."""
        mask = 0
        for member in members:
            mask |= 1 << self.top_index(member)
        return mask

    def bottom_pattern(self, members: list[int]) -> int:
        mask = 0
        for member in members:
            mask |= 1 << self.bottom_index(member)
        return mask

    def _check_member(self, member: int, level: int) -> None:
        if member.bit_count() != level or member >> self.params.ground:
            raise ValueError(
                f"{elements_of(member)} is not a {level}-subset of [{self.params.ground}]"
            )

    def x_neighbors(self, index: int) -> int:
        cached = self._x_cache.get(index)
        if cached is None:
            cached = 0
            for sub in sub_masks_of_size(self.top_member(index), self.params.bottom_level):
                cached |= 1 << colex_rank(sub)
            self._x_cache[index] = cached
        return cached

    def y_neighbors(self, index: int) -> int:
        cached = self._y_cache.get(index)
        if cached is None:
            member = self.bottom_member(index)
            outside = ((1 << self.params.ground) - 1) & ~member
            cached = 0
            for extra in sub_masks_of_size(outside, self.params.r):
                cached |= 1 << colex_rank(member | extra)
            self._y_cache[index] = cached
        return cached

    def vertex_label(self, side: Side, index: int) -> str:
        member = self.top_member(index) if side is Side.X else self.bottom_member(index)
        return "{" + ",".join(str(e) for e in elements_of(member)) + "}"


class EdgeListGraph(BiregularGraph):
    """Explicit bipartite graph given by its edge list."""

    def __init__(self, x_count: int, y_count: int, edges: list[tuple[int, int]], name: str = "edge-list"):
        super().__init__()
        if x_count < 0 or y_count < 0:
            raise ValueError("part sizes must be non-negative")
        self._name = name
        self._x_count = x_count
        self._y_count = y_count
        self._x_adj = [0] * x_count
        self._y_adj = [0] * y_count
        for x, y in edges:
            if not (0 <= x < x_count and 0 <= y < y_count):
                raise ValueError(f"edge ({x}, {y}) outside parts of sizes {x_count}, {y_count}")
            self._x_adj[x] |= 1 << y
            self._y_adj[y] |= 1 << x

    @property
    def name(self) -> str:
        return self._name

    @property
    def x_count(self) -> int:
        return self._x_count

    @property
    def y_count(self) -> int:
        return self._y_count

    def x_neighbors(self, index: int) -> int:
        return self._x_adj[index]

    def y_neighbors(self, index: int) -> int:
        return self._y_adj[index]

    def edges(self) -> Iterator[tuple[int, int]]:
        for x, adj in enumerate(self._x_adj):
            for y in bit_indices(adj):
                yield (x, y)

    def without_edge(self, x: int, y: int) -> EdgeListGraph:
        kept = [e for e in self.edges() if e != (x, y)]
        return EdgeListGraph(self._x_count, self._y_count, kept, name=f"{self._name}-({x},{y})")

    @classmethod
    def from_text(cls, text: str, name: str = "edge-list") -> EdgeListGraph:
        """
        Parse the edge-list format.

        The first non-comment line is ``X <count> Y <count>``; each further
        line holds one ``x y`` index pair. ``#`` starts a comment.

        Raises:
            ValueError: On a malformed header or edge line
        """
        header: tuple[int, int] | None = None
        edges: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if header is None:
                if len(tokens) != 4 or tokens[0] != "X" or tokens[2] != "Y":
                    raise ValueError(f"line {lineno}: expected 'X <count> Y <count>', got {raw!r}")
                try:
                    header = (int(tokens[1]), int(tokens[3]))
                except ValueError as e:
                    raise ValueError(f"line {lineno}: part sizes must be integers") from e
                continue
            if len(tokens) != 2:
                raise ValueError(f"line {lineno}: expected 'x y', got {raw!r}")
            try:
                edges.append((int(tokens[0]), int(tokens[1])))
            except ValueError as e:
                raise ValueError(f"line {lineno}: vertex indices must be integers") from e
        if header is None:
            raise ValueError("edge list is empty")
        return cls(header[0], header[1], edges, name=name)

    @classmethod
    def from_file(cls, path: str | Path) -> EdgeListGraph:
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), name=path.stem)

    def to_text(self) -> str:
        lines = [f"X {self._x_count} Y {self._y_count}"]
        lines.extend(f"{x} {y}" for x, y in self.edges())
        return "\n".join(lines) + "\n"


def cycle_graph(length: int) -> EdgeListGraph:
    """An even cycle as a (2,2)-biregular graph: x_i ~ y_i and x_i ~ y_{i-1}."""
    if length < 4 or length % 2:
        raise ValueError(f"cycle length must be even and at least 4, got {length}")
    half = length // 2
    edges = []
    for i in range(half):
        edges.append((i, i))
        edges.append((i, (i - 1) % half))
    return EdgeListGraph(half, half, edges, name=f"C{length}")


def complete_bipartite(x_count: int, y_count: int) -> EdgeListGraph:
    edges = [(x, y) for x in range(x_count) for y in range(y_count)]
    return EdgeListGraph(x_count, y_count, edges, name=f"K{x_count},{y_count}")


def biregular_check(graph: BiregularGraph) -> BiregularReport:
    """
    Scan vertex degrees on both parts.

    The expected degree on a part is its most common degree (ties go to the
    larger value); every vertex that deviates is reported, X before Y, in
    index order.
    """
    expected: dict[Side, int] = {}
    violations: list[tuple[Side, int, int]] = []
    for side in (Side.X, Side.Y):
        degrees = [graph.neighbors(side, i).bit_count() for i in range(graph.count(side))]
        if not degrees:
            expected[side] = 0
            continue
        tally = Counter(degrees)
        expected[side] = max(tally, key=lambda deg: (tally[deg], deg))
        violations.extend(
            (side, i, deg) for i, deg in enumerate(degrees) if deg != expected[side]
        )
    if violations:
        logger.debug("%s is not biregular: %d offending vertices", graph.name, len(violations))
    return BiregularReport(
        ok=not violations,
        q=expected[Side.X],
        s=expected[Side.Y],
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class DBounds:
    """The sandwich (k/r)^r <= d <= (10k/r)^r."""
    k: int
    r: int
    d: int
    lower: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.d <= self.upper


def d_bounds(k: int, r: int) -> DBounds:
    if k < 1 or r < 1:
        raise ValueError(f"need k, r >= 1, got k={k}, r={r}")
    return DBounds(
        k=k,
        r=r,
        d=binomial(k + r - 1, k - 1),
        lower=(k / r) ** r,
        upper=(10 * k / r) ** r,
    )


@dataclass(frozen=True)
class LinkedSubsetCount:
    """Exact count of 2m-linked subsets through a vertex, with its bound."""
    vertex: int
    size: int
    m: int
    count: int
    log_bound: float
    subsets: tuple[int, ...] = field(default=(), repr=False)

    @property
    def holds(self) -> bool:
        return self.count == 0 or math.log(self.count) <= self.log_bound

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "size": self.size,
            "m": self.m,
            "count": str(self.count),
            "log_bound": self.log_bound,
            "holds": self.holds,
        }


def count_linked_subsets(
    graph: BiregularGraph,
    vertex: int,
    size: int,
    m: int,
    max_candidates: int = 10**6,
) -> LinkedSubsetCount:
    """
    Count the 2m-linked subsets of X of a given size that contain ``vertex``.

    The count is compared with exp(2 * size * m * ln(qs)).

    Raises:
        CapExceededError: If more than ``max_candidates`` subsets would be scanned
        PropertyViolation: If the count exceeds the bound
    """
    if size < 1 or m < 1:
        raise ValueError(f"need size >= 1 and m >= 1, got size={size}, m={m}")
    if not 0 <= vertex < graph.x_count:
        raise ValueError(f"vertex {vertex} outside X")
    candidates = binomial(graph.x_count - 1, size - 1)
    if candidates > max_candidates:
        raise CapExceededError("candidate linked subsets", candidates, max_candidates)

    q, s = graph.degrees
    link = graph.link_graph(graph.full(Side.X), Side.X, 2 * m)
    others = [u for u in range(graph.x_count) if u != vertex]
    found = []
    for rest in combinations(others, size - 1):
        members = (vertex, *rest)
        if size == 1 or nx.is_connected(link.subgraph(members)):
            mask = 0
            for u in members:
                mask |= 1 << u
            found.append(mask)

    result = LinkedSubsetCount(
        vertex=vertex,
        size=size,
        m=m,
        count=len(found),
        log_bound=2 * size * m * math.log(q * s),
        subsets=tuple(found),
    )
    if not result.holds:
        raise PropertyViolation("linked-subset count exceeds its bound", result.to_dict())
    return result
