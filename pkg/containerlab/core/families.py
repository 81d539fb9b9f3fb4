"""
Intersecting-family predicates, the phi encoding and star geometry.
"""

from __future__ import annotations

import logging
from collections import Counter

import networkx as nx

from containerlab.core.combinatorics import binomial, elements_of, iter_k_subsets
from containerlab.models.family import (
    FamilyClass,
    KFamily,
    NiceReport,
    PhiImage,
    StarDistance,
)

logger = logging.getLogger(__name__)


def is_intersecting(family: KFamily) -> bool:
    """True iff every two members share an element."""
    members = family.members
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if a & b == 0:
                return False
    return True


def element_frequencies(family: KFamily) -> Counter[int]:
    counts: Counter[int] = Counter()
    for member in family:
        counts.update(elements_of(member))
    return counts


def frequent_element(family: KFamily) -> int:
    """
    The most frequent element; ties go to the largest label.

    Raises:
        ValueError: If the family is empty
    """
    if not family.members:
        raise ValueError("an empty family has no frequent element")
    counts = element_frequencies(family)
    return max(counts, key=lambda e: (counts[e], e))


def _swap(mask: int, i: int, j: int) -> int:
    """Exchange bits i and j."""
    if ((mask >> i) ^ (mask >> j)) & 1:
        mask ^= (1 << i) | (1 << j)
    return mask


def phi_map(family: KFamily) -> PhiImage:
    """
    Encode an intersecting family as a set pair in layers k+r-1 and k-1 of [n-1].

    The most frequent element f is swapped with n. Members avoiding n are
    replaced by their complements in [n-1]; members containing n lose it.

    Raises:
        ValueError: If the family is empty, not intersecting, or n < 2k
    """
    n, k = family.n, family.k
    if n < 2 * k:
        raise ValueError(f"the encoding needs n >= 2k, got n={n}, k={k}")
    if not is_intersecting(family):
        raise ValueError("the encoding is defined for intersecting families only")
    f = frequent_element(family)

    last = n - 1
    rest = (1 << last) - 1
    top = []
    bottom = []
    for member in family:
        moved = _swap(member, f - 1, last)
        if moved >> last & 1:
            bottom.append(moved & rest)
        else:
            top.append(rest & ~moved)

    image = PhiImage(f=f, n=n, k=k, top=tuple(sorted(top)), bottom=tuple(sorted(bottom)))
    logger.debug("phi: f=%d |A|=%d |B|=%d", f, len(image.top), len(image.bottom))
    return image


def phi_inverse(image: PhiImage) -> KFamily:
    """Recover the family encoded by :func:`phi_map`."""
    last = image.n - 1
    rest = (1 << last) - 1
    members = [rest & ~a for a in image.top]
    members.extend(b | (1 << last) for b in image.bottom)
    restored = [_swap(m, image.f - 1, last) for m in members]
    return KFamily(n=image.n, k=image.k, members=tuple(restored))


def classify_family(family: KFamily) -> FamilyClass:
    """
    Trivial iff some element lies in every member.

    The empty family is trivial with every element as a center and is
    flagged degenerate.
    """
    if not family.members:
        return FamilyClass(trivial=True, centers=tuple(range(1, family.n + 1)), degenerate=True)
    common = (1 << family.n) - 1
    for member in family:
        common &= member
    return FamilyClass(trivial=common != 0, centers=elements_of(common))


def is_maximal(family: KFamily) -> bool:
    """No further k-subset can be added while keeping the family intersecting."""
    for candidate in iter_k_subsets(family.n, family.k):
        if candidate in family:
            continue
        if all(candidate & m for m in family):
            return False
    return True


def maximal_completion(family: KFamily) -> KFamily:
    """
    Extend an intersecting family to a maximal one, greedily in colex order.

    Raises:
        ValueError: If the family is not intersecting
    """
    if not is_intersecting(family):
        raise ValueError("only intersecting families can be completed")
    members = list(family.members)
    present = set(members)
    for candidate in iter_k_subsets(family.n, family.k):
        if candidate not in present and all(candidate & m for m in members):
            members.append(candidate)
            present.add(candidate)
    return KFamily(n=family.n, k=family.k, members=tuple(members))


def hilton_milner_bound(n: int, k: int) -> int:
    """
    Largest size of a non-trivial k-uniform intersecting family on [n].

    Raises:
        ValueError: If n < 2k + 1
    """
    if k < 1 or n < 2 * k + 1:
        raise ValueError(f"the Hilton-Milner bound needs n >= 2k + 1, got n={n}, k={k}")
    return binomial(n - 1, k - 1) - binomial(n - k - 1, k - 1) + 1


def star_size(n: int, k: int) -> int:
    return binomial(n - 1, k - 1)


def nearest_star(family: KFamily) -> StarDistance:
    """
    The full star closest to the family in symmetric difference.

    Ties go to the largest center. Alongside the distance the result carries
    alpha = 1 - |F|/C(n-1,k-1) and, when alpha > 0 and n > 2k, the empirical
    constant distance / (alpha * n/(n-2k) * C(n-1,k-1)).
    """
    n, k = family.n, family.k
    star = star_size(n, k)
    counts = element_frequencies(family)
    size = len(family)

    best_center, best_distance = n, size + star - 2 * counts[n]
    for x in range(n - 1, 0, -1):
        distance = size + star - 2 * counts[x]
        if distance < best_distance:
            best_center, best_distance = x, distance

    alpha = 1 - size / star
    implied: float | None = None
    if alpha > 0 and n > 2 * k:
        implied = best_distance / (alpha * n / (n - 2 * k) * star)
    return StarDistance(
        center=best_center,
        distance=best_distance,
        alpha=alpha,
        implied_constant=implied,
    )


def is_nice(family: KFamily) -> NiceReport:
    """
    Test niceness for n = 2k + 1.

    An index i witnesses niceness when the members avoiding i form a graph
    (edges between sets meeting in k-1 elements) with components of size at
    most 2, and every member avoiding i meets every member containing i.

    Raises:
        ValueError: If n != 2k + 1
    """
    n, k = family.n, family.k
    if n != 2 * k + 1:
        raise ValueError(f"niceness is defined for n = 2k + 1, got n={n}, k={k}")

    witnesses = []
    largest: dict[int, int] = {}
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        avoiding = [m for m in family if not m & bit]
        containing = [m for m in family if m & bit]

        graph = nx.Graph()
        graph.add_nodes_from(avoiding)
        for a_idx, a in enumerate(avoiding):
            for b in avoiding[a_idx + 1:]:
                if (a & b).bit_count() == k - 1:
                    graph.add_edge(a, b)
        sizes = [len(c) for c in nx.connected_components(graph)]
        largest[i] = max(sizes, default=0)

        crossing = all(a & c for a in avoiding for c in containing)
        if largest[i] <= 2 and crossing:
            witnesses.append(i)

    return NiceReport(nice=bool(witnesses), witnesses=tuple(witnesses), largest_component=largest)
