"""
Exact binomial machinery, compositions and colex ranking.

Subsets of a ground set [N] (N <= 64) are Python ints used as bit patterns:
element ``e`` (1-based label) is bit ``e - 1``. Colex order on k-subsets is
then plain integer order of the patterns.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator
from itertools import combinations

from containerlab.errors import ConvergenceError, PropertyViolation

logger = logging.getLogger(__name__)

MAX_GROUND = 64


def binomial(n: int, k: int) -> int:
    """
    Exact binomial coefficient.

    Args:
        n: Non-negative integer
        k: Non-negative integer

    Returns:
        C(n, k), which is 0 when k > n

    Raises:
        ValueError: If n or k is negative
    """
    if n < 0 or k < 0:
        raise ValueError(f"binomial needs non-negative arguments, got ({n}, {k})")
    return math.comb(n, k)


def binomial_at_most(n: float, k: float) -> int:
    """
    C(n, <= k): the number of subsets of size at most k of an n-set.

    Real arguments are floored; a negative k gives 0.
    """
    top, limit = math.floor(n), math.floor(k)
    if top < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if limit < 0:
        return 0
    if limit >= top:
        return 1 << top
    return sum(math.comb(top, i) for i in range(limit + 1))


def real_binomial(x: float, m: int) -> float:
    """Falling-factorial binomial x(x-1)...(x-m+1)/m! for real x."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    value = 1.0
    for i in range(m):
        value *= x - i
    return value / math.factorial(m)


def real_binomial_root(
    m: int,
    target: float,
    rel_tol: float = 1e-9,
    max_iter: int = 400,
) -> float:
    """
    Solve C(x, m) = target for the unique real x >= m - 1.

    C(., m) is strictly increasing on [m - 1, inf), so bisection on a
    doubling bracket converges.

    Args:
        m: Positive integer level
        target: Value to hit, at least 1
        rel_tol: Required relative accuracy of C(x, m)
        max_iter: Bisection budget

    Returns:
        x with |C(x, m) - target| <= rel_tol * target

    Raises:
        ValueError: If m < 1 or target < 1
        ConvergenceError: If the budget runs out
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if target < 1:
        raise ValueError(f"target must be at least 1, got {target}")

    t = float(target)
    lo = float(m - 1)
    hi = lo + t
    while real_binomial(hi, m) < t:
        hi = lo + 2 * (hi - lo)

    for _ in range(max_iter):
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if real_binomial(mid, m) < t:
            lo = mid
        else:
            hi = mid

    x = (lo + hi) / 2
    error = abs(real_binomial(x, m) - t)
    if error > rel_tol * t:
        raise ConvergenceError(
            f"bisection for C(x, {m}) = {target} did not converge",
            {"m": m, "target": t, "x": x, "error": error},
        )
    return x


def compositions(n: int, max_parts: int | None = None) -> int:
    """
    Count compositions of n, optionally with at most ``max_parts`` parts.

    With ``max_parts = b`` the count is sum_{i<b} C(n-1, i); when b < n/2
    it is also checked against (e*n/b)^b.

    Raises:
        ValueError: If n < 1 or max_parts < 1
        PropertyViolation: If the bounded-parts estimate fails
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if max_parts is None:
        return 1 << (n - 1)
    if max_parts < 1:
        raise ValueError(f"max_parts must be positive, got {max_parts}")

    b = max_parts
    count = sum(binomial(n - 1, i) for i in range(b))
    if b < n / 2:
        exponent = b * math.log2(math.e * n / b)
        if not math.log2(count) < exponent:
            raise PropertyViolation(
                "bounded-parts composition estimate failed",
                {"n": n, "max_parts": b, "count": str(count), "log2_bound": exponent},
            )
    return count


def iter_compositions(n: int, max_parts: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every composition of n (as a tuple of parts) by direct recursion."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    limit = n if max_parts is None else max_parts

    def extend(remaining: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        if len(prefix) == limit:
            return
        for part in range(1, remaining + 1):
            yield from extend(remaining - part, prefix + (part,))

    yield from extend(n, ())


def count_trivial(n: int, k: int) -> int:
    """
    Number of k-uniform families on [n] whose members share an element.

    Inclusion-exclusion over the set T of forced common elements; the empty
    family is included.
    """
    if k < 1 or n < k:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    total = 0
    for size in range(1, n + 1):
        inside = binomial(n - size, k - size) if size <= k else 0
        term = binomial(n, size) << inside
        total += term if size % 2 else -term
    return total


# Bit patterns


def mask_of(elements: Iterable[int]) -> int:
    """Bit pattern of a set of 1-based element labels."""
    mask = 0
    for e in elements:
        if not 1 <= e <= MAX_GROUND:
            raise ValueError(f"element {e} outside [1, {MAX_GROUND}]")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    """1-based element labels of a bit pattern, ascending."""
    return tuple(i + 1 for i in bit_indices(mask))


def bit_indices(mask: int) -> Iterator[int]:
    """0-based indices of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def sub_masks_of_size(mask: int, size: int) -> Iterator[int]:
    """All sub-patterns of ``mask`` with exactly ``size`` bits."""
    for chosen in combinations(bit_indices(mask), size):
        sub = 0
        for i in chosen:
            sub |= 1 << i
        yield sub


def iter_k_subsets(ground: int, k: int) -> Iterator[int]:
    """
    Yield the k-subsets of [ground] in colex order (Gosper's hack).

    Args:
        ground: Size of the ground set
        k: Subset size
    """
    if k < 0 or ground < 0:
        raise ValueError(f"need non-negative ground and k, got ({ground}, {k})")
    if k == 0:
        yield 0
        return
    if k > ground:
        return
    x = (1 << k) - 1
    limit = 1 << ground
    while x < limit:
        yield x
        low = x & -x
        ripple = x + low
        x = (((ripple ^ x) >> 2) // low) | ripple


def colex_rank(mask: int) -> int:
    """Colex index of a subset among subsets of the same size."""
    return sum(binomial(c, j + 1) for j, c in enumerate(bit_indices(mask)))


def colex_unrank(rank: int, k: int, ground: int) -> int:
    """
    Inverse of :func:`colex_rank` within the k-subsets of [ground].

    Raises:
        ValueError: If rank is outside [0, C(ground, k))
    """
    total = binomial(ground, k)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range [0, {total}) for k={k}, ground={ground}")
    mask = 0
    n = ground
    while k > 0:
        n -= 1
        offset = binomial(n, k)
        if rank >= offset:
            rank -= offset
            mask |= 1 << n
            k -= 1
    return mask
