"""
Data models for uniform set families and their encodings.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path

from containerlab.core.combinatorics import MAX_GROUND, elements_of, mask_of


def format_set(mask: int) -> str:
    """Render a bit pattern as ``{1,2,3}``."""
    return "{" + ",".join(str(e) for e in elements_of(mask)) + "}"


@dataclass(frozen=True)
class KFamily:
    """
    A duplicate-free family of k-subsets of [n], kept in colex order.

    Members are bit patterns; colex order is integer order.
    """
    n: int
    k: int
    members: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n <= MAX_GROUND:
            raise ValueError(f"need 1 <= k <= n <= {MAX_GROUND}, got n={self.n}, k={self.k}")
        for member in self.members:
            if member.bit_count() != self.k or member >> self.n:
                raise ValueError(f"{format_set(member)} is not a {self.k}-subset of [{self.n}]")
        canonical = tuple(sorted(self.members))
        if len(set(canonical)) != len(canonical):
            raise ValueError("family members must be distinct")
        object.__setattr__(self, "members", canonical)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, member: object) -> bool:
        return member in self.members

    @property
    def r(self) -> int:
        return self.n - 2 * self.k

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> KFamily:
        """Build a family from sets of 1-based labels."""
        return cls(n=n, k=k, members=tuple(mask_of(s) for s in sets))

    @classmethod
    def parse_inline(cls, text: str, n: int, k: int | None = None) -> KFamily:
        """
        Parse the inline syntax ``1,2;1,3;2,3``.

        Args:
            text: Sets separated by ``;``, elements by ``,``
            n: Ground set size
            k: Uniformity (inferred from the first set when omitted)

        Raises:
            ValueError: If the text is malformed or k cannot be inferred
        """
        sets = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                sets.append([int(tok) for tok in chunk.split(",")])
            except ValueError as e:
                raise ValueError(f"bad set {chunk!r} in inline family") from e
        if k is None:
            if not sets:
                raise ValueError("cannot infer k from an empty inline family")
            k = len(sets[0])
        return cls.from_sets(n, k, sets)

    @classmethod
    def from_text(cls, text: str) -> KFamily:
        """
        Parse the family file format: a header ``n k`` then one set per line.

        Raises:
            ValueError: On a malformed header or set line
        """
        lines = [
            line.split("#", 1)[0].strip() for line in text.splitlines()
        ]
        lines = [line for line in lines if line]
        if not lines:
            raise ValueError("family file is empty")
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError(f"expected header 'n k', got {lines[0]!r}")
        try:
            n, k = int(header[0]), int(header[1])
            sets = [[int(tok) for tok in line.split()] for line in lines[1:]]
        except ValueError as e:
            raise ValueError(f"family file contains a non-integer token: {e}") from e
        return cls.from_sets(n, k, sets)

    @classmethod
    def from_file(cls, path: str | Path) -> KFamily:
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k}"]
        lines.extend(" ".join(str(e) for e in elements_of(m)) for m in self.members)
        return "\n".join(lines) + "\n"

    def sets(self) -> list[tuple[int, ...]]:
        return [elements_of(m) for m in self.members]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "size": len(self.members),
            "members": [list(s) for s in self.sets()],
        }


@dataclass(frozen=True)
class PhiImage:
    """
    Encoding of an intersecting family as a set pair in two layers of [n-1].

    ``top`` holds (k+r-1)-subsets, ``bottom`` holds (k-1)-subsets, after the
    most frequent element ``f`` has been swapped with n.
    """
    f: int
    n: int
    k: int
    top: tuple[int, ...]
    bottom: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.top) + len(self.bottom)

    @property
    def independent(self) -> bool:
        """No bottom set is contained in a top set."""
        return not any(b & ~a == 0 for a in self.top for b in self.bottom)

    def key(self) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        return (self.f, self.top, self.bottom)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "f": self.f,
            "A": [list(elements_of(m)) for m in self.top],
            "B": [list(elements_of(m)) for m in self.bottom],
            "size_A": len(self.top),
            "size_B": len(self.bottom),
            "independent": self.independent,
        }


@dataclass(frozen=True)
class FamilyClass:
    """Trivial/non-trivial classification."""
    trivial: bool
    centers: tuple[int, ...] = ()
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "trivial": self.trivial,
            "centers": list(self.centers),
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class StarDistance:
    """Distance from a family to its nearest full star."""
    center: int
    distance: int
    alpha: float
    implied_constant: float | None = None

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "distance": self.distance,
            "alpha": self.alpha,
            "implied_constant": self.implied_constant,
        }


@dataclass(frozen=True)
class NiceReport:
    """Which indices witness niceness (components of size <= 2)."""
    nice: bool
    witnesses: tuple[int, ...] = field(default=())
    largest_component: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "nice": self.nice,
            "witnesses": list(self.witnesses),
            "largest_component": {str(i): size for i, size in self.largest_component.items()},
        }
