"""
Exception types for containerlab.

The CLI maps these onto exit codes: property violations and exhausted
searches exit 1, cap refusals exit 3.
"""

from __future__ import annotations

from typing import Any


class ContainerLabError(Exception):
    """Base class for all library errors."""


class CapExceededError(ContainerLabError):
    """A desk-scale cap would be exceeded; the computation is refused."""

    def __init__(self, what: str, requested: int, cap: int):
        self.what = what
        self.requested = requested
        self.cap = cap
        super().__init__(f"{what} = {requested} exceeds the configured cap of {cap}")


class PropertyViolation(ContainerLabError):
    """An asserted identity or inequality failed."""

    def __init__(self, message: str, witness: dict[str, Any] | None = None):
        self.witness: dict[str, Any] = witness or {}
        super().__init__(message)


class ConvergenceError(ContainerLabError):
    """A bounded search ran out of budget."""

    def __init__(self, message: str, stats: dict[str, Any] | None = None):
        self.stats: dict[str, Any] = stats or {}
        super().__init__(message)

    @property
    def witness(self) -> dict[str, Any]:
        return self.stats
