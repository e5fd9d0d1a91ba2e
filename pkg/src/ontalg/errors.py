"""Error types and the small check-result record shared by every module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class OntalgError(ValueError):
    """A checked domain error.

    ``code`` is a stable, machine-readable identifier such as
    ``"carrier-mismatch"`` or ``"not-liftable"``; ``witness`` carries the
    offending data when there is some.
    """

    def __init__(self, code: str, message: str = "", witness: Any = None):
        self.code = code
        self.message = message or code
        self.witness = witness
        super().__init__(f"{code}: {self.message}")


class Refutation(OntalgError):
    """Raised when an implication that must always hold was observed to fail."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__("refutation", message, witness)


@dataclass(frozen=True)
class Check:
    """Outcome of a predicate that can explain a negative answer.

    Truthiness follows ``ok``; ``witness`` and ``reason`` are only set on
    failure.
    """

    ok: bool
    witness: Any = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


PASS = Check(True)
