"""Merging closures of repositories.

A closure is computed round by round: each round merges every aligned pair
with at least one member found in the previous round, until a round adds
nothing or the set outgrows ``cap``. Hitting the cap is not an exception;
the partial set is returned with verdict ``"cap-exceeded"``.

Repositories live either in a table system (:class:`MergingSystem`) or in
a graph algebra (:class:`GraphAlgebra`), where elements are ontologies
identified by their canonical key. Clusterings of a graph algebra are
given as a classifier function rather than a finite partition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping

from .errors import OntalgError
from .merging_system import GraphAlgebra, MergingSystem, is_compatible, quotient_system
from .relations import Partition

DEFAULT_CAP = 1000

CLOSED = "closed-finite"
CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class Repository:
    system: MergingSystem | GraphAlgebra
    members: tuple

    def __init__(self, system: MergingSystem | GraphAlgebra, members: Iterable = ()):
        members = tuple(members)
        if isinstance(system, MergingSystem):
            for m in members:
                if m not in system.carrier:
                    raise OntalgError("carrier-mismatch", f"{m!r} is not in the system's carrier", m)
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "members", members)


@dataclass(frozen=True)
class ClosureResult:
    closure: tuple[Hashable, ...]
    provenance: Mapping[Hashable, tuple]
    rounds: int
    verdict: str
    elements: Mapping[Hashable, Any] = field(repr=False, default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.verdict == CLOSED

    def to_json(self) -> dict:
        return {
            "closure": sorted(self.closure),
            "provenance": {k: list(v) for k, v in sorted(self.provenance.items())},
            "rounds": self.rounds,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class _Ops:
    aligned: Callable[[Any, Any], bool]
    merge: Callable[[Any, Any], Any]
    key: Callable[[Any], Hashable]


def _ops(system: MergingSystem | GraphAlgebra) -> _Ops:
    if isinstance(system, MergingSystem):
        return _Ops(system.aligned, lambda a, b: system.merge[(a, b)], lambda x: x)
    return _Ops(system.aligned, system.merge, system.key)


def _close(ops: _Ops, seeds: Iterable, cap: int, rng: random.Random | None) -> ClosureResult:
    found: dict[Hashable, Any] = {}
    provenance: dict[Hashable, tuple] = {}
    for m in seeds:
        k = ops.key(m)
        if k not in found:
            found[k] = m
            provenance[k] = ("seed",)
    if len(found) > cap:
        raise OntalgError("cap-too-small", f"cap {cap} is below the {len(found)} repository members")
    frontier = set(found)
    rounds = 0
    verdict = CLOSED
    while True:
        rounds += 1
        current = list(found)
        pairs = [(a, b) for a in current for b in current if a in frontier or b in frontier]
        if rng is not None:
            rng.shuffle(pairs)
        new: set[Hashable] = set()
        for a, b in pairs:
            va, vb = found[a], found[b]
            if not ops.aligned(va, vb):
                continue
            v = ops.merge(va, vb)
            k = ops.key(v)
            if k not in found:
                found[k] = v
                provenance[k] = (a, b)
                new.add(k)
                if len(found) > cap:
                    verdict = CAP_EXCEEDED
                    break
        if verdict == CAP_EXCEEDED or not new:
            break
        frontier = new
    return ClosureResult(tuple(found), provenance, rounds, verdict, found)


def merging_closure(r: Repository, cap: int = DEFAULT_CAP, rng: random.Random | None = None) -> ClosureResult:
    """Least merge-closed superset of the repository (or a capped prefix of it).

    ``rng`` shuffles the order in which candidate pairs are tried; the
    resulting set does not depend on it.
    """
    result = _close(_ops(r.system), r.members, cap, rng)
    if isinstance(r.system, MergingSystem):
        ordered = r.system.carrier.ordered(result.closure)
        return ClosureResult(ordered, result.provenance, result.rounds, result.verdict, result.elements)
    return result


Classifier = Partition | Callable[[Any], Hashable]


def _quotient_pair(r: Repository, p: Classifier, cap: int):
    """Closure of the clustered repository, and the clustering of the closure."""
    if isinstance(r.system, MergingSystem):
        if not isinstance(p, Partition):
            raise OntalgError("bad-partition", "table systems are clustered by a Partition")
        ok = is_compatible(p, r.system)
        if not ok:
            raise OntalgError("not-compatible", f"{ok.reason} clause fails at {ok.witness}", ok.witness)
        q, proj = quotient_system(r.system, p)
        left = merging_closure(Repository(q, [proj(m) for m in r.members]), cap)
        right = merging_closure(r, cap)
        return left, right, proj.map
    if isinstance(p, Partition):
        raise OntalgError("bad-partition", "graph algebras are clustered by a classifier function")
    base = _ops(r.system)
    # quotient algebra: representatives stand for their cluster
    ops = _Ops(base.aligned, base.merge, lambda g: p(g))
    left = _close(ops, r.members, cap, None)
    right = merging_closure(r, cap)
    return left, right, lambda k: p(right.elements[k])


@dataclass(frozen=True)
class CommutationReport:
    status: str  # "equal", "REFUTATION" or "inconclusive"
    closure_of_quotient: tuple
    quotient_of_closure: tuple

    @property
    def refutation(self) -> bool:
        return self.status == "REFUTATION"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "closure_of_quotient": sorted(map(str, self.closure_of_quotient)),
            "quotient_of_closure": sorted(map(str, self.quotient_of_closure)),
        }


def closure_quotient_commutes(r: Repository, p: Classifier, cap: int = DEFAULT_CAP) -> CommutationReport:
    """Compare the closure of ``[r]`` with ``[closure of r]`` as sets of clusters.

    For a graph algebra ``p`` is a classifier whose compatibility with
    alignment and merge is the caller's responsibility.
    """
    left, right, cls = _quotient_pair(r, p, cap)
    if not (left.complete and right.complete):
        return CommutationReport("inconclusive", left.closure, tuple(sorted({cls(k) for k in right.closure}, key=str)))
    x = set(left.closure)
    y = {cls(k) for k in right.closure}
    status = "equal" if x == y else "REFUTATION"
    return CommutationReport(status, tuple(sorted(x, key=str)), tuple(sorted(y, key=str)))


@dataclass(frozen=True)
class FinitenessReport:
    status: str  # "finite-both", "REFUTATION" or "inconclusive"
    closure_finite: bool
    quotient_closure_finite: bool
    closure_size: int
    quotient_closure_size: int

    @property
    def refutation(self) -> bool:
        return self.status == "REFUTATION"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "closure_finite": self.closure_finite,
            "quotient_closure_finite": self.quotient_closure_finite,
            "sizes": [self.closure_size, self.quotient_closure_size],
        }


def finiteness_probe(r: Repository, p: Classifier, cap: int = DEFAULT_CAP) -> FinitenessReport:
    """Whether the closure and the clustered closure both finish under ``cap``.

    The biconditional is only asserted when both runs finish, in which case
    the clustered closure can be no larger than the closure itself.
    """
    left, right, _ = _quotient_pair(r, p, cap)
    if left.complete and right.complete:
        status = "finite-both" if len(left.closure) <= len(right.closure) else "REFUTATION"
    else:
        status = "inconclusive"
    return FinitenessReport(status, right.complete, left.complete, len(right.closure), len(left.closure))
