"""The natural order of a merging system and the axioms that make it a poset.

``a ≤ b`` holds when ``a`` and ``b`` are aligned both ways and merging them
in either order yields ``b``. Under idempotence (I) and conditional
associativity (CA) this is a partial order; :func:`verify_natural_poset`
checks that implication on a concrete system and reports a refutation if
it ever fails.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PASS, Check, OntalgError, Refutation
from .merging_system import MergingSystem, SystemHom, hom_lift, quotient_system
from .ontology import Node, Edge, Ontology
from .relations import BinaryRelation, FiniteFunction, Partition


@dataclass(frozen=True)
class OrderFlags:
    is_reflexive: bool
    is_antisymmetric: bool
    is_transitive: bool

    @property
    def is_poset(self) -> bool:
        return self.is_reflexive and self.is_antisymmetric and self.is_transitive

    def to_json(self) -> dict:
        return {
            "is_reflexive": self.is_reflexive,
            "is_antisymmetric": self.is_antisymmetric,
            "is_transitive": self.is_transitive,
            "is_poset": self.is_poset,
        }


@dataclass(frozen=True)
class NaturalOrder:
    system: MergingSystem
    pairs: BinaryRelation
    flags: OrderFlags
    antisymmetry_witness: tuple[str, str] | None = None

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.pairs.pairs

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in sorted(self.pairs.pairs)], "flags": self.flags.to_json()}


def natural_order(s: MergingSystem) -> NaturalOrder:
    hit = s._memo.get("natural-order")
    if hit is None:
        hit = s._memo["natural-order"] = _natural_order(s)
    return hit


def _natural_order(s: MergingSystem) -> NaturalOrder:
    pairs = [
        (a, b)
        for (a, b), ab in s.merge.items()
        if ab == b and s.merge.get((b, a)) == b
    ]
    rel = BinaryRelation(s.carrier, pairs)
    reflexive = all((x, x) in rel.pairs for x in s.carrier)
    witness = next(((a, b) for a, b in rel.sorted_pairs() if a != b and (b, a) in rel.pairs), None)
    succ = rel.successors()
    transitive = all((a, c) in rel.pairs for a, b in rel.pairs for c in succ[b])
    return NaturalOrder(s, rel, OrderFlags(reflexive, witness is None, transitive), witness)


def check_axiom_I(s: MergingSystem) -> Check:
    """Every element is self-aligned and merges with itself to itself."""
    for x in s.carrier:
        if s.merge.get((x, x)) != x:
            return Check(False, x, "unaligned" if (x, x) not in s.merge else "not idempotent")
    return PASS


def check_axiom_CA(s: MergingSystem) -> Check:
    """Whenever ``a ⋄ b`` and ``b ⋄ c`` exist, both nestings exist and agree."""
    m = s.merge
    for a in s.carrier:
        for b in s.carrier:
            ab = m.get((a, b))
            if ab is None:
                continue
            for c in s.carrier:
                bc = m.get((b, c))
                if bc is None:
                    continue
                left, right = m.get((ab, c)), m.get((a, bc))
                if left is None or right is None:
                    return Check(False, (a, b, c), "undefined nesting")
                if left != right:
                    return Check(False, (a, b, c), "nestings differ")
    return PASS


@dataclass(frozen=True)
class PosetReport:
    axiom_I: Check
    axiom_CA: Check
    order: NaturalOrder

    @property
    def refutation(self) -> bool:
        return bool(self.axiom_I) and bool(self.axiom_CA) and not self.order.flags.is_poset

    def to_json(self) -> dict:
        return {
            "axiom_I": self.axiom_I.ok,
            "axiom_CA": self.axiom_CA.ok,
            "flags": self.order.flags.to_json(),
            "status": "REFUTATION" if self.refutation else "consistent",
        }


def verify_natural_poset(s: MergingSystem) -> PosetReport:
    """Check (I), (CA) and the poset flags; ``refutation`` marks a broken implication."""
    return PosetReport(check_axiom_I(s), check_axiom_CA(s), natural_order(s))


def _require_axioms(s: MergingSystem, what: str) -> None:
    if s._memo.get("axioms"):
        return
    ok = check_axiom_I(s)
    if not ok:
        raise OntalgError("axiom-I-violated", f"{what} fails (I) at {ok.witness!r}: {ok.reason}", ok.witness)
    ok = check_axiom_CA(s)
    if not ok:
        raise OntalgError("axiom-CA-violated", f"{what} fails (CA) at {ok.witness!r}: {ok.reason}", ok.witness)
    s._memo["axioms"] = True


def _monotone_witness(f: FiniteFunction, src: NaturalOrder, tgt: NaturalOrder) -> tuple[str, str] | None:
    for a, b in src.pairs.sorted_pairs():
        if not tgt.leq(f(a), f(b)):
            return (a, b)
    return None


def quotient_order(s: MergingSystem, p: Partition) -> NaturalOrder:
    """Natural order of ``s/p``; must be a poset into which the projection is monotone."""
    _require_axioms(s, "system")
    q, proj = quotient_system(s, p)
    order = natural_order(q)
    if not order.flags.is_poset:
        raise Refutation("quotient of an (I)+(CA) system is not a poset", order.flags.to_json())
    bad = _monotone_witness(proj.map, natural_order(s), order)
    if bad is not None:
        raise Refutation("projection onto the quotient is not monotone", bad)
    return order


def lift_order_hom(h: SystemHom, p: Partition, q: Partition) -> FiniteFunction:
    """The lifted map ``source/p → target/q``, checked monotone for the natural orders."""
    lifted = hom_lift(h, p, q)
    _require_axioms(lifted.source, "source quotient")
    _require_axioms(lifted.target, "target quotient")
    bad = _monotone_witness(lifted.map, natural_order(lifted.source), natural_order(lifted.target))
    if bad is not None:
        raise Refutation("lifted homomorphism is not monotone", bad)
    return lifted.map


def hasse_diagram(no: NaturalOrder) -> Ontology:
    """Covering relation of the order as a graph, edges pointing upward."""
    if not no.flags.is_poset:
        raise OntalgError("not-a-poset", "the natural order is not a partial order", no.antisymmetry_witness)
    strict = {(a, b) for a, b in no.pairs.pairs if a != b}
    above: dict[str, set[str]] = {x: set() for x in no.system.carrier}
    for a, b in strict:
        above[a].add(b)
    covers = [
        (a, b) for a, b in strict
        if not any(c in above[a] and b in above[c] for c in no.system.carrier if c not in (a, b))
    ]
    nodes = [Node(x, x) for x in no.system.carrier]
    return Ontology("hasse", nodes, [Edge(a, b) for a, b in covers])
