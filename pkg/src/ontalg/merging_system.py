"""Merging systems: a carrier with an alignment relation and a partial merge.

A :class:`MergingSystem` is the extensional (table) form: the merge is
defined on exactly the aligned ordered pairs and always lands back in the
carrier. Alignment is not assumed symmetric or reflexive.

Intensional systems built from concrete graphs (:class:`GraphAlgebra`) are
realized into tables by :func:`realize_intensional` before any of the
quotient machinery is applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple

from .errors import PASS, Check, OntalgError
from .ontology import Ontology, aligned_by_label, canonical_form, merge_by_label
from .relations import (
    BinaryRelation,
    Carrier,
    FiniteFunction,
    Pair,
    Partition,
    induced_surjection,
    kernel,
    pullback,
    pushforward,
)

KEY_SEPARATOR = "|"


@dataclass(frozen=True, init=False)
class MergingSystem:
    carrier: Carrier
    align: BinaryRelation
    merge: Mapping[Pair, str]
    _memo: dict = field(repr=False, compare=False, hash=False, default=None)

    def __init__(self, carrier: Carrier, align: BinaryRelation | Iterable[Pair], merge: Mapping[Pair, str]):
        if not isinstance(align, BinaryRelation):
            align = BinaryRelation(carrier, align)
        if align.carrier != carrier:
            raise OntalgError("carrier-mismatch", "alignment must live on the system's carrier")
        table = dict(merge)
        if table.keys() != align.pairs:
            odd = sorted(table.keys() ^ align.pairs)
            raise OntalgError("bad-system", f"merge must be defined exactly on aligned pairs; offending {odd[:3]}", odd)
        for pair, result in table.items():
            if result not in carrier:
                raise OntalgError("bad-system", f"merge of {pair} leaves the carrier: {result!r}", pair)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "align", align)
        object.__setattr__(self, "merge", MappingProxyType(table))
        object.__setattr__(self, "_memo", {})

    @classmethod
    def _trusted(cls, carrier: Carrier, table: dict[Pair, str]) -> MergingSystem:
        """Skip validation for tables built from an already valid system."""
        out = object.__new__(cls)
        align = object.__new__(BinaryRelation)
        object.__setattr__(align, "carrier", carrier)
        object.__setattr__(align, "pairs", frozenset(table))
        for name, value in (("carrier", carrier), ("align", align), ("merge", MappingProxyType(table)), ("_memo", {})):
            object.__setattr__(out, name, value)
        return out

    @classmethod
    def from_table(cls, elements: Iterable[str], table: Mapping[Pair, str]) -> MergingSystem:
        """System whose alignment is the domain of ``table``."""
        carrier = Carrier(elements)
        return cls(carrier, table.keys(), table)

    def aligned(self, a: str, b: str) -> bool:
        return (a, b) in self.align.pairs

    def combine(self, a: str, b: str) -> str | None:
        """``a ⋄ b``, or ``None`` when undefined."""
        return self.merge.get((a, b))

    def to_json(self) -> dict:
        return {
            "carrier": list(self.carrier),
            "align": [list(p) for p in sorted(self.align.pairs)],
            "merge": {f"{a}{KEY_SEPARATOR}{b}": c for (a, b), c in sorted(self.merge.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MergingSystem:
        try:
            elements = list(data["carrier"])
            for e in elements:
                if KEY_SEPARATOR in e:
                    raise OntalgError("bad-system", f"element ids must not contain {KEY_SEPARATOR!r}: {e!r}")
            carrier = Carrier(elements)
            table = {}
            for key, value in data.get("merge", {}).items():
                parts = key.split(KEY_SEPARATOR)
                if len(parts) != 2:
                    raise OntalgError("bad-system", f"merge key {key!r} is not 'a{KEY_SEPARATOR}b'")
                table[(parts[0], parts[1])] = value
            align = data["align"] if "align" in data else table.keys()
            return cls(carrier, BinaryRelation(carrier, align), table)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, OntalgError):
                raise
            raise OntalgError("malformed-json", f"bad merging system document: {exc}") from exc


def is_homomorphism(f: FiniteFunction, a: MergingSystem, b: MergingSystem) -> Check:
    """Aligned pairs must map to aligned pairs with ``f(x ⋄ y) = f(x) ⋄ f(y)``."""
    if f.domain != a.carrier or f.codomain != b.carrier:
        raise OntalgError("carrier-mismatch", "map must go from the source carrier to the target carrier")
    for (x, y), xy in a.merge.items():
        fx, fy = f.map[x], f.map[y]
        image = b.merge.get((fx, fy))
        if image is None:
            return Check(False, (x, y), "definedness")
        if image != f.map[xy]:
            return Check(False, (x, y), "value")
    return PASS


@dataclass(frozen=True)
class SystemHom:
    source: MergingSystem
    target: MergingSystem
    map: FiniteFunction

    def __post_init__(self):
        ok = is_homomorphism(self.map, self.source, self.target)
        if not ok:
            raise OntalgError("not-a-homomorphism", f"{ok.reason} clause fails at {ok.witness}", ok.witness)

    def __call__(self, x: str) -> str:
        return self.map(x)


class HomFactorization(NamedTuple):
    projection: SystemHom
    embedding: SystemHom
    bridge: FiniteFunction | None = None


# ---------------------------------------------------------------------------
# Compatibility and quotients
# ---------------------------------------------------------------------------


def _merge_congruence(p: Partition, s: MergingSystem) -> Check:
    seen: dict[tuple[str, str], tuple[Pair, str]] = {}
    for (x, y), xy in s.merge.items():
        sig = (p.name_of(x), p.name_of(y))
        if sig in seen:
            pair0, r0 = seen[sig]
            if not p.same_block(r0, xy):
                return Check(False, (pair0, (x, y)), "value")
        else:
            seen[sig] = ((x, y), xy)
    return PASS


def is_compatible(p: Partition, s: MergingSystem) -> Check:
    """Alignment is invariant under ``p`` and merge is a congruence for it.

    A ``definedness`` witness is two blockwise-equivalent pairs of which only
    the first is aligned; a ``value`` witness is two aligned, blockwise
    equivalent pairs whose merges land in different blocks.
    """
    if p.carrier != s.carrier:
        raise OntalgError("carrier-mismatch", "partition must live on the system's carrier")
    key = ("compatible", p)
    hit = s._memo.get(key)
    if hit is None:
        hit = s._memo[key] = _compatibility(p, s)
    return hit


def _compatibility(p: Partition, s: MergingSystem) -> Check:
    # one counting pass decides; the loops below only locate a witness
    name, members = p._name, p._members
    counts: dict[Pair, int] = {}
    values: dict[Pair, str] = {}
    fine = True
    for (x, y), xy in s.merge.items():
        sig = (name[x], name[y])
        counts[sig] = counts.get(sig, 0) + 1
        if values.setdefault(sig, name[xy]) != name[xy]:
            fine = False
            break
    if fine and all(c == len(members[a]) * len(members[b]) for (a, b), c in counts.items()):
        return PASS
    for x, y in s.merge:
        for x2 in p.block_of(x):
            for y2 in p.block_of(y):
                if (x2, y2) not in s.align.pairs:
                    return Check(False, ((x, y), (x2, y2)), "definedness")
    return _merge_congruence(p, s)


def _induced_quotient(s: MergingSystem, p: Partition, checked: bool = False) -> MergingSystem:
    """Blocks as carrier; blocks are aligned when some representatives are.

    Requires only that merge respects ``p`` on aligned pairs; under full
    compatibility the alignment is the same for every choice of
    representatives.
    """
    if not checked:
        ok = _merge_congruence(p, s)
        if not ok:
            raise OntalgError("not-compatible", f"merge is not a congruence: {ok.witness}", ok.witness)
    table = {(p.name_of(x), p.name_of(y)): p.name_of(xy) for (x, y), xy in s.merge.items()}
    return MergingSystem._trusted(p.quotient_carrier(), table)


def _projection_hom(s: MergingSystem, p: Partition, q: MergingSystem) -> SystemHom:
    # a homomorphism by construction of the induced quotient, so skip the check
    hom = object.__new__(SystemHom)
    for name, value in (("source", s), ("target", q), ("map", FiniteFunction(s.carrier, q.carrier, {x: p.name_of(x) for x in s.carrier}))):
        object.__setattr__(hom, name, value)
    return hom


def _require_compatible(p: Partition, s: MergingSystem) -> None:
    ok = is_compatible(p, s)
    if not ok:
        raise OntalgError("not-compatible", f"{ok.reason} clause fails at {ok.witness}", ok.witness)


def quotient_system(s: MergingSystem, p: Partition) -> tuple[MergingSystem, SystemHom]:
    """Quotient system ``s/p`` and the projection homomorphism onto it."""
    hit = s._memo.get(p)
    if hit is None:
        _require_compatible(p, s)
        q = _induced_quotient(s, p, checked=True)
        hit = s._memo[p] = (q, _projection_hom(s, p, q))
    return hit


def hom_factorize(h: SystemHom, rho: Partition | None = None) -> HomFactorization:
    """Split ``h`` as ``embedding ∘ projection`` through ``source/ker h``.

    The kernel always makes merge a congruence, but alignment need not be
    invariant under it (``h`` only has to preserve alignment, not reflect
    it). The middle system therefore aligns two fibres when some of their
    members are aligned, which is the least alignment making the projection
    a homomorphism.
    """
    ker = kernel(h.map)
    mid = _induced_quotient(h.source, ker)
    proj = _projection_hom(h.source, ker, mid)
    emb = SystemHom(mid, h.target, FiniteFunction(mid.carrier, h.target.carrier, {n: h(n) for n in ker.names}))
    bridge = None
    if rho is not None:
        if rho.carrier != h.source.carrier:
            raise OntalgError("carrier-mismatch", "rho must live on the source carrier")
        for block in rho.blocks:
            if len({h(x) for x in block}) > 1:
                raise OntalgError("rho-not-below-kernel", f"block {list(block)} is not inside one fibre", block)
        _require_compatible(rho, h.source)
        bridge = induced_surjection(rho, ker)
    return HomFactorization(proj, emb, bridge)


def hom_lift(h: SystemHom, p: Partition, q: Partition) -> SystemHom:
    """``source/p → target/q``, ``[s] ↦ [h(s)]``."""
    src, _ = quotient_system(h.source, p)
    tgt, _ = quotient_system(h.target, q)
    mapping = {}
    for block in p.blocks:
        head = q.name_of(h(block[0]))
        for x in block[1:]:
            if q.name_of(h(x)) != head:
                raise OntalgError(
                    "not-liftable", f"{block[0]!r} ~ {x!r} but their images are in different blocks", (block[0], x)
                )
        mapping[block[0]] = head
    return SystemHom(src, tgt, FiniteFunction(src.carrier, tgt.carrier, mapping))


def image_system(h: SystemHom) -> tuple[MergingSystem, SystemHom]:
    """The image ``h(source)`` and ``h`` corestricted onto it.

    The image aligns ``h(x), h(y)`` for aligned ``x, y`` and merges them to
    ``h(x ⋄ y)``; ``h`` being a homomorphism makes this well defined.
    """
    img = h.map.image()
    table = {(h(x), h(y)): h(xy) for (x, y), xy in h.source.merge.items()}
    sub = MergingSystem(img, table.keys(), table)
    return sub, SystemHom(h.source, sub, h.map.corestrict(img))


def hom_image_system(h: SystemHom, p: Partition) -> SystemHom:
    """``source/p → h(source)/hp``; compatibility of ``hp`` is checked."""
    sub, onto = image_system(h)
    hp = pushforward(h.map, p)
    return hom_lift(onto, p, hp)


def hom_pullback_system(h: SystemHom, q: Partition) -> SystemHom:
    """``source/h⁻¹q → target/q``; compatibility of ``h⁻¹q`` is checked."""
    back = pullback(h.map, q)
    return hom_lift(h, back, q)


# ---------------------------------------------------------------------------
# Intensional systems
# ---------------------------------------------------------------------------


def _canonical_key(g: Ontology) -> str:
    return canonical_form(g).id


@dataclass(frozen=True)
class GraphAlgebra:
    """Alignment, merge and identity for graph-valued ontologies.

    Defaults to label intersection, label-identifying union and
    canonical-form identity; any of the three can be replaced, e.g. with
    the output of an entity-resolution tool.
    """

    aligned: Callable[[Ontology, Ontology], bool] = aligned_by_label
    merge: Callable[[Ontology, Ontology], Ontology] = merge_by_label
    key: Callable[[Ontology], str] = _canonical_key


@dataclass(frozen=True)
class IntensionalSystem:
    ontologies: tuple[Ontology, ...]
    algebra: GraphAlgebra
    members: Mapping[str, Ontology] = field(repr=False)
    system: MergingSystem
    cap: int


def realize_intensional(
    onts: Iterable[Ontology], cap: int = 1000, algebra: GraphAlgebra | None = None
) -> IntensionalSystem:
    """Close ``onts`` under merge and tabulate the result.

    Carrier elements are canonical keys; the table records alignment and
    merge among every pair of closure members.
    """
    from .closure import Repository, merging_closure

    algebra = algebra or GraphAlgebra()
    onts = tuple(onts)
    if cap < len(onts):
        raise OntalgError("cap-too-small", f"cap {cap} is below the {len(onts)} seed ontologies")
    result = merging_closure(Repository(algebra, onts), cap)
    if result.verdict != "closed-finite":
        raise OntalgError(
            "closure-cap-exceeded", f"closure grew past {cap} (frontier size {len(result.closure)})", len(result.closure)
        )
    members = dict(result.elements)
    keys = sorted(members)
    table = {}
    for a in keys:
        for b in keys:
            if algebra.aligned(members[a], members[b]):
                k = algebra.key(algebra.merge(members[a], members[b]))
                table[(a, b)] = k
    system = MergingSystem(Carrier(keys), table.keys(), table)
    return IntensionalSystem(onts, algebra, MappingProxyType(members), system, cap)
