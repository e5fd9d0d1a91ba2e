"""Finite endorelations, partitions, quotients and the maps between them.

Everything here lives over a :class:`Carrier`, a nonempty ordered tuple of
string identifiers. The carrier order is what makes results deterministic:
a block of a partition is named by its least member in carrier order, and
that name is the element of the quotient carrier.

Equivalence relations are stored as :class:`Partition` values. The pair-set
view (:func:`equivalence_from_partition`) is available whenever a relation is
needed, but the algebra (meet, join, kernels, pushforward, congruence
closure) works blockwise with a union-find.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import PASS, Check, OntalgError

Pair = tuple[str, str]

DEFAULT_MAX_CARRIER = 8


def max_carrier() -> int:
    """Bound on carrier size for exhaustive enumeration (``ONTALG_MAX_CARRIER``)."""
    return int(os.environ.get("ONTALG_MAX_CARRIER", DEFAULT_MAX_CARRIER))


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, init=False)
class Carrier:
    """Nonempty ordered set of element identifiers."""

    elements: tuple[str, ...]
    _index: Mapping[str, int] = field(repr=False, compare=False, hash=False)

    def __init__(self, elements: Iterable[str]):
        elems = tuple(elements)
        if not elems:
            raise OntalgError("empty-carrier", "a carrier must be nonempty")
        index: dict[str, int] = {}
        for i, e in enumerate(elems):
            if not isinstance(e, str):
                raise OntalgError("bad-element", f"element identifiers are strings, got {e!r}")
            if e in index:
                raise OntalgError("duplicate-element", f"duplicate element {e!r}", e)
            index[e] = i
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    def index(self, x: str) -> int:
        return self._index[x]

    def ordered(self, xs: Iterable[str]) -> tuple[str, ...]:
        """``xs`` sorted by carrier position."""
        return tuple(sorted(xs, key=self._index.__getitem__))

    def subset(self, xs: Iterable[str]) -> Carrier:
        """The sub-carrier on ``xs``, keeping this carrier's order."""
        xs = set(xs)
        missing = xs - self._index.keys()
        if missing:
            raise OntalgError("carrier-mismatch", f"not carrier members: {sorted(missing)}")
        return Carrier(self.ordered(xs))


@dataclass(frozen=True, init=False)
class BinaryRelation:
    """A set of ordered pairs over a carrier."""

    carrier: Carrier
    pairs: frozenset[Pair]

    def __init__(self, carrier: Carrier, pairs: Iterable[Sequence[str]] = ()):
        ps = frozenset((a, b) for a, b in pairs)
        for a, b in ps:
            if a not in carrier or b not in carrier:
                raise OntalgError("carrier-mismatch", f"pair {(a, b)} leaves the carrier", (a, b))
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "pairs", ps)

    @classmethod
    def diagonal(cls, carrier: Carrier) -> BinaryRelation:
        return cls(carrier, ((x, x) for x in carrier))

    @classmethod
    def full(cls, carrier: Carrier) -> BinaryRelation:
        return cls(carrier, ((x, y) for x in carrier for y in carrier))

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.sorted_pairs())

    def sorted_pairs(self) -> list[Pair]:
        ix = self.carrier.index
        return sorted(self.pairs, key=lambda p: (ix(p[0]), ix(p[1])))

    def __le__(self, other: BinaryRelation) -> bool:
        return self.pairs <= other.pairs

    def successors(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {x: [] for x in self.carrier}
        for a, b in self.pairs:
            out[a].append(b)
        return out


@dataclass(frozen=True, init=False)
class Partition:
    """Partition of a carrier into canonical blocks.

    Blocks are sorted internally and ordered by least element, both in
    carrier order, so ``==`` is equality of partitions.
    """

    carrier: Carrier
    blocks: tuple[tuple[str, ...], ...]
    _name: Mapping[str, str] = field(repr=False, compare=False, hash=False)
    _members: Mapping[str, tuple[str, ...]] = field(repr=False, compare=False, hash=False)
    _quotient: Carrier | None = field(repr=False, compare=False, hash=False, default=None)

    def __init__(self, carrier: Carrier, blocks: Iterable[Iterable[str]]):
        name: dict[str, str] = {}
        canon = []
        for raw in blocks:
            block = carrier.ordered(_checked_members(carrier, raw))
            if not block:
                raise OntalgError("bad-partition", "blocks must be nonempty")
            for x in block:
                if x in name:
                    raise OntalgError("bad-partition", f"{x!r} lies in two blocks", x)
                name[x] = block[0]
            canon.append(block)
        if len(name) != len(carrier):
            missing = [x for x in carrier if x not in name]
            raise OntalgError("bad-partition", f"blocks do not cover {missing}", missing)
        canon.sort(key=lambda b: carrier.index(b[0]))
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "blocks", tuple(canon))
        object.__setattr__(self, "_name", name)
        object.__setattr__(self, "_members", {b[0]: b for b in canon})
        object.__setattr__(self, "_quotient", None)

    @classmethod
    def discrete(cls, carrier: Carrier) -> Partition:
        """All singletons: the diagonal."""
        return cls(carrier, ([x] for x in carrier))

    @classmethod
    def indiscrete(cls, carrier: Carrier) -> Partition:
        """One block: the full relation."""
        return cls(carrier, [carrier.elements])

    @classmethod
    def by_key(cls, carrier: Carrier, key) -> Partition:
        """Blocks are the fibres of ``key``."""
        groups: dict[object, list[str]] = {}
        for x in carrier:
            groups.setdefault(key(x), []).append(x)
        # walking the carrier in order already yields canonical blocks
        out = object.__new__(cls)
        canon = tuple(map(tuple, groups.values()))
        object.__setattr__(out, "carrier", carrier)
        object.__setattr__(out, "blocks", canon)
        object.__setattr__(out, "_name", {x: b[0] for b in canon for x in b})
        object.__setattr__(out, "_members", {b[0]: b for b in canon})
        object.__setattr__(out, "_quotient", None)
        return out

    def name_of(self, x: str) -> str:
        """Name of the block containing ``x`` (its least member)."""
        return self._name[x]

    def block_of(self, x: str) -> tuple[str, ...]:
        return self._members[self._name[x]]

    def same_block(self, a: str, b: str) -> bool:
        return self._name[a] == self._name[b]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(b[0] for b in self.blocks)

    def quotient_carrier(self) -> Carrier:
        if self._quotient is None:
            object.__setattr__(self, "_quotient", Carrier(self.names))
        return self._quotient

    def pairs(self) -> frozenset[Pair]:
        return frozenset((a, b) for block in self.blocks for a in block for b in block)

    def restrict(self, sub: Carrier) -> Partition:
        """Trace of this partition on a sub-carrier."""
        groups: dict[str, list[str]] = {}
        for x in sub:
            if x not in self.carrier:
                raise OntalgError("carrier-mismatch", f"{x!r} is not in the partition's carrier")
            groups.setdefault(self._name[x], []).append(x)
        return Partition(sub, groups.values())

    def is_discrete(self) -> bool:
        return len(self.blocks) == len(self.carrier)

    def __len__(self) -> int:
        return len(self.blocks)


def _checked_members(carrier: Carrier, xs: Iterable[str]) -> list[str]:
    xs = list(xs)
    for x in xs:
        if x not in carrier:
            raise OntalgError("carrier-mismatch", f"{x!r} is not a carrier member", x)
    return xs


@dataclass(frozen=True, init=False)
class FiniteFunction:
    """Total function between two carriers."""

    domain: Carrier
    codomain: Carrier
    map: Mapping[str, str]

    def __init__(self, domain: Carrier, codomain: Carrier, mapping: Mapping[str, str]):
        m = dict(mapping)
        if m.keys() != domain._index.keys():
            missing = [x for x in domain if x not in m]
            extra = sorted(set(m) - set(domain.elements))
            raise OntalgError(
                "not-total", f"map must cover the domain exactly (missing {missing}, extra {extra})"
            )
        known = codomain._index
        for x, y in m.items():
            if y not in known:
                raise OntalgError("carrier-mismatch", f"{x!r} maps outside the codomain to {y!r}", (x, y))
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "map", MappingProxyType(m))

    @classmethod
    def identity(cls, carrier: Carrier) -> FiniteFunction:
        return cls(carrier, carrier, {x: x for x in carrier})

    def __call__(self, x: str) -> str:
        return self.map[x]

    def image(self) -> Carrier:
        return self.codomain.subset(self.map.values())

    def is_injective(self) -> bool:
        return len(set(self.map.values())) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map.values())) == len(self.codomain)

    def after(self, inner: FiniteFunction) -> FiniteFunction:
        """Composite ``self ∘ inner``."""
        if inner.codomain != self.domain:
            raise OntalgError("carrier-mismatch", "composable maps need codomain == domain")
        return FiniteFunction(inner.domain, self.codomain, {x: self.map[inner.map[x]] for x in inner.domain})

    def corestrict(self, codomain: Carrier) -> FiniteFunction:
        return FiniteFunction(self.domain, codomain, self.map)


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, elements: Iterable[str] = ()):
        self.parent: dict[str, str] = {}
        self.size: dict[str, int] = {}
        for x in elements:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def union_all(self, xs: Sequence[str]) -> None:
        for y in xs[1:]:
            self.union(xs[0], y)

    def partition(self, carrier: Carrier) -> Partition:
        return Partition.by_key(carrier, self.find)


class RelationFlags(NamedTuple):
    reflexive: bool
    symmetric: bool
    transitive: bool
    equivalence: bool


class Factorization(NamedTuple):
    projection: FiniteFunction
    injection: FiniteFunction
    bridge: FiniteFunction | None = None


class Squares(NamedTuple):
    ftilde: FiniteFunction
    fstar: FiniteFunction


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------


def _same_carrier(*carriers: Carrier) -> None:
    first = carriers[0]
    for c in carriers[1:]:
        if c != first:
            raise OntalgError("carrier-mismatch", "operands live over different carriers")


def compose(r1: BinaryRelation, r2: BinaryRelation) -> BinaryRelation:
    """Relational composite: ``(a, c)`` whenever ``a r1 b`` and ``b r2 c``."""
    _same_carrier(r1.carrier, r2.carrier)
    succ = r2.successors()
    return BinaryRelation(r1.carrier, ((a, c) for a, b in r1.pairs for c in succ[b]))


def inverse(r: BinaryRelation) -> BinaryRelation:
    return BinaryRelation(r.carrier, ((b, a) for a, b in r.pairs))


def classify(r: BinaryRelation) -> RelationFlags:
    # transitivity is tested as r∘r ⊆ r; equality would reject e.g. {(a, b)}
    reflexive = all((x, x) in r.pairs for x in r.carrier)
    symmetric = inverse(r).pairs == r.pairs
    transitive = compose(r, r).pairs <= r.pairs
    return RelationFlags(reflexive, symmetric, transitive, reflexive and symmetric and transitive)


def transitive_closure(r: BinaryRelation) -> BinaryRelation:
    """Least transitive relation containing ``r`` (reachability by DFS)."""
    succ = r.successors()
    pairs = []
    for start in r.carrier:
        seen: set[str] = set()
        stack = list(succ[start])
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            stack.extend(succ[y])
        pairs.extend((start, y) for y in seen)
    return BinaryRelation(r.carrier, pairs)


def _equivalence_violation(r: BinaryRelation) -> tuple[str, Pair] | None:
    for x in r.carrier:
        if (x, x) not in r.pairs:
            return "reflexive", (x, x)
    for a, b in r.sorted_pairs():
        if (b, a) not in r.pairs:
            return "symmetric", (a, b)
    succ = r.successors()
    for a, b in r.sorted_pairs():
        for c in succ[b]:
            if (a, c) not in r.pairs:
                return "transitive", (a, c)
    return None


def partition_from_equivalence(r: BinaryRelation) -> Partition:
    """Equivalence classes of ``r``."""
    violation = _equivalence_violation(r)
    if violation is not None:
        axiom, pair = violation
        raise OntalgError("not-an-equivalence", f"{axiom} fails at {pair}", {"axiom": axiom, "pair": pair})
    uf = UnionFind(r.carrier)
    for a, b in r.pairs:
        uf.union(a, b)
    return uf.partition(r.carrier)


def equivalence_from_partition(p: Partition) -> BinaryRelation:
    return BinaryRelation(p.carrier, p.pairs())


def projection(p: Partition) -> FiniteFunction:
    """Canonical surjection onto the quotient, ``x ↦ [x]``."""
    return FiniteFunction(p.carrier, p.quotient_carrier(), {x: p.name_of(x) for x in p.carrier})


def kernel(f: FiniteFunction) -> Partition:
    """Fibres of ``f``."""
    return Partition.by_key(f.domain, f.map.__getitem__)


def image_relation(f: FiniteFunction, p: Partition) -> BinaryRelation:
    """Raw image ``{(f(a), f(b)) : a ~ b}`` on ``f(S)``; not always transitive."""
    if p.carrier != f.domain:
        raise OntalgError("carrier-mismatch", "partition must live on the function's domain")
    img = f.image()
    return BinaryRelation(img, ((f(a), f(b)) for a, b in p.pairs()))


def pushforward(f: FiniteFunction, p: Partition) -> Partition:
    """Least equivalence on ``f(S)`` containing the image of ``p``.

    The raw image pair set is closed up here; for a non-injective ``f`` it
    can fail transitivity (see :func:`image_relation`).
    """
    if p.carrier != f.domain:
        raise OntalgError("carrier-mismatch", "partition must live on the function's domain")
    img = f.image()
    uf = UnionFind(img)
    for block in p.blocks:
        uf.union_all([f(x) for x in block])
    return uf.partition(img)


def pullback(f: FiniteFunction, q: Partition) -> Partition:
    """``a ~ b`` iff ``f(a)`` and ``f(b)`` share a block of ``q``."""
    if q.carrier != f.codomain:
        raise OntalgError("carrier-mismatch", "partition must live on the function's codomain")
    return Partition.by_key(f.domain, lambda x: q.name_of(f(x)))


def _shared_carrier(ps: Sequence[Partition]) -> Carrier:
    if not ps:
        raise OntalgError("empty-meet-join", "meet and join need at least one partition")
    _same_carrier(*(p.carrier for p in ps))
    return ps[0].carrier


def meet(ps: Sequence[Partition]) -> Partition:
    """Intersection of the equivalences."""
    carrier = _shared_carrier(ps)
    return Partition.by_key(carrier, lambda x: tuple(p.name_of(x) for p in ps))


def join(ps: Sequence[Partition]) -> Partition:
    """Transitive closure of the union of the equivalences."""
    carrier = _shared_carrier(ps)
    uf = UnionFind(carrier)
    for p in ps:
        for block in p.blocks:
            uf.union_all(block)
    return uf.partition(carrier)


def _refinement_witness(p: Partition, q: Partition) -> tuple[str, ...] | None:
    for block in p.blocks:
        if len({q.name_of(x) for x in block}) > 1:
            return block
    return None


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of ``p`` sits inside a block of ``q``."""
    _same_carrier(p.carrier, q.carrier)
    return _refinement_witness(p, q) is None


def induced_surjection(p: Partition, q: Partition) -> FiniteFunction:
    """``S/p → S/q``, ``[s]_p ↦ [s]_q``, for ``p`` finer than ``q``."""
    _same_carrier(p.carrier, q.carrier)
    bad = _refinement_witness(p, q)
    if bad is not None:
        raise OntalgError("not-a-refinement", f"block {list(bad)} straddles several blocks", bad)
    return FiniteFunction(p.quotient_carrier(), q.quotient_carrier(), {n: q.name_of(n) for n in p.names})


def factorize(f: FiniteFunction, rho: Partition | None = None) -> Factorization:
    """Split ``f`` as ``injection ∘ projection`` through ``S/ker f``.

    With ``rho`` finer than the kernel, ``bridge`` is the induced surjection
    ``S/rho → S/ker f``.
    """
    ker = kernel(f)
    proj = projection(ker)
    inj = FiniteFunction(ker.quotient_carrier(), f.codomain, {n: f(n) for n in ker.names})
    bridge = None
    if rho is not None:
        _same_carrier(rho.carrier, f.domain)
        bad = _refinement_witness(rho, ker)
        if bad is not None:
            raise OntalgError("rho-not-below-kernel", f"block {list(bad)} is not inside one fibre", bad)
        bridge = induced_surjection(rho, ker)
    return Factorization(proj, inj, bridge)


def _lift_witness(f: FiniteFunction, p: Partition, q: Partition) -> Pair | None:
    for block in p.blocks:
        head = q.name_of(f(block[0]))
        for x in block[1:]:
            if q.name_of(f(x)) != head:
                return (block[0], x)
    return None


def lift(f: FiniteFunction, p: Partition, q: Partition) -> FiniteFunction:
    """``S/p → T/q``, ``[s]_p ↦ [f(s)]_q``; needs ``f`` to carry ``p`` into ``q``."""
    if p.carrier != f.domain or q.carrier != f.codomain:
        raise OntalgError("carrier-mismatch", "p must live on the domain and q on the codomain")
    bad = _lift_witness(f, p, q)
    if bad is not None:
        s1, s2 = bad
        raise OntalgError(
            "not-liftable", f"{s1!r} ~ {s2!r} but {f(s1)!r} and {f(s2)!r} are in different blocks", bad
        )
    return FiniteFunction(p.quotient_carrier(), q.quotient_carrier(), {n: q.name_of(f(n)) for n in p.names})


def image_and_pullback_squares(f: FiniteFunction, p: Partition, q: Partition) -> Squares:
    """The two induced maps ``S/p → f(S)/fp`` and ``S/f⁻¹q → T/q``."""
    if p.carrier != f.domain or q.carrier != f.codomain:
        raise OntalgError("carrier-mismatch", "p must live on the domain and q on the codomain")
    onto = f.corestrict(f.image())
    ftilde = lift(onto, p, pushforward(f, p))
    fstar = lift(f, pullback(f, q), q)
    return Squares(ftilde, fstar)


# ---------------------------------------------------------------------------
# Congruences
# ---------------------------------------------------------------------------

Table = Mapping[Pair, str]


def _check_total(carrier: Carrier, op: Table) -> None:
    for a in carrier:
        for b in carrier:
            if (a, b) not in op:
                raise OntalgError("partial-table", f"operation undefined at {(a, b)}", (a, b))
            if op[(a, b)] not in carrier:
                raise OntalgError("carrier-mismatch", f"{(a, b)} maps outside the carrier")


def congruence_check(p: Partition, op: Table) -> Check:
    """Like :func:`is_congruence` but returns the witnessing argument pairs."""
    _check_total(p.carrier, op)
    seen: dict[tuple[str, str], tuple[Pair, str]] = {}
    for a in p.carrier:
        for b in p.carrier:
            sig = (p.name_of(a), p.name_of(b))
            result = op[(a, b)]
            if sig in seen:
                (a0, b0), r0 = seen[sig]
                if not p.same_block(r0, result):
                    return Check(False, ((a0, a), (b0, b)), f"{a0}∘{b0}={r0} but {a}∘{b}={result}")
            else:
                seen[sig] = ((a, b), result)
    return PASS


def is_congruence(p: Partition, op: Table) -> bool:
    return congruence_check(p, op).ok


def congruence_closure(p: Partition, op: Table) -> Partition:
    """Least congruence of ``op`` coarser than ``p``.

    Repeatedly unions the results of all argument pairs that agree blockwise
    until no signature conflicts remain.
    """
    _check_total(p.carrier, op)
    carrier = p.carrier
    uf = UnionFind(carrier)
    for block in p.blocks:
        uf.union_all(block)
    changed = True
    while changed:
        changed = False
        seen: dict[tuple[str, str], str] = {}
        for a in carrier:
            for b in carrier:
                sig = (uf.find(a), uf.find(b))
                result = op[(a, b)]
                if sig in seen:
                    if uf.union(seen[sig], result):
                        changed = True
                else:
                    seen[sig] = result
    return uf.partition(carrier)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_partitions(c: Carrier, bound: int | None = None) -> list[Partition]:
    """All partitions of ``c`` (Bell-many), via restricted growth strings."""
    bound = max_carrier() if bound is None else bound
    if len(c) > bound:
        raise OntalgError("carrier-too-large", f"{len(c)} elements exceeds the enumeration bound {bound}")
    elems = c.elements
    out: list[Partition] = []

    def grow(i: int, blocks: list[list[str]]) -> None:
        if i == len(elems):
            out.append(Partition(c, blocks))
            return
        x = elems[i]
        for block in blocks:
            block.append(x)
            grow(i + 1, blocks)
            block.pop()
        blocks.append([x])
        grow(i + 1, blocks)
        blocks.pop()

    grow(0, [])
    return out
