"""Exhaustive enumerators and seeded random builders of test instances.

Tables are generated over integer cells first and only converted to
:class:`MergingSystem` at the end; element names are ``a, b, c, ...``.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .merging_system import MergingSystem, SystemHom
from .ontology import Edge, GraphHom, Node, Ontology
from .relations import Carrier, FiniteFunction

UNDEFINED = -1


def names(n: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(n)]


def system_from_code(n: int, code: tuple[int, ...], elements: list[str] | None = None) -> MergingSystem:
    """Decode a row-major table where ``-1`` marks an undefined merge."""
    elems = elements or names(n)
    table = {
        (elems[i], elems[j]): elems[code[i * n + j]]
        for i in range(n)
        for j in range(n)
        if code[i * n + j] != UNDEFINED
    }
    return MergingSystem(Carrier(elems), table.keys(), table)


def _permuted(n: int, code: tuple[int, ...], perm: tuple[int, ...]) -> tuple[int, ...]:
    out = [UNDEFINED] * (n * n)
    for i in range(n):
        for j in range(n):
            v = code[i * n + j]
            out[perm[i] * n + perm[j]] = UNDEFINED if v == UNDEFINED else perm[v]
    return tuple(out)


def enumerate_table_codes(n: int, dedup: bool = True) -> Iterator[tuple[int, ...]]:
    """Every alignment × merge table on ``n`` elements.

    With ``dedup`` only the lexicographically least code of each
    isomorphism class (under relabelling the elements) is kept.
    """
    perms = list(itertools.permutations(range(n)))[1:]
    for code in itertools.product(range(UNDEFINED, n), repeat=n * n):
        if dedup and any(_permuted(n, code, p) < code for p in perms):
            continue
        yield code


def enumerate_tables(n: int, dedup: bool = True) -> Iterator[MergingSystem]:
    for code in enumerate_table_codes(n, dedup):
        yield system_from_code(n, code)


def enumerate_ica_codes(
    n: int, commutative: bool = False, total: bool = False, dedup: bool = False
) -> Iterator[tuple[int, ...]]:
    """All tables on ``n`` elements satisfying (I) and (CA), by backtracking.

    The diagonal is fixed to ``x ⋄ x = x``; off-diagonal cells are filled
    one at a time and a branch is cut as soon as a fully determined triple
    violates (CA). With ``dedup`` one table per isomorphism class is kept.
    """
    if dedup:
        perms = list(itertools.permutations(range(n)))[1:]
        for code in enumerate_ica_codes(n, commutative, total):
            if not any(_permuted(n, code, p) < code for p in perms):
                yield code
        return
    code = [UNDEFINED] * (n * n)
    assigned = [False] * (n * n)
    for i in range(n):
        code[i * n + i] = i
        assigned[i * n + i] = True
    if commutative:
        cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    values = list(range(n)) if total else list(range(UNDEFINED, n))

    def consistent() -> bool:
        for a in range(n):
            for b in range(n):
                ia = a * n + b
                if not assigned[ia]:
                    continue
                ab = code[ia]
                if ab == UNDEFINED:
                    continue
                for c in range(n):
                    ib = b * n + c
                    if not assigned[ib]:
                        continue
                    bc = code[ib]
                    if bc == UNDEFINED:
                        continue
                    il, ir = ab * n + c, a * n + bc
                    if assigned[il] and code[il] == UNDEFINED:
                        return False
                    if assigned[ir] and code[ir] == UNDEFINED:
                        return False
                    if assigned[il] and assigned[ir] and code[il] != code[ir]:
                        return False
        return True

    def fill(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(cells):
            yield tuple(code)
            return
        i, j = cells[k]
        touched = [i * n + j] + ([j * n + i] if commutative else [])
        for v in values:
            for t in touched:
                code[t] = v
                assigned[t] = True
            if consistent():
                yield from fill(k + 1)
        for t in touched:
            code[t] = UNDEFINED
            assigned[t] = False

    yield from fill(0)


def enumerate_ica_systems(
    n: int, commutative: bool = False, total: bool = False, dedup: bool = False
) -> Iterator[MergingSystem]:
    for code in enumerate_ica_codes(n, commutative, total, dedup):
        yield system_from_code(n, code)


def semilattices(n: int) -> list[MergingSystem]:
    """All total join-semilattice tables on ``n`` labelled elements."""
    return list(enumerate_ica_systems(n, commutative=True, total=True))


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def _set_name(bits: int, width: int) -> str:
    return "s" + format(bits, f"0{width}b")


def random_semilattice(rng: random.Random, max_size: int = 6, universe: int = 4, partial: bool = False) -> MergingSystem:
    """Union-closed family of subsets, merged by union.

    With ``partial`` only pairs whose sets meet or are nested are aligned;
    such systems may fail (CA).
    """
    while True:
        gens = {rng.randrange(1, 1 << universe) for _ in range(rng.randint(1, 3))}
        family = set(gens)
        grew = True
        while grew:
            grew = False
            for a in list(family):
                for b in list(family):
                    if a | b not in family:
                        family.add(a | b)
                        grew = True
        if len(family) <= max_size:
            break
    members = sorted(family)
    table = {}
    for a in members:
        for b in members:
            if partial and not (a & b or (a | b) in (a, b)):
                continue
            table[(_set_name(a, universe), _set_name(b, universe))] = _set_name(a | b, universe)
    return MergingSystem(Carrier(_set_name(x, universe) for x in members), table.keys(), table)


def random_system(rng: random.Random, n: int, density: float = 0.6) -> MergingSystem:
    elems = names(n)
    table = {(a, b): rng.choice(elems) for a in elems for b in elems if rng.random() < density}
    return MergingSystem(Carrier(elems), table.keys(), table)


def random_hom(rng: random.Random, max_source: int = 4, max_target: int = 4, tries: int = 200) -> SystemHom:
    """A random source table, a random map and a target table that makes it a homomorphism."""
    for _ in range(tries):
        s = random_system(rng, rng.randint(1, max_source), rng.random())
        m = rng.randint(1, max_target)
        tgt = [x.upper() for x in names(m)]
        f = {x: rng.choice(tgt) for x in s.carrier}
        table: dict[tuple[str, str], str] = {}
        clash = False
        for (x, y), xy in s.merge.items():
            key = (f[x], f[y])
            if table.setdefault(key, f[xy]) != f[xy]:
                clash = True
                break
        if clash:
            continue
        for a in tgt:
            for b in tgt:
                if (a, b) not in table and rng.random() < 0.3:
                    table[(a, b)] = rng.choice(tgt)
        t = MergingSystem(Carrier(tgt), table.keys(), table)
        return SystemHom(s, t, FiniteFunction(s.carrier, t.carrier, f))
    raise RuntimeError("could not build a homomorphism; raise tries")


def random_function(rng: random.Random, max_domain: int = 6, max_codomain: int = 6) -> FiniteFunction:
    dom = Carrier(str(i) for i in range(1, rng.randint(1, max_domain) + 1))
    cod = Carrier(f"t{i}" for i in range(rng.randint(1, max_codomain)))
    return FiniteFunction(dom, cod, {x: rng.choice(cod.elements) for x in dom})


def random_graph(rng: random.Random, n: int, p: float = 0.3, gid: str = "g", labels: str = "ABCDEFG") -> Ontology:
    ids = [f"v{i}" for i in range(n)]
    nodes = [Node(i, rng.choice(labels)) for i in ids]
    edges = [Edge(u, v) for u in ids for v in ids if u != v and rng.random() < p]
    return Ontology(gid, nodes, edges)


def random_graph_hom(rng: random.Random, max_nodes: int = 7) -> GraphHom:
    """Random source graph, random node map, and a target containing every needed edge."""
    src = random_graph(rng, rng.randint(1, max_nodes), gid="src")
    m = rng.randint(1, max_nodes)
    tids = [f"w{i}" for i in range(m)]
    f = {n.id: rng.choice(tids) for n in src.nodes}
    needed = {(f[e.source], f[e.target]) for e in src.edges if f[e.source] != f[e.target]}
    extra = {(u, v) for u in tids for v in tids if u != v and rng.random() < 0.2}
    tgt = Ontology("tgt", [Node(t, t) for t in tids], [Edge(u, v) for u, v in needed | extra])
    return GraphHom(src, tgt, FiniteFunction(src.node_carrier, tgt.node_carrier, f))


def closed_subsets(s: MergingSystem) -> Iterator[tuple[str, ...]]:
    """Nonempty subsets of the carrier closed under merge."""
    elems = s.carrier.elements
    for r in range(1, len(elems) + 1):
        for sub in itertools.combinations(elems, r):
            chosen = set(sub)
            if all(xy in chosen for (x, y), xy in s.merge.items() if x in chosen and y in chosen):
                yield sub


def subsystem_inclusion(s: MergingSystem, subset: tuple[str, ...]) -> SystemHom:
    """Inclusion of the full subsystem on a merge-closed subset."""
    chosen = set(subset)
    table = {(x, y): xy for (x, y), xy in s.merge.items() if x in chosen and y in chosen}
    sub = MergingSystem(s.carrier.subset(subset), table.keys(), table)
    return SystemHom(sub, s, FiniteFunction(sub.carrier, s.carrier, {x: x for x in sub.carrier}))
