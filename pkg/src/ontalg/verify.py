"""Executable forms of the algebra's propositions.

Each suite runs exhaustive checks up to a carrier bound plus seeded random
checks, and collects *refutations*: instances where an implication that
must hold was observed to fail. A suite passes when it collects none.
*Findings* are observations that are expected and documented, such as a
raw image relation that is not transitive.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import closure as cl
from . import generators as gen
from . import merging_system as ms
from . import ontology as ont
from . import order as od
from . import relations as rel
from .errors import OntalgError, Refutation
from .relations import Carrier, FiniteFunction, Partition


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    refutations: list = field(default_factory=list)
    findings: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.refutations

    def refute(self, what: str, witness=None) -> None:
        self.refutations.append({"check": what, "witness": witness})

    def expect(self, cond: bool, what: str, witness=None) -> None:
        self.checked += 1
        if not cond:
            self.refute(what, witness)

    def note(self, key: str, n: int = 1) -> None:
        self.findings[key] = self.findings.get(key, 0) + n

    def line(self) -> str:
        head = "PASS" if self.ok else "REFUTATION"
        extra = "".join(f", {k}={v}" for k, v in sorted(self.findings.items()))
        return f"{head} {self.name}: {self.checked} checks, {len(self.refutations)} refutations{extra} ({self.elapsed:.2f}s)"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "refutations": self.refutations[:20],
            "findings": dict(sorted(self.findings.items())),
        }


def bell(n: int) -> int:
    """Bell numbers by the triangle recurrence."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def same_map(f: FiniteFunction, g: FiniteFunction) -> bool:
    return f.domain == g.domain and all(f(x) == g(x) for x in f.domain)


def random_partition(rng: random.Random, c: Carrier) -> Partition:
    k = rng.randint(1, len(c))
    return Partition.by_key(c, lambda _x: rng.randrange(k))


# ---------------------------------------------------------------------------
# Relations and partitions
# ---------------------------------------------------------------------------


def suite_equivalence(max_n: int = 5, seed: int = 0) -> SuiteResult:
    """Equivalences, partitions, quotients and surjective images correspond."""
    res = SuiteResult("equivalence")
    for n in range(1, max_n + 1):
        c = Carrier(gen.names(n))
        parts = rel.enumerate_partitions(c, bound=max(n, rel.max_carrier()))
        res.expect(len(parts) == bell(n), "partition count is Bell(n)", n)
        for p in parts:
            r = rel.equivalence_from_partition(p)
            res.expect(rel.classify(r).equivalence, "partition gives an equivalence", p.blocks)
            res.expect(rel.partition_from_equivalence(r) == p, "partition round trip", p.blocks)
            res.expect(rel.equivalence_from_partition(rel.partition_from_equivalence(r)).pairs == r.pairs,
                       "equivalence round trip", p.blocks)
            proj = rel.projection(p)
            res.expect(proj.is_surjective(), "projection is surjective", p.blocks)
            res.expect(rel.kernel(proj) == p, "kernel of projection", p.blocks)
        kernels = set()
        for values in itertools.product(range(n), repeat=n):
            f = FiniteFunction(c, Carrier(map(str, range(n))), dict(zip(c, map(str, values))))
            onto = f.corestrict(f.image())
            fac = rel.factorize(onto)
            res.expect(fac.injection.is_injective() and fac.injection.is_surjective(),
                       "surjective image is isomorphic to the quotient by its kernel", values)
            kernels.add(rel.kernel(f))
        res.expect(len(kernels) == bell(n), "surjective images up to iso number Bell(n)", n)
        if n <= 3:
            everything = [(a, b) for a in c for b in c]
            count = 0
            for mask in range(1 << len(everything)):
                r = rel.BinaryRelation(c, (pr for i, pr in enumerate(everything) if mask >> i & 1))
                count += rel.classify(r).equivalence
            res.expect(count == bell(n), "equivalence relation count is Bell(n)", n)
    return res


def suite_lattice(max_n: int = 4, seed: int = 0) -> SuiteResult:
    """Partition lattice laws and the induced surjections between quotients."""
    res = SuiteResult("lattice")
    c = Carrier(gen.names(max_n))
    parts = rel.enumerate_partitions(c, bound=max(max_n, rel.max_carrier()))
    bottom, top = Partition.discrete(c), Partition.indiscrete(c)
    meet, join = rel.meet, rel.join
    for p in parts:
        res.expect(meet([p, p]) == p and join([p, p]) == p, "idempotence", p.blocks)
        res.expect(join([p, bottom]) == p and meet([p, top]) == p, "bounds are units", p.blocks)
        res.expect(meet([p, bottom]) == bottom and join([p, top]) == top, "bounds absorb", p.blocks)
        res.expect(rel.refines(bottom, p) and rel.refines(p, top), "bottom and top", p.blocks)
        for q in parts:
            m, j = meet([p, q]), join([p, q])
            res.expect(m == meet([q, p]) and j == join([q, p]), "commutativity", (p.blocks, q.blocks))
            res.expect(meet([p, j]) == p and join([p, m]) == p, "absorption", (p.blocks, q.blocks))
            res.expect(m.pairs() == p.pairs() & q.pairs(), "meet is intersection", (p.blocks, q.blocks))
            union = rel.BinaryRelation(c, p.pairs() | q.pairs())
            res.expect(j.pairs() == rel.transitive_closure(union).pairs, "join is closure of union",
                       (p.blocks, q.blocks))
            res.expect(rel.refines(p, q) == (p.pairs() <= q.pairs()), "refinement is inclusion",
                       (p.blocks, q.blocks))
            for r in parts:
                res.expect(meet([meet([p, q]), r]) == meet([p, meet([q, r])]), "meet associativity")
                res.expect(join([join([p, q]), r]) == join([p, join([q, r])]), "join associativity")
    refinement_pairs = 0
    for p in parts:
        for q in parts:
            if not rel.refines(p, q):
                continue
            refinement_pairs += 1
            u = rel.induced_surjection(p, q)
            res.expect(u.is_surjective(), "induced map is surjective", (p.blocks, q.blocks))
            res.expect(same_map(u.after(rel.projection(p)), rel.projection(q)), "triangle commutes",
                       (p.blocks, q.blocks))
    res.findings["refinement_pairs"] = refinement_pairs
    res.expect(meet(parts) == bottom and join(parts) == top, "complete lattice bounds")
    return res


def suite_factorization(n_functions: int = 1000, n_graphs: int = 200, seed: int = 0) -> SuiteResult:
    """Epi-mono factorization, lifting and image/pullback squares for sets and graphs."""
    res = SuiteResult("factorization")
    rng = random.Random(seed)
    for _ in range(n_functions):
        f = gen.random_function(rng)
        ker = rel.kernel(f)
        fac = rel.factorize(f)
        res.expect(same_map(fac.injection.after(fac.projection), f), "f = injection ∘ projection", dict(f.map))
        res.expect(fac.injection.is_injective(), "injection is injective", dict(f.map))
        res.expect(fac.projection.is_surjective(), "projection is surjective", dict(f.map))
        rho = rel.meet([ker, random_partition(rng, f.domain)])
        fac = rel.factorize(f, rho)
        pr = rel.projection(rho)
        res.expect(same_map(fac.bridge.after(pr), rel.projection(ker)), "bridge triangle commutes")
        res.expect(same_map(fac.injection.after(fac.bridge).after(pr), f), "factorization square commutes")
        # lifting
        p = random_partition(rng, f.domain)
        uf = rel.UnionFind(f.codomain)
        for block in p.blocks:
            uf.union_all([f(x) for x in block])
        q = rel.join([uf.partition(f.codomain), random_partition(rng, f.codomain)])
        lifted = rel.lift(f, p, q)
        res.expect(same_map(lifted.after(rel.projection(p)), rel.projection(q).after(f)), "lift square commutes")
        if f.is_surjective():
            res.expect(lifted.is_surjective(), "lift of a surjection is surjective")
        # image and inverse image
        q = random_partition(rng, f.codomain)
        sq = rel.image_and_pullback_squares(f, p, q)
        onto = f.corestrict(f.image())
        fp = rel.pushforward(f, p)
        res.expect(same_map(sq.ftilde.after(rel.projection(p)), rel.projection(fp).after(onto)), "image square")
        res.expect(sq.ftilde.is_surjective(), "image map is surjective")
        back = rel.pullback(f, q)
        res.expect(same_map(sq.fstar.after(rel.projection(back)), rel.projection(q).after(f)), "pullback square")
        res.expect(rel.refines(rel.pushforward(f, back), q.restrict(f.image())), "f f⁻¹q ⊆ q")
        res.expect(rel.pullback(f, Partition.discrete(f.codomain)) == ker, "kernel is pullback of diagonal")
    for _ in range(n_graphs):
        h = gen.random_graph_hom(rng)
        gf = ont.graph_factorize(h)
        res.expect(bool(ont.check_graph_hom(gf.pi)) and bool(ont.check_graph_hom(gf.inj)), "legs are graph homs")
        res.expect(gf.inj.node_map.is_injective(), "mono leg is injective")
        res.expect(gf.pi.node_map.is_surjective(), "epi leg is surjective")
        res.expect(same_map(gf.inj.node_map.after(gf.pi.node_map), h.node_map), "h = i ∘ π on nodes")
    return res


def suite_quebec(max_n: int = 0, seed: int = 0) -> SuiteResult:
    """Clustering the climate-data fixture."""
    res = SuiteResult("quebec")
    g = ont.quebec()
    clusters = ont.quebec_clusters()
    qg = ont.quotient_graph(g, ont.NodePartition(g.id, clusters))
    res.expect(len(qg.nodes) == 3, "three clusters", [n.id for n in qg.nodes])
    res.expect(qg.edge_set() == {("en_location", "en_temperature"), ("en_temperature", "en_timestamp")},
               "location → temperature → timestamp", sorted(qg.edge_set()))
    resolved = ont.Ontology.from_json(ont.load_fixture("quebec_resolved"))
    doc = ont.load_fixture("quebec_resolution")
    h = ont.GraphHom(g, resolved, FiniteFunction(g.node_carrier, resolved.node_carrier, doc["map"]))
    res.expect(bool(ont.check_graph_hom(h)), "resolution map is a graph hom")
    gf = ont.graph_factorize(h)
    res.expect(gf.pi.target == qg, "π lands on the cluster quotient")
    res.expect(gf.inj.node_map.is_injective() and gf.inj.node_map.is_surjective(), "quotient ≅ resolved record")
    res.expect(rel.kernel(h.node_map) == clusters, "clusters are the kernel of resolution")
    aligned = rel.BinaryRelation(g.node_carrier, (tuple(p) for p in ont.load_fixture("quebec")["alignments"]))
    sym = rel.BinaryRelation(g.node_carrier, aligned.pairs | rel.inverse(aligned).pairs
                             | rel.BinaryRelation.diagonal(g.node_carrier).pairs)
    res.expect(rel.partition_from_equivalence(sym) == clusters, "alignment arrows generate the clusters")
    return res


def suite_divergence(max_n: int = 0, seed: int = 0) -> SuiteResult:
    """Documented gaps: each is expected to show up as a finding."""
    res = SuiteResult("divergence")
    s = Carrier(["1", "2", "3", "4"])
    t = Carrier(["x", "y", "z"])
    f = FiniteFunction(s, t, {"1": "x", "2": "y", "3": "y", "4": "z"})
    p = Partition(s, [["1", "2"], ["3", "4"]])
    raw = rel.image_relation(f, p)
    if not rel.classify(raw).transitive:
        res.note("raw_image_not_transitive")
    pushed = rel.pushforward(f, p)
    res.expect(rel.classify(rel.equivalence_from_partition(pushed)).equivalence, "pushforward is an equivalence")
    res.expect(pushed == Partition.indiscrete(t), "pushforward is one block", pushed.blocks)
    c = Carrier(["a", "b"])
    r = rel.BinaryRelation(c, [("a", "b")])
    if rel.classify(r).transitive and rel.compose(r, r).pairs != r.pairs:
        res.note("transitive_but_rr_ne_r")
    # kernel of a homomorphism need not leave alignment invariant
    src = ms.MergingSystem.from_table(["a", "b", "c"], {("a", "a"): "a", ("b", "b"): "b", ("c", "c"): "c", ("a", "b"): "b"})
    tgt = ms.MergingSystem.from_table(["X", "Y"], {("X", "X"): "X", ("Y", "Y"): "Y", ("X", "Y"): "Y"})
    h = ms.SystemHom(src, tgt, FiniteFunction(src.carrier, tgt.carrier, {"a": "X", "b": "Y", "c": "X"}))
    if not ms.is_compatible(rel.kernel(h.map), src):
        res.note("kernel_alignment_not_invariant")
    fac = ms.hom_factorize(h)
    res.expect(same_map(fac.embedding.map.after(fac.projection.map), h.map), "factorization still recomposes")
    g = ont.Ontology.build("tri", [("u", "U"), ("v", "V")], [("u", "v")])
    collapsed = ont.quotient_graph(g, Partition.indiscrete(g.node_carrier))
    if not collapsed.edges:
        res.note("quotient_loop_dropped")
    return res


# ---------------------------------------------------------------------------
# Merging systems
# ---------------------------------------------------------------------------


class _CompatCache:
    """Compatible partitions, memoized per system object."""

    def __init__(self):
        self._cache: dict[int, tuple[ms.MergingSystem, list[Partition]]] = {}
        self._parts: dict[tuple[str, ...], list[Partition]] = {}

    def __call__(self, s: ms.MergingSystem) -> list[Partition]:
        hit = self._cache.get(id(s))
        if hit is not None and hit[0] is s:
            return hit[1]
        key = s.carrier.elements
        if key not in self._parts:
            self._parts[key] = rel.enumerate_partitions(s.carrier, bound=len(s.carrier))
        parts = [p for p in self._parts[key] if ms.is_compatible(p, s)]
        self._cache[id(s)] = (s, parts)
        return parts

    def clear(self) -> None:
        self._cache.clear()


def check_hom_family(h: ms.SystemHom, res: SuiteResult, compatible: Callable) -> None:
    """Factorization, lifting and the image/pullback squares for one homomorphism."""
    src, tgt = h.source, h.target
    ker = rel.kernel(h.map)
    fac = ms.hom_factorize(h)
    res.expect(same_map(fac.embedding.map.after(fac.projection.map), h.map), "h = embedding ∘ projection")
    res.expect(fac.embedding.map.is_injective(), "embedding is injective")
    if not ms.is_compatible(ker, src):
        res.note("kernel_alignment_not_invariant")
    src_parts = compatible(src)
    tgt_parts = compatible(tgt)
    sub, onto = ms.image_system(h)
    for rho in src_parts:
        if not rel.refines(rho, ker):
            continue
        fac = ms.hom_factorize(h, rho)
        q, proj = ms.quotient_system(src, rho)
        try:
            ms.SystemHom(q, fac.projection.target, fac.bridge)
            bridge_hom = True
        except OntalgError:
            bridge_hom = False
        res.expect(bridge_hom, "bridge is a homomorphism")
        res.expect(same_map(fac.bridge.after(proj.map), fac.projection.map), "bridge triangle commutes")
        res.expect(same_map(fac.embedding.map.after(fac.bridge).after(proj.map), h.map), "outer triangle commutes")
    for p in src_parts:
        _, pp = ms.quotient_system(src, p)
        for q in tgt_parts:
            if rel._lift_witness(h.map, p, q) is not None:
                continue
            lifted = ms.hom_lift(h, p, q)
            _, pq = ms.quotient_system(tgt, q)
            res.expect(same_map(lifted.map.after(pp.map), pq.map.after(h.map)), "lift square commutes")
            if h.map.is_surjective():
                res.expect(lifted.map.is_surjective(), "lift of a surjection is surjective")
        hp = rel.pushforward(h.map, p)
        if ms.is_compatible(hp, sub):
            tilde = ms.hom_image_system(h, p)
            _, php = ms.quotient_system(sub, hp)
            res.expect(same_map(tilde.map.after(pp.map), php.map.after(onto.map)), "image square commutes")
            res.expect(tilde.map.is_surjective(), "image map is surjective")
        else:
            res.note("image_clustering_incompatible")
    for q in tgt_parts:
        back = rel.pullback(h.map, q)
        if ms.is_compatible(back, src):
            star = ms.hom_pullback_system(h, q)
            _, pb = ms.quotient_system(src, back)
            _, pq = ms.quotient_system(tgt, q)
            res.expect(same_map(star.map.after(pb.map), pq.map.after(h.map)), "pullback square commutes")
        else:
            res.note("pullback_clustering_incompatible")


def suite_merging(max_n: int = 3, seed: int = 0, n_random: int = 300) -> SuiteResult:
    """Quotient systems, factorization, lifting and the image/pullback homs."""
    res = SuiteResult("merging")
    compatible = _CompatCache()
    rng = random.Random(seed)
    for n in range(1, max_n + 1):
        for s in gen.enumerate_tables(n):
            res.note(f"tables_n{n}")
            for p in compatible(s):
                q, proj = ms.quotient_system(s, p)
                res.expect(bool(ms.is_homomorphism(proj.map, s, q)), "projection is a homomorphism", s.to_json())
                check_hom_family(proj, res, compatible)
            # one-element subsystems have a single partition, so their families are degenerate
            for subset in gen.closed_subsets(s):
                if 2 <= len(subset) < len(s.carrier):
                    check_hom_family(gen.subsystem_inclusion(s, subset), res, compatible)
            compatible.clear()
    for _ in range(n_random):
        check_hom_family(gen.random_hom(rng), res, compatible)
    return res


# ---------------------------------------------------------------------------
# Natural order
# ---------------------------------------------------------------------------


def _order_instances(max_n: int, n_random: int, seed: int, dedup: bool = False) -> Iterable[ms.MergingSystem]:
    rng = random.Random(seed)
    for _ in range(n_random):
        yield gen.random_semilattice(rng, partial=rng.random() < 0.5)
    for n in range(1, max_n + 1):
        yield from gen.enumerate_ica_systems(n, dedup=dedup)


def suite_poset(max_n: int = 4, seed: int = 0, n_random: int = 500) -> SuiteResult:
    """(I) and (CA) make the natural order a partial order."""
    res = SuiteResult("poset")
    for s in _order_instances(max_n, n_random, seed):
        report = od.verify_natural_poset(s)
        if report.axiom_I and report.axiom_CA:
            res.note("ica_systems")
            res.expect(not report.refutation, "(I) ∧ (CA) ⇒ poset", s.to_json())
        else:
            res.note("vacuous")
    return res


def suite_order_quotient(max_n: int = 4, seed: int = 0, n_random: int = 500) -> SuiteResult:
    """Quotients of (I)+(CA) systems are posets and lifted maps are monotone."""
    res = SuiteResult("order-quotient")
    compatible = _CompatCache()
    for s in _order_instances(max_n, n_random, seed, dedup=True):
        if not (od.check_axiom_I(s) and od.check_axiom_CA(s)):
            continue
        parts = compatible(s)
        for p in parts:
            try:
                od.quotient_order(s, p)
                res.expect(True, "quotient order is a poset")
                q, proj = ms.quotient_system(s, p)
                res.expect(bool(od.check_axiom_I(q)) and bool(od.check_axiom_CA(q)), "(I)+(CA) pass to quotients")
            except Refutation as exc:
                res.refute(exc.message, exc.witness)
                continue
            for p2 in parts:
                for sigma in compatible(q):
                    if rel._lift_witness(proj.map, p2, sigma) is not None:
                        continue
                    try:
                        lifted = od.lift_order_hom(proj, p2, sigma)
                    except Refutation as exc:
                        res.refute(exc.message, exc.witness)
                        continue
                    _, pp = ms.quotient_system(s, p2)
                    _, ps = ms.quotient_system(q, sigma)
                    res.expect(same_map(lifted.after(pp.map), ps.map.after(proj.map)), "order lift square commutes")
                    res.expect(lifted.is_surjective(), "lift of a surjection is surjective")
    return res


# ---------------------------------------------------------------------------
# Closures
# ---------------------------------------------------------------------------


def _subsets(xs) -> list[tuple[str, ...]]:
    return [sub for r in range(len(xs) + 1) for sub in itertools.combinations(xs, r)]


def check_closure_laws(s: ms.MergingSystem, res: SuiteResult, rng: random.Random, shuffles: int) -> None:
    closed = [set(c) for c in gen.closed_subsets(s)]
    repos = _subsets(s.carrier.elements)
    hull: dict[tuple[str, ...], set[str]] = {}
    for repo in repos:
        result = cl.merging_closure(cl.Repository(s, repo))
        got = set(result.closure)
        hull[repo] = got
        res.expect(result.complete, "table closures finish")
        res.expect(set(repo) <= got, "extensive", repo)
        res.expect(not got or got in closed, "closure is merge-closed", repo)
        res.expect(all(got <= c for c in closed if set(repo) <= c), "least closed superset", repo)
        again = cl.merging_closure(cl.Repository(s, result.closure))
        res.expect(set(again.closure) == got, "idempotent", repo)
        for k in result.closure:
            src = result.provenance[k]
            res.expect(src == ("seed",) or (src[0] in got and src[1] in got and s.merge[src] == k),
                       "provenance generates the element", k)
        for _ in range(shuffles):
            other = cl.merging_closure(cl.Repository(s, repo), rng=rng)
            res.expect(set(other.closure) == got, "order independent", repo)
    for a in repos:
        for b in repos:
            if set(a) <= set(b):
                res.expect(hull[a] <= hull[b], "monotone", (a, b))


def suite_closure(max_n: int = 4, seed: int = 0, n_random: int = 60, shuffles: int = 20) -> SuiteResult:
    """Closure is extensive, monotone, idempotent, least and order independent."""
    res = SuiteResult("closure")
    rng = random.Random(seed)
    for s in gen.semilattices(max_n):
        check_closure_laws(s, res, rng, shuffles)
    for _ in range(n_random):
        check_closure_laws(gen.random_system(rng, rng.randint(1, 5)), res, rng, shuffles)
    # intensional climate records
    en = ont.Ontology.from_json(ont.load_fixture("quebec_en"))
    fr = ont.Ontology.from_json(ont.load_fixture("quebec_fr"))
    algebra = ms.GraphAlgebra()
    result = cl.merging_closure(cl.Repository(algebra, [en, fr]))
    ke, kf = algebra.key(en), algebra.key(fr)
    merged = algebra.key(ont.merge_by_label(en, fr))
    res.expect(len(result.closure) == 3 and result.complete, "climate records close to three elements")
    res.expect(dict(result.provenance) == {ke: ("seed",), kf: ("seed",), merged: (ke, kf)}, "climate provenance")
    return res


def suite_closure_quotient(max_n: int = 4, seed: int = 0, cap: int = 50) -> SuiteResult:
    """Closure commutes with quotients; finiteness transfers."""
    res = SuiteResult("closure-quotient")
    compatible = _CompatCache()
    for s in gen.semilattices(max_n):
        for p in compatible(s):
            for repo in _subsets(s.carrier.elements):
                r = cl.Repository(s, repo)
                report = cl.closure_quotient_commutes(r, p, cap)
                res.expect(report.status == "equal", "closure of quotient = quotient of closure",
                           {"system": s.to_json(), "partition": p.blocks, "repo": repo})
                fin = cl.finiteness_probe(r, p, cap)
                res.expect(fin.status == "finite-both", "table closures are finite on both sides")
    en = ont.Ontology.from_json(ont.load_fixture("quebec_en"))
    fr = ont.Ontology.from_json(ont.load_fixture("quebec_fr"))
    algebra = ms.GraphAlgebra()
    r = cl.Repository(algebra, [en, fr])
    fin = cl.finiteness_probe(r, algebra.key, cap)
    res.expect(fin.status == "finite-both" and fin.closure_size == 3 and fin.quotient_closure_size <= 3,
               "climate records are finite on both sides", fin.to_json())
    by_kind = lambda g: "|".join(sorted({n.kind or "" for n in g.nodes}))
    report = cl.closure_quotient_commutes(r, by_kind, cap)
    res.expect(report.status == "equal", "climate records commute with clustering by kinds", report.to_json())
    fresh = ms.GraphAlgebra(aligned=lambda a, b: True, merge=fresh_label_merge)
    fin = cl.finiteness_probe(cl.Repository(fresh, [en]), fresh.key, cap)
    res.expect(fin.status == "inconclusive", "fresh-label merges exceed the cap", fin.to_json())
    return res


def fresh_label_merge(g1: ont.Ontology, g2: ont.Ontology) -> ont.Ontology:
    """Adversarial merge: union plus one node whose label has never been seen."""
    nodes = {n.label: n for n in (*g1.nodes, *g2.nodes)}
    label = f"fresh{len(nodes)}"
    nodes[label] = ont.Node(f"x{len(nodes)}", label)
    return ont.Ontology("fresh", [ont.Node(f"x{i}", lab, n.kind) for i, (lab, n) in enumerate(sorted(nodes.items()))])


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "equivalence": suite_equivalence,
    "lattice": suite_lattice,
    "factorization": suite_factorization,
    "quebec": suite_quebec,
    "merging": suite_merging,
    "poset": suite_poset,
    "order-quotient": suite_order_quotient,
    "closure": suite_closure,
    "closure-quotient": suite_closure_quotient,
    "divergence": suite_divergence,
}

# exhaustive carrier ceilings; beyond these the enumerations are infeasible
_CEILING = {"equivalence": 6, "lattice": 5, "merging": 3, "poset": 4, "order-quotient": 4, "closure": 5,
            "closure-quotient": 5}


def run_suite(name: str, max_n: int | None = None, seed: int = 0) -> list[SuiteResult]:
    """Run one suite (or ``"all"``) with carriers bounded by ``max_n``."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise OntalgError("unknown-suite", f"no suite named {name!r}; choose from {['all', *SUITES]}")
    out = []
    for n in names:
        fn = SUITES[n]
        kwargs: dict = {"seed": seed}
        if n in _CEILING and max_n is not None:
            kwargs["max_n"] = min(max_n, _CEILING[n])
        start = time.perf_counter()
        result = fn(**kwargs)
        result.elapsed = time.perf_counter() - start
        out.append(result)
    return out
