"""``ontalg``: command-line access to every operation over JSON documents.

Each flag value is a path to a JSON file, an inline JSON document, or
``fixture:<name>`` for a document shipped with the package. Output is
canonically ordered JSON (or DOT with ``--dot``) on stdout or ``--out``.

Exit codes: 0 success, 1 checked domain error or a check that came out
false, 2 a refutation or an I/O failure. Errors go to stderr as
``error:<code>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from . import closure as cl
from . import merging_system as ms
from . import ontology as ont
from . import order as od
from . import relations as rel
from . import verify as vf
from .errors import Check, OntalgError, Refutation
from .relations import BinaryRelation, Carrier, FiniteFunction, Partition

OK, FALSE, REFUTED = 0, 1, 2


# ---------------------------------------------------------------------------
# Input documents
# ---------------------------------------------------------------------------


class InputError(Exception):
    """Unreadable input file; reported as an I/O failure."""


def load_value(raw: str) -> Any:
    """Resolve a flag value to a JSON document."""
    if raw.startswith("fixture:"):
        try:
            return ont.load_fixture(raw.removeprefix("fixture:"))
        except FileNotFoundError as exc:
            raise InputError(f"no packaged fixture {raw!r}") from exc
    path = Path(raw)
    text = None
    if raw and raw.lstrip()[:1] not in "[{\"" and not _is_literal(raw):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {raw}: {exc.strerror or exc}") from exc
    source = raw if text is None else text
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        where = "inline value" if text is None else raw
        raise OntalgError("malformed-json", f"{where}: {exc}") from exc


def _is_literal(raw: str) -> bool:
    s = raw.strip()
    return s in ("true", "false", "null") or s.lstrip("-").replace(".", "", 1).isdigit()


def _strings(xs: Any, what: str) -> list[str]:
    if not isinstance(xs, list) or not all(isinstance(x, str) for x in xs):
        raise OntalgError("malformed-json", f"{what} must be an array of strings")
    return xs


def carrier_of(doc: Any) -> Carrier:
    return Carrier(_strings(doc, "carrier"))


def relation_docs(docs: Sequence[Any]) -> list[BinaryRelation]:
    """Relations as pair arrays or ``{carrier, pairs}``; bare arrays share the union of their elements."""
    explicit = [d for d in docs if isinstance(d, dict)]
    if explicit:
        carrier = carrier_of(explicit[0].get("carrier"))
    else:
        elems = sorted({x for d in docs for pair in _pairs(d) for x in pair})
        carrier = Carrier(elems)
    return [BinaryRelation(carrier, _pairs(d["pairs"] if isinstance(d, dict) else d)) for d in docs]


def _pairs(doc: Any) -> list[tuple[str, str]]:
    if not isinstance(doc, list) or not all(isinstance(p, list) and len(p) == 2 for p in doc):
        raise OntalgError("malformed-json", "a relation is an array of 2-element arrays")
    return [(str(a), str(b)) for a, b in doc]


def _blocks(doc: Any) -> list[list[str]]:
    if isinstance(doc, dict):
        doc = doc.get("blocks")
    if not isinstance(doc, list) or not all(isinstance(b, list) for b in doc):
        raise OntalgError("malformed-json", "a partition is an array of arrays of strings")
    return [_strings(b, "partition block") for b in doc]


def partition_doc(doc: Any, carrier: Carrier | None = None) -> Partition:
    if carrier is None and isinstance(doc, dict) and "carrier" in doc:
        carrier = carrier_of(doc["carrier"])
    blocks = _blocks(doc)
    if carrier is None:
        carrier = Carrier(sorted({x for b in blocks for x in b}))
    return Partition(carrier, blocks)


def partition_docs(docs: Sequence[Any]) -> list[Partition]:
    """Several partitions of one carrier (the union of their elements unless given)."""
    explicit = [d for d in docs if isinstance(d, dict) and "carrier" in d]
    if explicit:
        carrier = carrier_of(explicit[0]["carrier"])
    else:
        carrier = Carrier(sorted({x for d in docs for b in _blocks(d) for x in b}))
    return [partition_doc(d, carrier) for d in docs]


def function_doc(doc: Any, domain: Carrier | None = None, codomain: Carrier | None = None) -> FiniteFunction:
    if not isinstance(doc, dict) or not isinstance(doc.get("map"), dict):
        raise OntalgError("malformed-json", "a function is {domain, codomain, map: {elem: elem}}")
    mapping = doc["map"]
    if "domain" in doc:
        domain = carrier_of(doc["domain"])
    if "codomain" in doc:
        codomain = carrier_of(doc["codomain"])
    domain = domain or Carrier(sorted(mapping))
    codomain = codomain or Carrier(sorted(set(mapping.values())))
    return FiniteFunction(domain, codomain, mapping)


def graph_doc(doc: Any) -> ont.Ontology:
    if not isinstance(doc, dict):
        raise OntalgError("malformed-json", "an ontology is {id, nodes, edges}")
    return ont.Ontology.from_json(doc)


def system_doc(doc: Any) -> ms.MergingSystem:
    if not isinstance(doc, dict):
        raise OntalgError("malformed-json", "a merging system is {carrier, align, merge}")
    return ms.MergingSystem.from_json(doc)


# ---------------------------------------------------------------------------
# Output documents
# ---------------------------------------------------------------------------


def relation_json(r: BinaryRelation) -> list:
    return [list(p) for p in sorted(r.pairs)]


def partition_json(p: Partition) -> list:
    return sorted(sorted(b) for b in p.blocks)


def function_json(f: FiniteFunction) -> dict:
    return {"domain": list(f.domain), "codomain": list(f.codomain), "map": dict(f.map)}


def check_json(c: Check, key: str = "ok") -> dict:
    out: dict = {key: c.ok}
    if not c.ok:
        out["witness"] = c.witness
        if c.reason:
            out["reason"] = c.reason
    return out


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"), default=_jsonable) + "\n"


def _jsonable(x: Any) -> Any:
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


# ---------------------------------------------------------------------------
# Operation registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Op:
    verb: str
    name: str | None
    targets: tuple[Callable, ...]
    run: Callable[[argparse.Namespace], tuple[Any, int]]
    help: str


REGISTRY: list[Op] = []


def op(verb: str, name: str | None, *targets: Callable, help: str = ""):
    def register(fn):
        REGISTRY.append(Op(verb, name, targets, fn, help or (fn.__doc__ or "").strip()))
        return fn

    return register


def _need(ns: argparse.Namespace, flag: str, count: int = 1) -> list:
    values = getattr(ns, flag.replace("-", "_")) or []
    if not isinstance(values, list):
        values = [values]
    if len(values) < count:
        raise OntalgError("missing-input", f"--{flag} is needed {count} time(s), got {len(values)}")
    return [load_value(v) for v in values]


def _graphs(ns, count=1) -> list[ont.Ontology]:
    return [graph_doc(d) for d in _need(ns, "graph", count)]


def _systems(ns, count=1) -> list[ms.MergingSystem]:
    return [system_doc(d) for d in _need(ns, "system", count)]


def _function(ns, domain=None, codomain=None) -> FiniteFunction:
    return function_doc(_need(ns, "function")[0], domain, codomain)


def _check(c: Check, key: str = "ok") -> tuple[Any, int]:
    return check_json(c, key), OK if c.ok else FALSE


def _graph_out(ns, g: ont.Ontology) -> tuple[Any, int]:
    return (ont.to_dot(g) if ns.dot else g.to_json()), OK


def _sys_hom(ns) -> ms.SystemHom:
    src, tgt = _systems(ns, 2)
    return ms.SystemHom(src, tgt, _function(ns, src.carrier, tgt.carrier))


def _graph_hom(ns) -> ont.GraphHom:
    src, tgt = _graphs(ns, 2)
    return ont.GraphHom(src, tgt, _function(ns, src.node_carrier, tgt.node_carrier))


# relation ---------------------------------------------------------------


@op("relation", "compose", rel.compose, help="pairs (a, c) with a r1 b and b r2 c")
def _relation_compose(ns):
    r1, r2 = relation_docs(_need(ns, "relation", 2)[:2])
    return relation_json(rel.compose(r1, r2)), OK


@op("relation", "inverse", rel.inverse, help="swap every pair")
def _relation_inverse(ns):
    (r,) = relation_docs(_need(ns, "relation")[:1])
    return relation_json(rel.inverse(r)), OK


@op("relation", "classify", rel.classify, help="reflexive / symmetric / transitive / equivalence flags")
def _relation_classify(ns):
    (r,) = relation_docs(_need(ns, "relation")[:1])
    return rel.classify(r)._asdict(), OK


@op("relation", "transitive-closure", rel.transitive_closure, help="least transitive superset")
def _relation_closure(ns):
    (r,) = relation_docs(_need(ns, "relation")[:1])
    return relation_json(rel.transitive_closure(r)), OK


@op("relation", "to-partition", rel.partition_from_equivalence, help="classes of an equivalence")
def _relation_to_partition(ns):
    (r,) = relation_docs(_need(ns, "relation")[:1])
    return partition_json(rel.partition_from_equivalence(r)), OK


@op("relation", "image", rel.image_relation, help="raw image of a partition under --function (may be non-transitive)")
def _relation_image(ns):
    f = _function(ns)
    p = partition_doc(_need(ns, "partition")[0], f.domain)
    r = rel.image_relation(f, p)
    return {"pairs": relation_json(r), "flags": rel.classify(r)._asdict()}, OK


# partition --------------------------------------------------------------


@op("partition", "to-relation", rel.equivalence_from_partition, help="the equivalence of a partition")
def _partition_to_relation(ns):
    p = partition_doc(_need(ns, "partition")[0])
    return relation_json(rel.equivalence_from_partition(p)), OK


@op("partition", "project", rel.projection, help="canonical projection onto the blocks")
def _partition_project(ns):
    return function_json(rel.projection(partition_doc(_need(ns, "partition")[0]))), OK


@op("partition", "kernel", rel.kernel, help="fibres of --function")
def _partition_kernel(ns):
    return partition_json(rel.kernel(_function(ns))), OK


@op("partition", "pushforward", rel.pushforward, help="equivalence on f(S) generated by the image of --partition")
def _partition_pushforward(ns):
    f = _function(ns)
    return partition_json(rel.pushforward(f, partition_doc(_need(ns, "partition")[0], f.domain))), OK


@op("partition", "pullback", rel.pullback, help="inverse image of a codomain --partition")
def _partition_pullback(ns):
    f = _function(ns)
    return partition_json(rel.pullback(f, partition_doc(_need(ns, "partition")[0], f.codomain))), OK


@op("partition", "meet", rel.meet, help="common refinement of every --partition")
def _partition_meet(ns):
    return partition_json(rel.meet(partition_docs(_need(ns, "partition")))), OK


@op("partition", "join", rel.join, help="finest partition coarser than every --partition")
def _partition_join(ns):
    return partition_json(rel.join(partition_docs(_need(ns, "partition")))), OK


@op("partition", "refines", rel.refines, help="whether the first --partition refines the second")
def _partition_refines(ns):
    p, q = partition_docs(_need(ns, "partition", 2)[:2])
    ok = rel.refines(p, q)
    return _check(Check(ok, None if ok else list(rel._refinement_witness(p, q)), None if ok else "split block"),
                  "refines")


@op("partition", "induced-surjection", rel.induced_surjection, help="S/p → S/q for p finer than q")
def _partition_induced(ns):
    p, q = partition_docs(_need(ns, "partition", 2)[:2])
    return function_json(rel.induced_surjection(p, q)), OK


@op("partition", "enumerate", rel.enumerate_partitions, help="every partition of the carrier of --partition")
def _partition_enumerate(ns):
    if ns.partition:
        carrier = partition_doc(_need(ns, "partition")[0]).carrier
    elif ns.max_n:
        carrier = Carrier(str(i) for i in range(1, ns.max_n + 1))
    else:
        raise OntalgError("missing-input", "give a --partition (its carrier is used) or --max-n")
    parts = rel.enumerate_partitions(carrier)
    return {"count": len(parts), "partitions": sorted(partition_json(p) for p in parts)}, OK


@op("partition", "is-congruence", rel.congruence_check, rel.is_congruence,
    help="whether --partition is a congruence for the total merge table of --system")
def _partition_is_congruence(ns):
    (s,) = _systems(ns)
    p = partition_doc(_need(ns, "partition")[0], s.carrier)
    return _check(rel.congruence_check(p, s.merge), "congruence")


@op("partition", "congruence-closure", rel.congruence_closure,
    help="least congruence of the total merge table of --system containing --partition")
def _partition_congruence_closure(ns):
    (s,) = _systems(ns)
    p = partition_doc(_need(ns, "partition")[0], s.carrier)
    return partition_json(rel.congruence_closure(p, s.merge)), OK


# graphs -----------------------------------------------------------------


@op("quotient", None, ont.quotient_graph, help="quotient of --graph by a --partition of its nodes")
def _quotient(ns):
    (g,) = _graphs(ns)
    p = partition_doc(_need(ns, "partition")[0], g.node_carrier)
    return _graph_out(ns, ont.quotient_graph(g, ont.NodePartition(g.id, p)))


@op("dot", None, ont.to_dot, help="Graphviz DOT rendering of --graph")
def _dot(ns):
    (g,) = _graphs(ns)
    return ont.to_dot(g), OK


@op("merge", None, ont.merge_by_label, help="merge every --graph by identifying equal labels")
def _merge(ns):
    graphs = _graphs(ns, 2)
    out = graphs[0]
    for g in graphs[1:]:
        out = ont.merge_by_label(out, g)
    return _graph_out(ns, out)


@op("cluster", "check-hom", ont.check_graph_hom, help="whether --function is a graph hom between two --graph")
def _cluster_check_hom(ns):
    return _check(ont.check_graph_hom(_graph_hom(ns)), "homomorphism")


@op("cluster", "canonical", ont.canonical_form, help="canonical relabelling of --graph")
def _cluster_canonical(ns):
    (g,) = _graphs(ns)
    return _graph_out(ns, ont.canonical_form(g))


@op("cluster", "align", ont.aligned_by_label, help="whether two --graph share a node label")
def _cluster_align(ns):
    g1, g2 = _graphs(ns, 2)
    ok = ont.aligned_by_label(g1, g2)
    return {"aligned": ok, "shared_labels": sorted(g1.labels() & g2.labels())}, OK if ok else FALSE


# lift / factorize -------------------------------------------------------


@op("lift", "map", rel.lift, help="S/p → T/q induced by --function (two --partition)")
def _lift_map(ns):
    f = _function(ns)
    p, q = _need(ns, "partition", 2)[:2]
    return function_json(rel.lift(f, partition_doc(p, f.domain), partition_doc(q, f.codomain))), OK


@op("lift", "squares", rel.image_and_pullback_squares, help="image and inverse-image maps for two --partition")
def _lift_squares(ns):
    f = _function(ns)
    p, q = _need(ns, "partition", 2)[:2]
    sq = rel.image_and_pullback_squares(f, partition_doc(p, f.domain), partition_doc(q, f.codomain))
    return {"ftilde": function_json(sq.ftilde), "fstar": function_json(sq.fstar)}, OK


@op("factorize", "function", rel.factorize, help="epi-mono factorization of --function, through an optional --partition")
def _factorize_function(ns):
    f = _function(ns)
    rho = partition_doc(_need(ns, "partition")[0], f.domain) if ns.partition else None
    fac = rel.factorize(f, rho)
    out = {"projection": function_json(fac.projection), "injection": function_json(fac.injection)}
    if fac.bridge is not None:
        out["bridge"] = function_json(fac.bridge)
    return out, OK


@op("factorize", "graph", ont.graph_factorize, help="graph hom (two --graph, --function) through its image quotient")
def _factorize_graph(ns):
    gf = ont.graph_factorize(_graph_hom(ns))
    return {"quotient": gf.pi.target.to_json(), "pi": function_json(gf.pi.node_map),
            "inj": function_json(gf.inj.node_map)}, OK


# system -----------------------------------------------------------------


@op("system", "is-homomorphism", ms.is_homomorphism, help="whether --function is a homomorphism of two --system")
def _system_is_hom(ns):
    src, tgt = _systems(ns, 2)
    return _check(ms.is_homomorphism(_function(ns, src.carrier, tgt.carrier), src, tgt), "homomorphism")


@op("system", "is-compatible", ms.is_compatible, help="whether --partition is compatible with --system")
def _system_is_compatible(ns):
    (s,) = _systems(ns)
    return _check(ms.is_compatible(partition_doc(_need(ns, "partition")[0], s.carrier), s), "compatible")


@op("system", "quotient", ms.quotient_system, help="quotient system and its projection")
def _system_quotient(ns):
    (s,) = _systems(ns)
    q, proj = ms.quotient_system(s, partition_doc(_need(ns, "partition")[0], s.carrier))
    return {"system": q.to_json(), "projection": function_json(proj.map)}, OK


@op("system", "factorize", ms.hom_factorize, help="homomorphism through the quotient by its kernel")
def _system_factorize(ns):
    h = _sys_hom(ns)
    rho = partition_doc(_need(ns, "partition")[0], h.source.carrier) if ns.partition else None
    fac = ms.hom_factorize(h, rho)
    out = {"middle": fac.projection.target.to_json(), "projection": function_json(fac.projection.map),
           "embedding": function_json(fac.embedding.map)}
    if fac.bridge is not None:
        out["bridge"] = function_json(fac.bridge)
    return out, OK


@op("system", "lift", ms.hom_lift, help="source/p → target/q for a homomorphism (two --partition)")
def _system_lift(ns):
    h = _sys_hom(ns)
    p, q = _need(ns, "partition", 2)[:2]
    lifted = ms.hom_lift(h, partition_doc(p, h.source.carrier), partition_doc(q, h.target.carrier))
    return {"source": lifted.source.to_json(), "target": lifted.target.to_json(), "map": function_json(lifted.map)}, OK


@op("system", "image", ms.image_system, ms.hom_image_system,
    help="image subsystem; with --partition also source/p → image/hp")
def _system_image(ns):
    h = _sys_hom(ns)
    sub, onto = ms.image_system(h)
    out: dict = {"image": sub.to_json(), "onto": function_json(onto.map)}
    if ns.partition:
        tilde = ms.hom_image_system(h, partition_doc(_need(ns, "partition")[0], h.source.carrier))
        out["quotient_map"] = function_json(tilde.map)
        out["quotient_image"] = tilde.target.to_json()
    return out, OK


@op("system", "pullback", ms.hom_pullback_system, help="source/h⁻¹q → target/q for a target --partition")
def _system_pullback(ns):
    h = _sys_hom(ns)
    star = ms.hom_pullback_system(h, partition_doc(_need(ns, "partition")[0], h.target.carrier))
    return {"source": star.source.to_json(), "target": star.target.to_json(), "map": function_json(star.map)}, OK


@op("system", "realize", ms.realize_intensional, help="close the --graph ontologies under merge and tabulate")
def _system_realize(ns):
    graphs = _graphs(ns)
    isys = ms.realize_intensional(graphs, cap=ns.cap or cl.DEFAULT_CAP)
    return {"system": isys.system.to_json(), "members": {k: g.to_json() for k, g in isys.members.items()}}, OK


# order ------------------------------------------------------------------


@op("order", "natural", od.natural_order, help="natural order of --system")
def _order_natural(ns):
    (s,) = _systems(ns)
    return od.natural_order(s).to_json(), OK


@op("order", "axiom-i", od.check_axiom_I, help="idempotence check")
def _order_axiom_i(ns):
    (s,) = _systems(ns)
    return _check(od.check_axiom_I(s), "axiom_I")


@op("order", "axiom-ca", od.check_axiom_CA, help="conditional associativity check")
def _order_axiom_ca(ns):
    (s,) = _systems(ns)
    return _check(od.check_axiom_CA(s), "axiom_CA")


@op("order", "verify-poset", od.verify_natural_poset, help="(I), (CA) and the poset flags; exit 2 on a refutation")
def _order_verify(ns):
    (s,) = _systems(ns)
    report = od.verify_natural_poset(s)
    return report.to_json(), REFUTED if report.refutation else OK


@op("order", "quotient", od.quotient_order, help="natural order of the quotient by --partition")
def _order_quotient(ns):
    (s,) = _systems(ns)
    return od.quotient_order(s, partition_doc(_need(ns, "partition")[0], s.carrier)).to_json(), OK


@op("order", "lift", od.lift_order_hom, help="monotone lifted map for a homomorphism (two --partition)")
def _order_lift(ns):
    h = _sys_hom(ns)
    p, q = _need(ns, "partition", 2)[:2]
    return function_json(od.lift_order_hom(h, partition_doc(p, h.source.carrier), partition_doc(q, h.target.carrier))), OK


@op("order", "hasse", od.hasse_diagram, help="covering graph of the natural order")
def _order_hasse(ns):
    (s,) = _systems(ns)
    return _graph_out(ns, od.hasse_diagram(od.natural_order(s)))


# closure ----------------------------------------------------------------


def kind_signature(g: ont.Ontology) -> str:
    """Clustering used for graph repositories: the set of node kinds."""
    return "|".join(sorted({n.kind or "" for n in g.nodes}))


def _repository(ns) -> tuple[cl.Repository, Any]:
    cap = ns.cap or cl.DEFAULT_CAP
    if ns.system:
        (s,) = _systems(ns)
        members = _strings(_need(ns, "repo")[0], "--repo") if ns.repo else []
        p = partition_doc(_need(ns, "partition")[0], s.carrier) if ns.partition else None
        return cl.Repository(s, members), p
    if ns.graph:
        if ns.partition:
            raise OntalgError("bad-partition", "graph repositories are clustered by node-kind signature")
        return cl.Repository(ms.GraphAlgebra(), _graphs(ns)), kind_signature
    raise OntalgError("missing-input", "give --system with --repo, or one --graph per repository member")


def _cap(ns) -> int:
    return ns.cap or cl.DEFAULT_CAP


@op("closure", "compute", cl.merging_closure, help="merging closure of the repository")
def _closure_compute(ns):
    r, _ = _repository(ns)
    return cl.merging_closure(r, _cap(ns)).to_json(), OK


def _clustering(p):
    if p is None:
        raise OntalgError("missing-input", "a --partition is needed to cluster a table repository")
    return p


@op("closure", "commutes", cl.closure_quotient_commutes, help="closure of the clustered repository vs clustered closure")
def _closure_commutes(ns):
    r, p = _repository(ns)
    report = cl.closure_quotient_commutes(r, _clustering(p), _cap(ns))
    return report.to_json(), REFUTED if report.refutation else OK


@op("closure", "finiteness", cl.finiteness_probe, help="whether both closures finish under --cap")
def _closure_finiteness(ns):
    r, p = _repository(ns)
    report = cl.finiteness_probe(r, _clustering(p), _cap(ns))
    return report.to_json(), REFUTED if report.refutation else OK


# verify -----------------------------------------------------------------


@op("verify", None, vf.run_suite, help="run a verification suite (--suite, --max-n, --seed)")
def _verify(ns):
    results = vf.run_suite(ns.suite or "all", ns.max_n, ns.seed)
    lines = []
    for r in results:
        lines.append(r.line())
        for ref in r.refutations[:5]:
            lines.append("  witness " + dumps(ref).strip())
    code = OK if all(r.ok for r in results) else REFUTED
    return "\n".join(lines) + "\n", code


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def verbs() -> dict[str, list[Op]]:
    out: dict[str, list[Op]] = {}
    for o in REGISTRY:
        out.setdefault(o.verb, []).append(o)
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise OntalgError("unknown-verb" if "argument VERB" in message else "usage", message)


def _add_flags(p: argparse.ArgumentParser) -> None:
    for flag, what in (("graph", "ontology"), ("partition", "partition"), ("relation", "relation"),
                       ("system", "merging system")):
        p.add_argument(f"--{flag}", action="append", metavar="JSON", help=f"{what} (path, inline JSON or fixture:NAME; repeatable)")
    p.add_argument("--function", metavar="JSON", help="finite function {domain, codomain, map}")
    p.add_argument("--repo", metavar="JSON", help="array of carrier elements")
    p.add_argument("--cap", type=int, help=f"closure size cap (default {cl.DEFAULT_CAP})")
    p.add_argument("--suite", help="verification suite name or 'all'")
    p.add_argument("--max-n", type=int, help="exhaustive carrier bound")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized suites (default 0)")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT instead of JSON")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ontalg", description="Partition, quotient and merging-system algebra for ontologies.")
    parser.add_argument("--version", action="version", version=f"ontalg {__version__}")
    sub = parser.add_subparsers(dest="verb", metavar="VERB")
    for verb, ops in verbs().items():
        named = [o for o in ops if o.name]
        summary = "; ".join(f"{o.name}: {o.help}" for o in named) if named else ops[0].help
        vp = sub.add_parser(verb, help=summary, description=summary)
        if named:
            default = "compute" if verb == "closure" else None
            vp.add_argument("op", nargs="?" if default else None, default=default,
                            choices=[o.name for o in named], help="operation")
        _add_flags(vp)
    return parser


def _dispatch(ns: argparse.Namespace) -> tuple[Any, int]:
    if ns.verb is None:
        raise OntalgError("usage", "a verb is required; see --help")
    name = getattr(ns, "op", None)
    for o in verbs()[ns.verb]:
        if o.name == name:
            return o.run(ns)
    raise OntalgError("usage", f"unknown operation {name!r} for {ns.verb}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        payload, code = _dispatch(ns)
    except Refutation as exc:
        print(f"error:refutation: {exc.message} " + dumps({"witness": exc.witness}).strip(), file=sys.stderr)
        return REFUTED
    except OntalgError as exc:
        print(f"error:{exc.code}: {exc.message}", file=sys.stderr)
        return FALSE
    except InputError as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return REFUTED
    text = payload if isinstance(payload, str) else dumps(payload)
    if ns.out:
        try:
            Path(ns.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error:io: cannot write {ns.out}: {exc.strerror or exc}", file=sys.stderr)
            return REFUTED
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
