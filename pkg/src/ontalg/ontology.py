"""Concrete ontologies as finite directed labelled graphs.

Nodes carry an id, a label and an optional kind; edges are ordered node
pairs (never loops) carrying a set of edge labels. The module provides
quotient graphs, graph homomorphisms and their epi-mono factorization, the
label-based alignment/merge pair used by intensional merging systems, a
canonical form for isomorphism-stable identity, and JSON/DOT I/O.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from itertools import chain
from typing import Iterable, Mapping, NamedTuple

from .errors import PASS, Check, OntalgError
from .relations import Carrier, FiniteFunction, Partition, kernel, projection

DEFAULT_ISO_BOUND = 10


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    kind: str | None = None


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    labels: frozenset[str] = frozenset()


@dataclass(frozen=True, init=False)
class Ontology:
    """Directed labelled graph; nodes sorted by id, edges by endpoints."""

    id: str
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def __init__(self, id: str, nodes: Iterable[Node], edges: Iterable[Edge] = ()):
        nodes = tuple(sorted(nodes, key=lambda n: n.id))
        ids = [n.id for n in nodes]
        if len(set(ids)) != len(ids):
            raise OntalgError("bad-ontology", f"duplicate node ids in {id!r}")
        known = set(ids)
        merged: dict[tuple[str, str], set[str]] = {}
        for e in edges:
            if e.source not in known or e.target not in known:
                raise OntalgError("bad-ontology", f"edge {e.source}->{e.target} has a missing endpoint")
            if e.source == e.target:
                raise OntalgError("bad-ontology", f"self-loop at {e.source!r}")
            merged.setdefault((e.source, e.target), set()).update(e.labels)
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(
            self, "edges", tuple(Edge(u, v, frozenset(ls)) for (u, v), ls in sorted(merged.items()))
        )

    @classmethod
    def build(cls, id: str, nodes: Iterable[tuple], edges: Iterable[tuple] = ()) -> Ontology:
        """Shorthand: nodes as ``(id, label[, kind])``, edges as ``(u, v[, label])``."""
        return cls(
            id,
            [Node(*n) for n in nodes],
            [Edge(e[0], e[1], frozenset(e[2:3])) for e in edges],
        )

    @property
    def node_carrier(self) -> Carrier:
        return Carrier(n.id for n in self.nodes)

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def labels(self) -> set[str]:
        return {n.label for n in self.nodes}

    def edge_set(self) -> set[tuple[str, str]]:
        return {(e.source, e.target) for e in self.edges}

    def to_json(self) -> dict:
        nodes = []
        for n in self.nodes:
            d = {"id": n.id, "label": n.label}
            if n.kind is not None:
                d["kind"] = n.kind
            nodes.append(d)
        edges = []
        for e in self.edges:
            d = {"from": e.source, "to": e.target}
            if len(e.labels) == 1:
                d["label"] = next(iter(e.labels))
            elif e.labels:
                d["label"] = sorted(e.labels)
            edges.append(d)
        return {"id": self.id, "nodes": nodes, "edges": edges}

    @classmethod
    def from_json(cls, data: Mapping) -> Ontology:
        try:
            nodes = [Node(n["id"], n["label"], n.get("kind")) for n in data["nodes"]]
            edges = []
            for e in data.get("edges", []):
                label = e.get("label")
                labels = frozenset() if label is None else frozenset([label] if isinstance(label, str) else label)
                edges.append(Edge(e["from"], e["to"], labels))
            return cls(data["id"], nodes, edges)
        except (KeyError, TypeError) as exc:
            raise OntalgError("malformed-json", f"bad ontology document: {exc}") from exc


@dataclass(frozen=True)
class NodePartition:
    """A partition of one ontology's nodes."""

    ontology_id: str
    partition: Partition


@dataclass(frozen=True)
class GraphHom:
    source: Ontology
    target: Ontology
    node_map: FiniteFunction

    def __post_init__(self):
        if self.node_map.domain != self.source.node_carrier or self.node_map.codomain != self.target.node_carrier:
            raise OntalgError("carrier-mismatch", "node map must go from source nodes to target nodes")


class GraphFactorization(NamedTuple):
    pi: GraphHom
    inj: GraphHom


# ---------------------------------------------------------------------------
# Quotients and homomorphisms
# ---------------------------------------------------------------------------


def _node_partition(g: Ontology, np: NodePartition | Partition) -> Partition:
    if isinstance(np, NodePartition):
        if np.ontology_id != g.id:
            raise OntalgError("partition-mismatch", f"partition is for {np.ontology_id!r}, not {g.id!r}")
        p = np.partition
    else:
        p = np
    if set(p.carrier) != {n.id for n in g.nodes}:
        raise OntalgError("partition-mismatch", "partition carrier must be exactly the node ids")
    if p.carrier != g.node_carrier:
        p = Partition(g.node_carrier, p.blocks)
    return p


def _joined_kind(kinds: Iterable[str | None]) -> str | None:
    ks = sorted({k for k in kinds if k is not None})
    return "|".join(ks) if ks else None


def quotient_graph(g: Ontology, np: NodePartition | Partition) -> Ontology:
    """Collapse each block to one node; edges inside a block are dropped.

    A block is labelled with its members' distinct labels, sorted and
    joined by ``|``, so a block of equally labelled nodes keeps the label.
    """
    p = _node_partition(g, np)
    nodes = []
    for block in p.blocks:
        members = [g.node(x) for x in block]
        nodes.append(
            Node(block[0], "|".join(sorted({m.label for m in members})), _joined_kind(m.kind for m in members))
        )
    edges = [
        Edge(p.name_of(e.source), p.name_of(e.target), e.labels)
        for e in g.edges
        if not p.same_block(e.source, e.target)
    ]
    return Ontology(f"{g.id}_quotient", nodes, edges)


def check_graph_hom(h: GraphHom) -> Check:
    """Every edge must land on an edge or collapse to a single node."""
    target_edges = h.target.edge_set()
    for e in h.source.edges:
        u, v = h.node_map(e.source), h.node_map(e.target)
        if u != v and (u, v) not in target_edges:
            return Check(False, (e.source, e.target), f"edge maps to non-edge ({u}, {v})")
    return PASS


def graph_factorize(h: GraphHom) -> GraphFactorization:
    """``h = inj ∘ pi`` with ``pi`` onto the quotient by the kernel of ``h``."""
    ok = check_graph_hom(h)
    if not ok:
        raise OntalgError("not-a-homomorphism", ok.reason or "", ok.witness)
    ker = kernel(h.node_map)
    q = quotient_graph(h.source, ker)
    pi = GraphHom(h.source, q, projection(ker))
    inj = GraphHom(q, h.target, FiniteFunction(q.node_carrier, h.target.node_carrier, {n: h.node_map(n) for n in ker.names}))
    return GraphFactorization(pi, inj)


# ---------------------------------------------------------------------------
# Label alignment and merge
# ---------------------------------------------------------------------------


def aligned_by_label(g1: Ontology, g2: Ontology) -> bool:
    return not g1.labels().isdisjoint(g2.labels())


def merge_by_label(g1: Ontology, g2: Ontology) -> Ontology:
    """Union of two graphs, identifying nodes with equal labels.

    Each label class keeps its least node id. If two different label
    classes would end up with the same id, the id is suffixed with
    ``@label``. Loops created by the identification are dropped.
    """
    if not aligned_by_label(g1, g2):
        raise OntalgError("not-aligned", f"{g1.id!r} and {g2.id!r} share no label")
    by_label: dict[str, list[Node]] = {}
    for n in chain(g1.nodes, g2.nodes):
        by_label.setdefault(n.label, []).append(n)
    chosen = {label: min(n.id for n in ns) for label, ns in by_label.items()}
    clashes = {i for i in chosen.values() if list(chosen.values()).count(i) > 1}
    new_id = {label: (f"{i}@{label}" if i in clashes else i) for label, i in chosen.items()}

    nodes = [Node(new_id[label], label, min((n.kind for n in ns if n.kind is not None), default=None))
             for label, ns in by_label.items()]
    edges = []
    for g in (g1, g2):
        lab = {n.id: n.label for n in g.nodes}
        for e in g.edges:
            u, v = new_id[lab[e.source]], new_id[lab[e.target]]
            if u != v:
                edges.append(Edge(u, v, e.labels))
    return Ontology("+".join(sorted({g1.id, g2.id})), nodes, edges)


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


def _encoding(g: Ontology, order: list[str]) -> tuple:
    pos = {x: i for i, x in enumerate(order)}
    nodes = tuple((g.node(x).label, g.node(x).kind or "") for x in order)
    edges = tuple(sorted((pos[e.source], pos[e.target], tuple(sorted(e.labels))) for e in g.edges))
    return nodes, edges


def _refine(g: Ontology, colors: dict[str, int]) -> dict[str, int]:
    """Colour refinement to a stable colouring; colours are invariant ranks."""
    out: dict[str, list] = {n.id: [] for n in g.nodes}
    inc: dict[str, list] = {n.id: [] for n in g.nodes}
    for e in g.edges:
        labels = tuple(sorted(e.labels))
        out[e.source].append((e.target, labels))
        inc[e.target].append((e.source, labels))
    while True:
        sig = {
            x: (
                colors[x],
                tuple(sorted((colors[y], ls) for y, ls in out[x])),
                tuple(sorted((colors[y], ls) for y, ls in inc[x])),
            )
            for x in colors
        }
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {x: ranks[sig[x]] for x in colors}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def _are_twins(g: Ontology, u: str, v: str) -> bool:
    """Swapping ``u`` and ``v`` is an automorphism (given equal colours)."""
    def nbhd(x: str, other: str):
        outs = {(e.target, e.labels) for e in g.edges if e.source == x and e.target != other}
        ins = {(e.source, e.labels) for e in g.edges if e.target == x and e.source != other}
        return outs, ins

    uv = {e.labels for e in g.edges if (e.source, e.target) == (u, v)}
    vu = {e.labels for e in g.edges if (e.source, e.target) == (v, u)}
    return uv == vu and nbhd(u, v) == nbhd(v, u)


def _exact_order(g: Ontology) -> list[str]:
    base = sorted({(n.label, n.kind or "") for n in g.nodes})
    rank = {k: i for i, k in enumerate(base)}
    start = _refine(g, {n.id: rank[(n.label, n.kind or "")] for n in g.nodes})
    best: tuple | None = None
    best_order: list[str] = []

    def search(colors: dict[str, int]) -> None:
        nonlocal best, best_order
        cells: dict[int, list[str]] = {}
        for x, c in colors.items():
            cells.setdefault(c, []).append(x)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            order = sorted(colors, key=colors.__getitem__)
            enc = _encoding(g, order)
            if best is None or enc < best:
                best, best_order = enc, order
            return
        tried: list[str] = []
        for x in sorted(cells[target]):
            if any(_are_twins(g, x, t) for t in tried):
                continue
            tried.append(x)
            # individualise x: it gets a colour just below its old cell
            split ={y: (2 * c if c != target else 2 * c + (0 if y == x else 1)) for y, c in colors.items()}
            search(_refine(g, split))

    search(start)
    return best_order


def _label_order(g: Ontology) -> list[str]:
    outdeg = {n.id: 0 for n in g.nodes}
    indeg = {n.id: 0 for n in g.nodes}
    for e in g.edges:
        outdeg[e.source] += 1
        indeg[e.target] += 1
    return [n.id for n in sorted(g.nodes, key=lambda n: (n.label, n.kind or "", outdeg[n.id], indeg[n.id]))]


def canonical_form(g: Ontology, mode: str = "auto", bound: int = DEFAULT_ISO_BOUND) -> Ontology:
    """Isomorphism-invariant renaming of ``g``.

    ``mode="exact"`` canonicalizes up to full (label-preserving) isomorphism
    and refuses graphs above ``bound`` nodes. ``mode="label"`` orders nodes
    by label, kind and degrees, which is exact for label-injective graphs.
    ``"auto"`` picks exact within the bound and label otherwise. Nodes are
    renamed ``n0, n1, ...`` and the id is a digest of the structure, so two
    forms are equal iff the graphs are isomorphic (within the mode's
    guarantee).
    """
    if mode == "auto":
        mode = "exact" if len(g.nodes) <= bound else "label"
    if mode == "exact":
        if len(g.nodes) > bound:
            raise OntalgError("graph-too-large", f"{len(g.nodes)} nodes exceeds the exact bound {bound}")
        order = _exact_order(g)
    elif mode == "label":
        order = _label_order(g)
    else:
        raise OntalgError("bad-mode", f"unknown canonical_form mode {mode!r}")
    nodes_enc, edges_enc = _encoding(g, order)
    digest = hashlib.sha1(json.dumps([nodes_enc, edges_enc]).encode()).hexdigest()[:12]
    nodes = [Node(f"n{i}", label, kind or None) for i, (label, kind) in enumerate(nodes_enc)]
    edges = [Edge(f"n{i}", f"n{j}", frozenset(ls)) for i, j, ls in edges_enc]
    return Ontology(f"g{digest}", nodes, edges)


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Ontology) -> str:
    """Graphviz rendering with deterministic node and edge order."""
    lines = [f"digraph {_dot_quote(g.id)} {{"]
    for n in g.nodes:
        lines.append(f"  {_dot_quote(n.id)} [label={_dot_quote(n.label)}];")
    for e in g.edges:
        attr = f" [label={_dot_quote(','.join(sorted(e.labels)))}]" if e.labels else ""
        lines.append(f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_fixture(name: str) -> dict:
    """A JSON document shipped in ``ontalg/fixtures``."""
    text = resources.files("ontalg.fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def quebec() -> Ontology:
    return Ontology.from_json(load_fixture("quebec"))


def quebec_clusters() -> Partition:
    g = quebec()
    return Partition(g.node_carrier, load_fixture("quebec_clusters"))
