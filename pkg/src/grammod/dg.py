"""Derivation graphs: iso classes joined by derivation hyperedges, plus exports."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .derivation import Derivation, Match, apply_match, interface_graph
from .errors import GrammodError
from .gml import parse_graph_gml, parse_rule_gml, write_graph_gml, write_rule_gml
from .graph import Graph
from .rule import Rule

SCHEMA = "grammod-dg/1"


@dataclass(frozen=True)
class Hyperedge:
    """One recorded derivation.

    ``tails`` lists class ids in witness copy order (``placement`` indexes
    into it); ``active`` is the subset in force when it was recorded.
    """

    id: int
    rule: str
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    placement: tuple[tuple[int, int, int], ...] = ()
    active: tuple[int, ...] = ()

    @property
    def key(self) -> tuple:
        return self.rule, tuple(sorted(self.tails)), tuple(sorted(self.heads))


class DerivationGraph:
    """Directed multi-hypergraph over graph classes; frozen after a run."""

    def __init__(self):
        self.graphs: list[Graph] = []
        self.rules: dict[str, Rule] = {}
        self.hyperedges: list[Hyperedge] = []
        self.inputs: set[int] = set()
        self._keys: dict[tuple, int] = {}
        self.frozen = False

    def __repr__(self):
        return f"DerivationGraph(classes={self.num_vertices}, hyperedges={self.num_edges})"

    @property
    def num_vertices(self) -> int:
        return len(self.graphs)

    @property
    def num_edges(self) -> int:
        return len(self.hyperedges)

    def _check_open(self):
        if self.frozen:
            raise GrammodError("derivation graph is frozen")

    def add_class(self, cid: int, g: Graph, is_input: bool = False) -> None:
        self._check_open()
        while len(self.graphs) <= cid:
            self.graphs.append(None)  # type: ignore[arg-type]
        if self.graphs[cid] is None:
            self.graphs[cid] = g
        if is_input:
            self.inputs.add(cid)

    def add_hyperedge(self, rule: Rule, tails, heads, placement=(), active=()) -> tuple[Hyperedge, bool]:
        """Record a derivation; returns ``(hyperedge, is_new)``."""
        self._check_open()
        name = self._rule_name(rule)
        for cid in (*tails, *heads):
            if not 0 <= cid < len(self.graphs) or self.graphs[cid] is None:
                raise GrammodError(f"unknown class id {cid}")
        he = Hyperedge(len(self.hyperedges), name, tuple(tails), tuple(heads),
                       tuple(tuple(p) for p in placement), tuple(sorted(set(active))))
        existing = self._keys.get(he.key)
        if existing is not None:
            return self.hyperedges[existing], False
        self._keys[he.key] = he.id
        self.hyperedges.append(he)
        return he, True

    def _rule_name(self, rule: Rule) -> str:
        """Name under which ``rule`` is recorded; different rules sharing a
        name (say a rule and its inverse) get ``name#2``, ``name#3``, ..."""
        name, k = rule.name, 1
        while True:
            known = self.rules.get(name)
            if known is None:
                self.rules[name] = rule
                return name
            if known is rule or (known.vertices == rule.vertices and known.edges == rule.edges):
                return name
            k += 1
            name = f"{rule.name}#{k}"

    def freeze(self) -> "DerivationGraph":
        if any(g is None for g in self.graphs):
            raise GrammodError("class id gap in derivation graph")
        self.frozen = True
        return self

    # queries ------------------------------------------------------------
    def graph(self, cid: int) -> Graph:
        return self.graphs[cid]

    def find_edge(self, tails: Iterable[int], heads: Iterable[int],
                  rule: Optional[str] = None) -> list[Hyperedge]:
        t, h = sorted(tails), sorted(heads)
        return [e for e in self.hyperedges if sorted(e.tails) == t and sorted(e.heads) == h
                and (rule is None or e.rule == rule)]

    def out_edges(self, cid: int) -> list[Hyperedge]:
        return [e for e in self.hyperedges if cid in e.tails]

    def in_edges(self, cid: int) -> list[Hyperedge]:
        return [e for e in self.hyperedges if cid in e.heads]

    def derivation(self, he_id: int) -> Derivation:
        """Rebuild the witness derivation of hyperedge ``he_id``."""
        if not 0 <= he_id < len(self.hyperedges):
            raise KeyError(f"unknown hyperedge id {he_id}")
        e = self.hyperedges[he_id]
        rule = self.rules[e.rule]
        tails = tuple(self.graphs[c] for c in e.tails)
        heads = tuple(self.graphs[c] for c in e.heads)
        return Derivation(rule, tails, heads, Match(rule, tails, e.placement), e.tails, e.heads)

    def signature(self) -> tuple[int, Counter]:
        """Class count and hyperedge multiset, for comparing graphs."""
        return self.num_vertices, Counter(e.key for e in self.hyperedges)


# export options ------------------------------------------------------------

@dataclass
class ExportOptions:
    """Ordered hook lists. Labels accumulate, the first non-empty colour
    wins, and an element is shown only if every visibility hook agrees."""

    vertex_label: list[Callable[[Graph], str]] = field(default_factory=list)
    vertex_colour: list[Callable[[Graph], Optional[str]]] = field(default_factory=list)
    vertex_visible: list[Callable[[Graph], bool]] = field(default_factory=list)
    edge_visible: list[Callable[[Derivation], bool]] = field(default_factory=list)
    edge_label: list[Callable[[Derivation], str]] = field(default_factory=list)

    def push_vertex_label(self, f):
        self.vertex_label.append(f)

    def push_vertex_colour(self, f):
        self.vertex_colour.append(f)

    def push_vertex_visible(self, f):
        self.vertex_visible.append(f)

    def push_edge_visible(self, f):
        self.edge_visible.append(f)

    def push_edge_label(self, f):
        self.edge_label.append(f)

    # camelCase aliases
    pushVertexLabel = push_vertex_label
    pushVertexColour = push_vertex_colour
    pushVertexVisible = push_vertex_visible
    pushEdgeVisible = push_edge_visible
    pushEdgeLabel = push_edge_label


def _dot_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(dg: DerivationGraph, opts: Optional[ExportOptions] = None) -> str:
    opts = opts or ExportOptions()
    visible = [all(f(g) for f in opts.vertex_visible) for g in dg.graphs]
    out = ["digraph dg {", "\tnode [shape=ellipse];"]
    for cid, g in enumerate(dg.graphs):
        if not visible[cid]:
            continue
        label = "\n".join([g.name or f"g{cid}", *(str(f(g)) for f in opts.vertex_label)])
        attrs = [f"label={_dot_str(label)}", f"tooltip={_dot_str(write_graph_gml(g))}"]
        colour = next((c for c in (f(g) for f in opts.vertex_colour) if c), None)
        if colour:
            attrs.append(f"color={_dot_str(colour)}")
        out.append(f"\tv{cid} [{', '.join(attrs)}];")
    for e in dg.hyperedges:
        if not all(visible[c] for c in (*e.tails, *e.heads)):
            continue
        d = dg.derivation(e.id) if (opts.edge_visible or opts.edge_label) else None
        if d is not None and not all(f(d) for f in opts.edge_visible):
            continue
        label = "\n".join([e.rule, *(str(f(d)) for f in opts.edge_label)])
        tails, heads = Counter(e.tails), Counter(e.heads)
        if len(e.tails) == 1 and len(e.heads) == 1:
            out.append(f"\tv{e.tails[0]} -> v{e.heads[0]} [label={_dot_str(label)}];")
            continue
        out.append(f"\the{e.id} [shape=box, label={_dot_str(label)}];")
        for c in sorted(tails):
            extra = f" [label={_dot_str(str(tails[c]))}]" if tails[c] > 1 else ""
            out.append(f"\tv{c} -> he{e.id}{extra};")
        for c in sorted(heads):
            extra = f" [label={_dot_str(str(heads[c]))}]" if heads[c] > 1 else ""
            out.append(f"\the{e.id} -> v{c}{extra};")
    out.append("}")
    return "\n".join(out) + "\n"


# JSON ----------------------------------------------------------------------

def _dense(g: Graph) -> Graph:
    return Graph(g.vertex_labels, g.adjacency, None, g.name)


def export_json(dg: DerivationGraph) -> str:
    doc = {
        "schema": SCHEMA,
        "classes": [{"id": cid, "name": g.name, "input": cid in dg.inputs,
                     "gml": write_graph_gml(_dense(g))} for cid, g in enumerate(dg.graphs)],
        "rules": [{"name": name, "gml": write_rule_gml(r)} for name, r in dg.rules.items()],
        "hyperedges": [{"id": e.id, "rule": e.rule, "tails": list(e.tails),
                        "heads": list(e.heads), "witness": [list(p) for p in e.placement],
                        "active": list(e.active)} for e in dg.hyperedges],
    }
    return json.dumps(doc, indent=1) + "\n"


def import_json(text: str) -> DerivationGraph:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise GrammodError(f"unsupported schema {doc.get('schema')!r}")
    dg = DerivationGraph()
    for c in sorted(doc["classes"], key=lambda c: c["id"]):
        dg.add_class(c["id"], parse_graph_gml(c["gml"], name=c["name"]), c.get("input", False))
    rules = {r["name"]: parse_rule_gml(r["gml"], name=r["name"]) for r in doc["rules"]}
    for e in doc["hyperedges"]:
        dg.add_hyperedge(rules[e["rule"]], e["tails"], e["heads"],
                         e.get("witness", ()), e.get("active", ()))
    dg.rules.update(rules)
    return dg.freeze()


def export_derivation_dpo(dg: DerivationGraph, he_id: int) -> str:
    """The DPO diagram of one hyperedge's witness as JSON with GML graphs.

    Maps are keyed by rule core id (``m``: L to G, ``d``: K to D, ``h``: R
    to H) or by graph vertex id (``g_to_d``, ``d_to_h``).
    """
    d = dg.derivation(he_id)
    rule = d.rule
    host, vmap = d.match.host()
    dgraph, g_to_d = interface_graph(rule, host, vmap)
    app = apply_match(rule, host, vmap)
    hgraph = app.result
    kmap = {v: g_to_d[vmap[v]] for v, (l, r) in rule.vertices.items()
            if l is not None and r is not None}
    # D keeps host labels; H applies pending label changes, same vertex order.
    d_to_h = {dgraph.vertex_ids[i]: hgraph.vertex_ids[i] for i in range(dgraph.num_vertices)}
    doc = {
        "hyperedge": he_id,
        "rule": rule.name,
        "L": write_graph_gml(rule.left), "K": write_graph_gml(rule.context),
        "R": write_graph_gml(rule.right),
        "G": write_graph_gml(host), "D": write_graph_gml(dgraph), "H": write_graph_gml(hgraph),
        "m": {str(v): host.vertex_ids[h] for v, h in sorted(vmap.items())},
        "d": {str(v): dgraph.vertex_ids[i] for v, i in sorted(kmap.items())},
        "h": {str(v): hgraph.vertex_ids[i] for v, i in sorted(app.comatch.items())},
        "g_to_d": {str(host.vertex_ids[g]): dgraph.vertex_ids[i] for g, i in sorted(g_to_d.items())},
        "d_to_h": {str(k): v for k, v in d_to_h.items()},
    }
    return json.dumps(doc, indent=1) + "\n"

