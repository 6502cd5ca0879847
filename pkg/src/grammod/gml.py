"""GML reading and writing for graphs and rules.

Only the keys needed for graphs and rules are understood. In strict mode
(the default) any other key is an error; otherwise it is skipped with a
warning.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ParseError, RuleError
from .graph import Graph
from .rule import Rule, make_rule

KNOWN_KEYS = frozenset({"graph", "node", "edge", "id", "source", "target", "label",
                        "rule", "left", "context", "right", "ruleID"})

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<open>\[)
  | (?P<close>\])
  | (?P<string>"[^"]*")
  | (?P<number>[-+]?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)
  | (?P<key>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass
class Entry:
    key: str
    value: Union[int, float, str, list]
    line: int
    column: int


def _unescape(s: str) -> str:
    return s.replace("&quot;", '"').replace("&amp;", "&")


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace('"', "&quot;")


def tokenize(text: str, source: Optional[str] = None):
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, source)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            yield kind, tok, line, col
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = m.start() + tok.rindex("\n") + 1
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


def parse_gml(text: str, strict: bool = True, source: Optional[str] = None) -> list[Entry]:
    """Parse GML into a tree of :class:`Entry` lists."""
    tokens = tokenize(text, source)
    stack: list[list[Entry]] = [[]]
    opens: list[tuple[int, int]] = []
    pending: Optional[tuple[str, int, int]] = None
    for kind, tok, line, col in tokens:
        if pending is None:
            if kind == "key":
                pending = (tok, line, col)
            elif kind == "close":
                if len(stack) == 1:
                    raise ParseError("unbalanced ']'", line, col, source)
                stack.pop()
                opens.pop()
            elif kind == "eof":
                if len(stack) > 1:
                    raise ParseError("unclosed '['", *opens[-1], source)
                return stack[0]
            else:
                raise ParseError(f"expected a key, found {tok!r}", line, col, source)
        else:
            key, kline, kcol = pending
            pending = None
            if kind == "open":
                child: list[Entry] = []
                stack[-1].append(Entry(key, child, kline, kcol))
                stack.append(child)
                opens.append((line, col))
            elif kind == "string":
                stack[-1].append(Entry(key, _unescape(tok[1:-1]), kline, kcol))
            elif kind == "number":
                val: Union[int, float] = float(tok) if any(c in tok for c in ".eE") else int(tok)
                stack[-1].append(Entry(key, val, kline, kcol))
            else:
                raise ParseError(f"missing value for key {key!r}", line, col, source)
    raise AssertionError("unreachable")


def _fields(entry: Entry, allowed: dict, strict: bool, source) -> dict:
    """Collect scalar fields of a node/edge block, checking types."""
    out: dict = {}
    for e in entry.value:
        if e.key not in allowed:
            _unknown(e, strict, source)
            continue
        want = allowed[e.key]
        if not isinstance(e.value, want) or isinstance(e.value, bool):
            raise ParseError(f"{e.key!r} must be {'an integer' if want is int else 'a string'}",
                             e.line, e.column, source)
        if e.key in out:
            raise ParseError(f"duplicate {e.key!r}", e.line, e.column, source)
        out[e.key] = e.value
    return out


def _unknown(e: Entry, strict: bool, source) -> None:
    if strict or e.key in KNOWN_KEYS:
        raise ParseError(f"unexpected key {e.key!r}", e.line, e.column, source)
    warnings.warn(f"ignoring unknown GML key {e.key!r} at line {e.line}")


_NODE = {"id": int, "label": str}
_EDGE = {"source": int, "target": int, "label": str}


def _require(entry: Entry, fields: dict, names, source) -> None:
    for name in names:
        if name not in fields:
            raise ParseError(f"{entry.key} is missing {name!r}", entry.line, entry.column, source)
    if "label" in fields and not fields["label"]:
        raise ParseError(f"{entry.key} has an empty label", entry.line, entry.column, source)


def _single_block(tree: list[Entry], key: str, strict: bool, source) -> Entry:
    blocks = []
    for e in tree:
        if e.key == key and isinstance(e.value, list):
            blocks.append(e)
        else:
            _unknown(e, strict, source)
    if len(blocks) != 1:
        where = blocks[1] if blocks else None
        raise ParseError(f"expected exactly one top-level {key!r} block",
                         where.line if where else 1, where.column if where else 1, source)
    return blocks[0]


def parse_graph_gml(text: str, name: str = "", strict: bool = True,
                    source: Optional[str] = None) -> Graph:
    """Load a graph from ``graph [ node [...] edge [...] ]``."""
    block = _single_block(parse_gml(text, strict, source), "graph", strict, source)
    ids: list[int] = []
    labels: list[str] = []
    index: dict[int, int] = {}
    edge_entries = []
    for e in block.value:
        if e.key == "node" and isinstance(e.value, list):
            f = _fields(e, _NODE, strict, source)
            _require(e, f, ("id", "label"), source)
            if f["id"] in index:
                raise ParseError(f"duplicate node id {f['id']}", e.line, e.column, source)
            index[f["id"]] = len(ids)
            ids.append(f["id"])
            labels.append(f["label"])
        elif e.key == "edge" and isinstance(e.value, list):
            f = _fields(e, _EDGE, strict, source)
            _require(e, f, ("source", "target", "label"), source)
            edge_entries.append((e, f))
        else:
            _unknown(e, strict, source)
    adj: list[dict] = [{} for _ in ids]
    for e, f in edge_entries:
        s, t = f["source"], f["target"]
        for end in (s, t):
            if end not in index:
                raise ParseError(f"edge endpoint {end} is not a node", e.line, e.column, source)
        if s == t:
            raise ParseError(f"loop edge on node {s}", e.line, e.column, source)
        u, v = index[s], index[t]
        if v in adj[u]:
            raise ParseError(f"parallel edge between {s} and {t}", e.line, e.column, source)
        adj[u][v] = adj[v][u] = f["label"]
    return Graph(labels, adj, ids, name)


def parse_rule_gml(text: str, invert: bool = False, name: Optional[str] = None,
                   strict: bool = True, source: Optional[str] = None) -> Rule:
    """Load a rule from ``rule [ ruleID left context right ]``.

    With the sections read as sets, ``L = left + context``,
    ``R = right + context`` and ``K = context + (left & right)``; elements
    listed in both left and right carry a label pair. ``invert`` swaps the
    left and right sections first.
    """
    block = _single_block(parse_gml(text, strict, source), "rule", strict, source)
    rule_id = None
    sections: dict[str, tuple[dict, dict]] = {}
    positions: dict = {}
    for e in block.value:
        if e.key == "ruleID":
            if not isinstance(e.value, str):
                raise ParseError("ruleID must be a string", e.line, e.column, source)
            rule_id = e.value
        elif e.key in ("left", "context", "right") and isinstance(e.value, list):
            if e.key in sections:
                raise ParseError(f"duplicate {e.key!r} section", e.line, e.column, source)
            sections[e.key] = _read_section(e, strict, source, positions)
        else:
            _unknown(e, strict, source)
    empty: tuple[dict, dict] = ({}, {})
    left = sections.get("left", empty)
    context = sections.get("context", empty)
    right = sections.get("right", empty)
    if invert:
        left, right = right, left

    def combine(kind):
        i = 0 if kind == "node" else 1
        lk, ck, rk = left[i], context[i], right[i]
        out = {}
        for key in sorted(set(lk) | set(ck) | set(rk)):
            if key in ck and (key in lk or key in rk):
                side = "left" if key in lk else "right"
                line, col = positions[(kind, key)]
                raise ParseError(f"{_describe(kind, key)} is in both {side} and context",
                                 line, col, source)
            if key in ck:
                out[key] = (ck[key], ck[key])
            else:
                out[key] = (lk.get(key), rk.get(key))
        return out

    vs = combine("node")
    es = combine("edge")
    try:
        return make_rule(((v, l, r) for v, (l, r) in vs.items()),
                         ((u, v, l, r) for (u, v), (l, r) in es.items()),
                         name if name is not None else (rule_id or ""))
    except RuleError as exc:
        line, col = _locate(str(exc), positions)
        raise ParseError(str(exc), line, col, source) from None


def _describe(kind, key) -> str:
    return f"node {key}" if kind == "node" else f"edge ({key[0]}, {key[1]})"


def _locate(message: str, positions: dict) -> tuple[int, int]:
    m = re.match(r"edge \((-?\d+), (-?\d+)\)", message)
    if m:
        u, v = int(m.group(1)), int(m.group(2))
        return positions.get(("edge", (min(u, v), max(u, v))), (1, 1))
    m = re.match(r"vertex (-?\d+)", message)
    if m:
        return positions.get(("node", int(m.group(1))), (1, 1))
    return (1, 1)


def _read_section(section: Entry, strict: bool, source, positions: dict) -> tuple[dict, dict]:
    nodes: dict[int, str] = {}
    edges: dict[tuple[int, int], str] = {}
    for e in section.value:
        if e.key == "node" and isinstance(e.value, list):
            f = _fields(e, _NODE, strict, source)
            _require(e, f, ("id", "label"), source)
            if f["id"] in nodes:
                raise ParseError(f"duplicate node id {f['id']} in {section.key}",
                                 e.line, e.column, source)
            nodes[f["id"]] = f["label"]
            positions.setdefault(("node", f["id"]), (e.line, e.column))
        elif e.key == "edge" and isinstance(e.value, list):
            f = _fields(e, _EDGE, strict, source)
            _require(e, f, ("source", "target", "label"), source)
            s, t = f["source"], f["target"]
            if s == t:
                raise ParseError(f"loop edge on node {s}", e.line, e.column, source)
            key = (min(s, t), max(s, t))
            if key in edges:
                raise ParseError(f"parallel edge between {s} and {t} in {section.key}",
                                 e.line, e.column, source)
            edges[key] = f["label"]
            positions.setdefault(("edge", key), (e.line, e.column))
        else:
            _unknown(e, strict, source)
    return nodes, edges


# writing -------------------------------------------------------------------

def write_graph_gml(g: Graph) -> str:
    if g.num_vertices == 0:
        return "graph [ ]\n"
    lines = ["graph ["]
    for v, label in enumerate(g.vertex_labels):
        lines.append(f'\tnode [ id {g.vertex_ids[v]} label "{_escape(label)}" ]')
    for u, v, label in g.edges:
        lines.append(f'\tedge [ source {g.vertex_ids[u]} target {g.vertex_ids[v]} '
                     f'label "{_escape(label)}" ]')
    lines.append("]")
    return "\n".join(lines) + "\n"


def write_rule_gml(rule: Rule) -> str:
    """Write the minimal split: unchanged K elements go to ``context`` and
    label-changing ones appear in both ``left`` and ``right``."""
    parts: dict[str, list[str]] = {"left": [], "context": [], "right": []}

    def place(entry_fmt, labels):
        left, right = labels
        if left is not None and right is not None and left == right:
            parts["context"].append(entry_fmt(left))
            return
        if left is not None:
            parts["left"].append(entry_fmt(left))
        if right is not None:
            parts["right"].append(entry_fmt(right))

    for v, labels in rule.vertices.items():
        place(lambda lab, v=v: f'node [ id {v} label "{_escape(lab)}" ]', labels)
    for (u, v), labels in rule.edges.items():
        place(lambda lab, u=u, v=v: f'edge [ source {u} target {v} label "{_escape(lab)}" ]',
              labels)
    lines = ["rule ["]
    if rule.name:
        lines.append(f'\truleID "{_escape(rule.name)}"')
    for section in ("left", "context", "right"):
        lines.append(f"\t{section} [")
        lines.extend(f"\t\t{item}" for item in parts[section])
        lines.append("\t]")
    lines.append("]")
    return "\n".join(lines) + "\n"


def write_gml(obj: Union[Graph, Rule]) -> str:
    if isinstance(obj, Rule):
        return write_rule_gml(obj)
    return write_graph_gml(obj)
