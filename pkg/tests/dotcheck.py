"""A small recursive-descent checker for the Graphviz DOT language.

Covers the abstract grammar from the Graphviz docs: graphs, subgraphs,
node/edge/attribute statements, ports, and the four ID forms. Returns the
node ids and edges seen so tests can check endpoints.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

_TOKEN = re.compile(r"""
    (?P<ws>\s+|//[^\n]*|/\*.*?\*/|^\#[^\n]*)
  | (?P<edgeop>->|--)
  | (?P<punct>[{}\[\];,=:])
  | (?P<qstr>"(?:[^"\\]|\\.)*")
  | (?P<num>-?(?:\.\d+|\d+(?:\.\d*)?))
  | (?P<ident>[A-Za-z_\x80-￿][A-Za-z_0-9\x80-￿]*)
  | (?P<html><[^<>]*(?:<[^<>]*>[^<>]*)*>)
""", re.VERBOSE | re.DOTALL | re.MULTILINE)

_KEYWORDS = {"strict", "graph", "digraph", "node", "edge", "subgraph"}


class DotSyntaxError(ValueError):
    pass


@dataclass
class DotGraph:
    directed: bool
    nodes: dict = field(default_factory=dict)  # id -> attrs of its node statement
    edges: list = field(default_factory=list)  # (tail, head, attrs)


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DotSyntaxError(f"bad character {text[pos]!r} at offset {pos}")
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "ident" and value.lower() in _KEYWORDS:
                kind = value.lower()
            out.append((kind, value))
        pos = m.end()
    out.append(("eof", ""))
    return out


def _unquote(tok):
    kind, value = tok
    if kind == "qstr":
        return re.sub(r'\\(.)', lambda m: m.group(1) if m.group(1) == '"' else m.group(0),
                      value[1:-1])
    return value


def check_dot(text: str) -> DotGraph:
    toks = _tokens(text)
    i = 0

    def peek(k=0):
        return toks[min(i + k, len(toks) - 1)]

    def take(*kinds):
        nonlocal i
        tok = toks[i]
        if tok[0] not in kinds:
            raise DotSyntaxError(f"expected {'/'.join(kinds)}, found {tok[1]!r} (token {i})")
        i += 1
        return tok

    def is_id(tok):
        return tok[0] in ("ident", "qstr", "num", "html")

    if peek()[0] == "strict":
        take("strict")
    head = take("graph", "digraph")
    g = DotGraph(head[0] == "digraph")
    if is_id(peek()):
        take("ident", "qstr", "num", "html")

    def attr_list():
        attrs = {}
        while peek()[1] == "[":
            take("punct")
            while peek()[1] != "]":
                key = take("ident", "qstr", "num", "html")
                if peek()[1] != "=":
                    raise DotSyntaxError(f"expected '=' after attribute {key[1]!r}")
                take("punct")
                attrs[_unquote(key)] = _unquote(take("ident", "qstr", "num", "html"))
                if peek()[1] in (",", ";"):
                    take("punct")
            take("punct")
        return attrs

    def node_id():
        tok = take("ident", "qstr", "num", "html")
        while peek()[1] == ":":
            take("punct")
            take("ident", "qstr", "num", "html")
        return _unquote(tok)

    def subgraph():
        ids = []
        if peek()[0] == "subgraph":
            take("subgraph")
            if is_id(peek()):
                take("ident", "qstr", "num", "html")
        if peek()[1] != "{":
            raise DotSyntaxError("expected '{'")
        take("punct")
        ids.extend(stmt_list())
        if peek()[1] != "}":
            raise DotSyntaxError(f"expected '}}', found {peek()[1]!r}")
        take("punct")
        return ids

    def endpoint():
        if peek()[0] == "subgraph" or peek()[1] == "{":
            return subgraph()
        return [node_id()]

    def stmt_list():
        seen = []
        while peek()[1] != "}" and peek()[0] != "eof":
            seen.extend(stmt())
            if peek()[1] == ";":
                take("punct")
        return seen

    def stmt():
        tok = peek()
        if tok[0] in ("graph", "node", "edge"):
            take(tok[0])
            attr_list()
            return []
        if is_id(tok) and peek(1)[1] == "=":
            take("ident", "qstr", "num", "html")
            take("punct")
            take("ident", "qstr", "num", "html")
            return []
        left = endpoint()
        if peek()[0] != "edgeop":
            attrs = attr_list()
            if tok[0] not in ("subgraph",) and tok[1] != "{":
                g.nodes.setdefault(left[0], {}).update(attrs)
            return left
        chain = [left]
        while peek()[0] == "edgeop":
            op = take("edgeop")[1]
            if (op == "->") != g.directed:
                raise DotSyntaxError(f"edge operator {op!r} in a "
                                     f"{'digraph' if g.directed else 'graph'}")
            chain.append(endpoint())
        attrs = attr_list()
        for a, b in zip(chain, chain[1:]):
            for x in a:
                for y in b:
                    g.edges.append((x, y, attrs))
        return [x for part in chain for x in part]

    if peek()[1] != "{":
        raise DotSyntaxError("expected '{' after graph header")
    take("punct")
    stmt_list()
    if peek()[1] != "}":
        raise DotSyntaxError(f"expected '}}', found {peek()[1]!r}")
    take("punct")
    if peek()[0] != "eof":
        raise DotSyntaxError("trailing input after graph")
    return g
