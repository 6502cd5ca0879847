"""Rule composition along overlaps ``R1 <- D -> L2``.

An overlap is stored as a partial injective vertex map from L2 to R1 (core
ids). Edges between two corresponded vertices are corresponded whenever
both sides have one; leaving such a pair out of D always forces a parallel
edge, so nothing is lost.

Expressions are built either with the infix pseudo-operators::

    exp = rc_id(g1) * rcParallel * rc_id(g2) * rcSuper(allowPartial=False) * p

or parsed from text by :func:`parse_rc_expression`.
"""
from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from . import _match
from .errors import ParseError, RuleError
from .graph import Graph, connected_components, induced_subgraph
from .rule import Rule, count_rule_isomorphisms, make_rule, rule_invariant


# unary constructions -------------------------------------------------------

def rc_bind(g: Graph) -> Rule:
    """``(empty <- empty -> G)``"""
    return _from_graph(g, lambda lab: (None, lab), f"bind({g.name})")


def rc_unbind(g: Graph) -> Rule:
    """``(G <- empty -> empty)``"""
    return _from_graph(g, lambda lab: (lab, None), f"unbind({g.name})")


def rc_id(g: Graph) -> Rule:
    """``(G <- G -> G)``"""
    return _from_graph(g, lambda lab: (lab, lab), f"id({g.name})")


def _from_graph(g: Graph, sides, name: str) -> Rule:
    ids = g.vertex_ids
    return make_rule(((ids[v], *sides(lab)) for v, lab in enumerate(g.vertex_labels)),
                     ((ids[u], ids[v], *sides(lab)) for u, v, lab in g.edges), name)


# overlaps ------------------------------------------------------------------

@dataclass(frozen=True)
class Overlap:
    """Correspondence ``L2 core id -> R1 core id`` (the common graph D)."""

    pairs: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[int, int]) -> "Overlap":
        return cls(tuple(sorted(mapping.items())))

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class RcOp:
    kind: str  # "parallel" | "super" | "sub" | "common"
    allow_partial: bool = True

    def __str__(self):
        if self.kind in ("super", "sub") and not self.allow_partial:
            return f"*rc{self.kind.capitalize()}(allowPartial=False)*"
        return f"*rc{self.kind.capitalize()}*"

    # rcSuper(allowPartial=False)
    def __call__(self, allowPartial: bool = True, allow_partial: Optional[bool] = None) -> "RcOp":
        flag = allowPartial if allow_partial is None else allow_partial
        return RcOp(self.kind, flag)

    def __rmul__(self, left) -> "_Pending":
        return _Pending(left, self)


PARALLEL = RcOp("parallel")
SUPER = RcOp("super", True)
SUPER_FULL = RcOp("super", False)
SUB = RcOp("sub", True)
SUB_FULL = RcOp("sub", False)
COMMON = RcOp("common")

rcParallel = PARALLEL
rcSuper = SUPER
rcSub = SUB
rcCommon = COMMON


def _maps_into(pattern: Graph, host: Graph) -> Iterator[dict[int, int]]:
    """Monomorphisms as ``pattern id -> host id`` dicts."""
    for m in _match.enumerate_maps(pattern, host):
        yield {pattern.vertex_ids[i]: host.vertex_ids[h] for i, h in enumerate(m)}


def _component_subsets(g: Graph) -> Iterator[Graph]:
    comps = connected_components(g) if g.num_vertices else []
    if not comps:
        yield g
        return
    index = {vid: i for i, vid in enumerate(g.vertex_ids)}
    for size in range(1, len(comps) + 1):
        for subset in itertools.combinations(comps, size):
            verts = sorted(index[vid] for c in subset for vid in c.vertex_ids)
            yield induced_subgraph(g, verts)


def enumerate_overlaps(p1: Rule, p2: Rule, op: RcOp, common_cap: int = 8,
                       connected_only: bool = False) -> Iterator[Overlap]:
    """Overlaps of R1 (right of ``p1``) and L2 (left of ``p2``) for ``op``.

    ``common_cap`` bounds the number of corresponded vertices for
    ``*rcCommon*``; ``connected_only`` restricts that case to connected D.
    """
    r1, l2 = p1.right, p2.left
    if op.kind == "parallel":
        yield Overlap()
    elif op.kind == "super":
        patterns = _component_subsets(l2) if op.allow_partial else [l2]
        for pat in patterns:
            for m in _maps_into(pat, r1):
                yield Overlap.of(m)
    elif op.kind == "sub":
        patterns = _component_subsets(r1) if op.allow_partial else [r1]
        for pat in patterns:
            for m in _maps_into(pat, l2):
                yield Overlap.of({b: a for a, b in m.items()})
    elif op.kind == "common":
        yield from _common_overlaps(r1, l2, common_cap, connected_only)
    else:
        raise ValueError(f"unknown operator {op.kind!r}")


def _common_overlaps(r1: Graph, l2: Graph, cap: int, connected_only: bool) -> Iterator[Overlap]:
    n2 = l2.num_vertices
    image = [-1] * n2
    used = [False] * r1.num_vertices

    def consistent(x: int, y: int) -> bool:
        for w, lab in l2.adjacency[x].items():
            z = image[w]
            if z >= 0:
                other = r1.adjacency[y].get(z)
                if other is not None and other != lab:
                    return False
        return True

    def connected() -> bool:
        mapped = [x for x in range(n2) if image[x] >= 0]
        seen = {mapped[0]}
        stack = [mapped[0]]
        while stack:
            x = stack.pop()
            for w in l2.adjacency[x]:
                if w not in seen and image[w] >= 0 and image[x] in r1.adjacency[image[w]]:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(mapped)

    def rec(x: int, size: int):
        if x == n2:
            if size and (not connected_only or connected()):
                yield Overlap.of({l2.vertex_ids[a]: r1.vertex_ids[image[a]]
                                  for a in range(n2) if image[a] >= 0})
            return
        yield from rec(x + 1, size)
        if size >= cap:
            return
        lab = l2.vertex_labels[x]
        for y in range(r1.num_vertices):
            if not used[y] and r1.vertex_labels[y] == lab and consistent(x, y):
                image[x] = y
                used[y] = True
                yield from rec(x + 1, size + 1)
                used[y] = False
                image[x] = -1

    yield from rec(0, 0)


# composition ---------------------------------------------------------------

class CompositionFailure(Exception):
    """The overlap does not give a composed rule; ``reason`` says why."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


def compose(p1: Rule, p2: Rule, overlap: Overlap, name: Optional[str] = None) -> Rule:
    """The rule doing ``p1`` then ``p2`` where ``p2`` matches through ``overlap``.

    Raises :class:`CompositionFailure` with reason ``mismatch``,
    ``transient-element``, ``parallel-edge``, ``dangling`` or ``invalid``.
    """
    phi = overlap.mapping
    verts = {v: list(labs) for v, labs in p1.vertices.items()}
    edges = {e: list(labs) for e, labs in p1.edges.items()}

    if len(set(phi.values())) != len(phi):
        raise CompositionFailure("mismatch", "overlap is not injective")
    for x, y in phi.items():
        l2 = p2.vertices.get(x, (None, None))[0]
        if l2 is None:
            raise CompositionFailure("mismatch", f"{x} is not in L2")
        if y not in verts or verts[y][1] is None:
            raise CompositionFailure("mismatch", f"{y} is not in R1")
        if verts[y][1] != l2:
            raise CompositionFailure("mismatch", f"label {verts[y][1]!r} vs {l2!r}")

    next_id = max(verts, default=0) + 1
    to_c: dict[int, int] = {}
    for x, (l2, r2) in p2.vertices.items():
        if x in phi:
            to_c[x] = phi[x]
        else:
            to_c[x] = next_id
            verts[next_id] = [l2, r2]
            next_id += 1
    for x, y in phi.items():
        verts[y][1] = p2.vertices[x][1]

    for (u2, v2), (l2, r2) in p2.edges.items():
        a, b = to_c[u2], to_c[v2]
        key = (a, b) if a < b else (b, a)
        existing = edges.get(key)
        if l2 is not None:
            if u2 in phi and v2 in phi and existing is not None and existing[1] is not None:
                if existing[1] != l2:
                    raise CompositionFailure("mismatch", f"edge {key} label")
                existing[1] = r2
            else:
                if existing is not None:
                    raise CompositionFailure("parallel-edge", f"edge {key}")
                if verts[a][0] is None or verts[b][0] is None:
                    raise CompositionFailure("transient-element", f"edge {key}")
                edges[key] = [l2, r2]
        else:
            if existing is not None:
                if existing[1] is not None:
                    raise CompositionFailure("parallel-edge", f"edge {key}")
                existing[1] = r2
            else:
                edges[key] = [None, r2]

    for (a, b), (l, r) in edges.items():
        if r is not None and (verts[a][1] is None or verts[b][1] is None):
            raise CompositionFailure("dangling", f"edge {(a, b)}")
    vs = [(v, l, r) for v, (l, r) in verts.items() if l is not None or r is not None]
    es = [(a, b, l, r) for (a, b), (l, r) in edges.items() if l is not None or r is not None]
    try:
        return make_rule(vs, es, name if name is not None else f"{p1.name} . {p2.name}")
    except RuleError as exc:
        raise CompositionFailure("invalid", str(exc)) from None


def compose_all(p1: Rule, p2: Rule, op: RcOp, common_cap: int = 8,
                connected_only: bool = False) -> Iterator[Rule]:
    for o in enumerate_overlaps(p1, p2, op, common_cap, connected_only):
        try:
            yield compose(p1, p2, o)
        except CompositionFailure:
            continue


# expressions ---------------------------------------------------------------

class RcExp:
    """Base of composition expression nodes."""


@dataclass(frozen=True, eq=False)
class RcRules(RcExp):
    rules: tuple[Rule, ...]


@dataclass(frozen=True, eq=False)
class RcUnary(RcExp):
    kind: str  # "bind" | "unbind" | "id"
    graphs: tuple[Graph, ...]


@dataclass(frozen=True, eq=False)
class RcBinary(RcExp):
    left: object
    op: RcOp
    right: object


@dataclass(frozen=True, eq=False)
class _Pending:
    left: object
    op: RcOp

    def __mul__(self, right) -> RcBinary:
        return RcBinary(self.left, self.op, right)


def _graphs(gs) -> tuple[Graph, ...]:
    return (gs,) if isinstance(gs, Graph) else tuple(gs)


def rcBind(graphs) -> RcUnary:
    return RcUnary("bind", _graphs(graphs))


def rcUnbind(graphs) -> RcUnary:
    return RcUnary("unbind", _graphs(graphs))


def rcId(graphs) -> RcUnary:
    return RcUnary("id", _graphs(graphs))


_UNARY = {"bind": rc_bind, "unbind": rc_unbind, "id": rc_id}


class RuleRegistry:
    """Rules up to isomorphism; the first registered rule names the class."""

    def __init__(self, rules: Iterable[Rule] = ()):
        self._lock = threading.RLock()
        self._buckets: dict[tuple, list[Rule]] = {}
        self.rules: list[Rule] = []
        for r in rules:
            self.add(r)

    def find(self, rule: Rule) -> Optional[Rule]:
        with self._lock:
            for known in self._buckets.get(rule_invariant(rule), ()):
                if known is rule or count_rule_isomorphisms(rule, known):
                    return known
            return None

    def add(self, rule: Rule) -> tuple[Rule, bool]:
        with self._lock:
            known = self.find(rule)
            if known is not None:
                return known, False
            self._buckets.setdefault(rule_invariant(rule), []).append(rule)
            self.rules.append(rule)
            return rule, True


class RcEvaluator:
    """Evaluates composition expressions into deduplicated rule lists.

    Results isomorphic to a known rule are reported as that rule; new ones
    get fresh ``rc<n>`` names and become known.
    """

    def __init__(self, known_rules: Iterable[Rule] = (), common_cap: int = 8,
                 connected_common: bool = False):
        self.registry = RuleRegistry(known_rules)
        self.common_cap = common_cap
        self.connected_common = connected_common
        self._counter = 0

    def _intern(self, rule: Rule) -> Rule:
        known = self.registry.find(rule)
        if known is not None:
            return known
        if not rule.name or " . " in rule.name:
            rule = rule.renamed(f"rc{self._counter}")
            self._counter += 1
        return self.registry.add(rule)[0]

    def eval(self, exp) -> list[Rule]:
        if isinstance(exp, Rule):
            return [self._intern(exp)]
        if isinstance(exp, RcRules):
            return _dedup(self._intern(r) for r in exp.rules)
        if isinstance(exp, RcUnary):
            return _dedup(self._intern(_UNARY[exp.kind](g)) for g in exp.graphs)
        if isinstance(exp, RcBinary):
            lefts = self.eval(exp.left)
            rights = self.eval(exp.right)
            out: list[Rule] = []
            local = RuleRegistry()
            for p1 in lefts:
                for p2 in rights:
                    for r in compose_all(p1, p2, exp.op, self.common_cap, self.connected_common):
                        if local.add(r)[1]:
                            out.append(self._intern(r))
            return _dedup(out)
        if isinstance(exp, _Pending):
            raise TypeError("incomplete expression: operator without right operand")
        if isinstance(exp, (list, tuple)):
            return _dedup(r for item in exp for r in self.eval(item))
        raise TypeError(f"cannot evaluate {type(exp).__name__} as a composition expression")


def _dedup(rules: Iterable[Rule]) -> list[Rule]:
    out: list[Rule] = []
    seen: set[int] = set()
    for r in rules:
        if id(r) not in seen:
            seen.add(id(r))
            out.append(r)
    return out


# text syntax ---------------------------------------------------------------

_RC_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op>\*rc(?:Parallel|Super|Sub|Common)(?:\(\s*allowPartial\s*=\s*(?:true|false|True|False)\s*\))?\*)
  | (?P<unary>rc(?:Bind|Unbind|Id))\b
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.\-]*)
""", re.VERBOSE)


def _op_from_text(tok: str) -> RcOp:
    m = re.match(r"\*rc(\w+?)(?:\(\s*allowPartial\s*=\s*(\w+)\s*\))?\*$", tok)
    kind = m.group(1).lower()
    partial = m.group(2) is None or m.group(2).lower() == "true"
    if kind in ("parallel", "common") and m.group(2) is not None:
        raise ParseError(f"{tok}: allowPartial only applies to rcSuper/rcSub")
    return RcOp(kind, partial)


def parse_rc_expression(text: str, graphs: Mapping[str, Union[Graph, Sequence[Graph]]],
                        rules: Mapping[str, Union[Rule, Sequence[Rule]]],
                        source: Optional[str] = None):
    """Parse the infix composition syntax; operators associate to the left."""
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _RC_TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected {text[pos]!r}", line, pos - line_start + 1, source)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = m.start() + chunk.rindex("\n") + 1
        pos = m.end()
    if not tokens:
        raise ParseError("empty composition expression", 1, 1, source)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else ("eof", "", line, pos - line_start + 1)

    def expect(kind):
        nonlocal i
        tok = peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] or 'end of input'!r}",
                             tok[2], tok[3], source)
        i += 1
        return tok

    def names():
        out = [expect("name")]
        while peek()[0] == "comma":
            expect("comma")
            out.append(expect("name"))
        return out

    def term():
        nonlocal i
        tok = peek()
        if tok[0] == "lpar":
            expect("lpar")
            e = expr()
            expect("rpar")
            return e
        if tok[0] == "unary":
            i += 1
            expect("lpar")
            gs: list[Graph] = []
            for t in names():
                if t[1] not in graphs:
                    raise ParseError(f"unknown graph {t[1]!r}", t[2], t[3], source)
                gs.extend(_graphs(graphs[t[1]]))
            expect("rpar")
            kind = tok[1][2:].lower()
            return RcUnary(kind, tuple(gs))
        if tok[0] == "name":
            i += 1
            if tok[1] not in rules:
                raise ParseError(f"unknown rule {tok[1]!r}", tok[2], tok[3], source)
            r = rules[tok[1]]
            return RcRules((r,) if isinstance(r, Rule) else tuple(r))
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], tok[3], source)

    def expr():
        e = term()
        while peek()[0] == "op":
            op = _op_from_text(expect("op")[1])
            e = RcBinary(e, op, term())
        return e

    result = expr()
    if i != len(tokens):
        tok = tokens[i]
        raise ParseError(f"unexpected {tok[1]!r}", tok[2], tok[3], source)
    return result
