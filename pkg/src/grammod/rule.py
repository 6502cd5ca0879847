"""DPO rules stored as a single core graph with per-side labels.

Each core element carries ``(left_label, right_label)``; ``None`` marks
absence on that side. So ``(a, None)`` is deleted, ``(None, b)`` created,
and ``(a, b)`` lies in the context K (changing label when ``a != b``).
The span morphisms K -> L and K -> R are identities on core ids.
"""
from __future__ import annotations

from typing import Iterable, Optional

from . import _match
from .errors import RuleError
from .graph import Graph

Labels = tuple[Optional[str], Optional[str]]


class RuleCore:
    """Matchable view of a rule core: labels are ``(left, right)`` pairs."""

    __slots__ = ("vertex_labels", "adjacency", "vertex_ids", "_match_cache")

    def __init__(self, rule: "Rule"):
        ids = list(rule.vertices)
        index = {vid: i for i, vid in enumerate(ids)}
        self.vertex_ids = tuple(ids)
        self.vertex_labels = tuple(rule.vertices[v] for v in ids)
        adj: list[dict] = [{} for _ in ids]
        for (u, v), labs in rule.edges.items():
            adj[index[u]][index[v]] = labs
            adj[index[v]][index[u]] = labs
        self.adjacency = tuple(adj)
        self._match_cache = None


class Rule:
    """A DPO rule ``L <- K -> R``; build through :func:`make_rule`."""

    __slots__ = ("name", "vertices", "edges", "_left", "_context", "_right", "_core")

    def __init__(self, vertices: dict[int, Labels], edges: dict[tuple[int, int], Labels],
                 name: str = ""):
        self.name = name
        self.vertices = dict(sorted(vertices.items()))
        self.edges = dict(sorted(edges.items()))
        self._left = self._context = self._right = self._core = None

    def __repr__(self):
        return f"Rule({self.name!r}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    def _side(self, pick, name) -> Graph:
        ids = [v for v, labs in self.vertices.items() if pick(labs) is not None]
        index = {v: i for i, v in enumerate(ids)}
        adj: list[dict] = [{} for _ in ids]
        for (u, v), labs in self.edges.items():
            lab = pick(labs)
            if lab is not None:
                adj[index[u]][index[v]] = lab
                adj[index[v]][index[u]] = lab
        return Graph([pick(self.vertices[v]) for v in ids], adj, ids, name)

    @property
    def left(self) -> Graph:
        if self._left is None:
            self._left = self._side(lambda labs: labs[0], f"{self.name}.L")
        return self._left

    @property
    def right(self) -> Graph:
        if self._right is None:
            self._right = self._side(lambda labs: labs[1], f"{self.name}.R")
        return self._right

    @property
    def context(self) -> Graph:
        """K, labelled with the left labels of its elements."""
        if self._context is None:
            self._context = self._side(
                lambda labs: labs[0] if labs[0] is not None and labs[1] is not None else None,
                f"{self.name}.K")
        return self._context

    @property
    def core(self) -> RuleCore:
        if self._core is None:
            self._core = RuleCore(self)
        return self._core

    def renamed(self, name: str) -> "Rule":
        return Rule(self.vertices, self.edges, name)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertex_label_changes(self) -> dict[int, Labels]:
        return {v: labs for v, labs in self.vertices.items()
                if None not in labs and labs[0] != labs[1]}

    def edge_label_changes(self) -> dict[tuple[int, int], Labels]:
        return {e: labs for e, labs in self.edges.items()
                if None not in labs and labs[0] != labs[1]}

    def monomorphism(self, other: "Rule", max_num_matches: int = 1) -> int:
        return count_rule_monomorphisms(self, other, max_num_matches)

    def isomorphism(self, other: "Rule", max_num_matches: int = 1) -> int:
        return count_rule_isomorphisms(self, other, max_num_matches)

    def invert(self) -> "Rule":
        return invert_rule(self)


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _check_label(lab, what) -> None:
    if lab is not None and (not isinstance(lab, str) or not lab):
        raise RuleError(f"{what}: label must be a nonempty string")


def make_rule(vertices: Iterable[tuple[int, Optional[str], Optional[str]]],
              edges: Iterable[tuple[int, int, Optional[str], Optional[str]]],
              name: str = "") -> Rule:
    """Validated rule constructor from core elements.

    ``vertices`` holds ``(id, left_label, right_label)``; ``edges`` holds
    ``(u, v, left_label, right_label)``. A side label of ``None`` means the
    element is absent on that side.
    """
    vs: dict[int, Labels] = {}
    for vid, left, right in vertices:
        what = f"vertex {vid}"
        if vid in vs:
            raise RuleError(f"{what}: duplicate id")
        if left is None and right is None:
            raise RuleError(f"{what}: present on neither side")
        _check_label(left, what)
        _check_label(right, what)
        vs[vid] = (left, right)
    es: dict[tuple[int, int], Labels] = {}
    for u, v, left, right in edges:
        what = f"edge ({u}, {v})"
        if u == v:
            raise RuleError(f"{what}: loops are not allowed")
        key = _edge_key(u, v)
        if key in es:
            raise RuleError(f"{what}: parallel edge")
        if left is None and right is None:
            raise RuleError(f"{what}: present on neither side")
        _check_label(left, what)
        _check_label(right, what)
        for side, lab in ((0, left), (1, right)):
            if lab is None:
                continue
            for end in key:
                if end not in vs:
                    raise RuleError(f"{what}: endpoint {end} is not a vertex")
                if vs[end][side] is None:
                    raise RuleError(f"{what}: endpoint {end} is missing from the "
                                    f"{'left' if side == 0 else 'right'} side")
        es[key] = (left, right)
    return Rule(vs, es, name)


def invert_rule(rule: Rule, name: Optional[str] = None) -> Rule:
    """Swap the two sides: deletions become creations and label pairs flip."""
    return Rule({v: (r, l) for v, (l, r) in rule.vertices.items()},
                {e: (r, l) for e, (l, r) in rule.edges.items()},
                rule.name if name is None else name)


def _covers(p: Labels, h: Labels) -> bool:
    # L1 -> L2 and R1 -> R2 componentwise; K1 lands in K2 automatically.
    return (p[0] is None or p[0] == h[0]) and (p[1] is None or p[1] == h[1])


def count_rule_monomorphisms(p1: Rule, p2: Rule, max_num_matches: int = 1) -> int:
    """Count commuting triples ``(m_L, m_K, m_R)`` induced by one injective
    core map; witnesses that ``p1`` is at least as general as ``p2``."""
    if max_num_matches < 1:
        raise ValueError("max_num_matches must be positive")
    return _match.count(p1.core, p2.core, max_num_matches, _covers, _covers)


def count_rule_isomorphisms(p1: Rule, p2: Rule, max_num_matches: int = 1) -> int:
    if max_num_matches < 1:
        raise ValueError("max_num_matches must be positive")
    if len(p1.vertices) != len(p2.vertices) or len(p1.edges) != len(p2.edges):
        return 0
    if sorted(p1.vertices.values(), key=repr) != sorted(p2.vertices.values(), key=repr):
        return 0
    if sorted(p1.edges.values(), key=repr) != sorted(p2.edges.values(), key=repr):
        return 0
    return _match.count(p1.core, p2.core, max_num_matches)


def rule_invariant(rule: Rule) -> tuple:
    """Cheap isomorphism invariant of a rule."""
    core = rule.core
    labels = core.vertex_labels
    local = sorted(
        (repr(labels[v]), tuple(sorted(repr((lab, labels[w])) for w, lab in nbrs.items())))
        for v, nbrs in enumerate(core.adjacency))
    return (len(rule.vertices), len(rule.edges), tuple(local))
