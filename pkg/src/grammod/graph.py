"""Labelled simple undirected graphs, morphism search and iso-class registry."""
from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import _match
from .chem import atom_data_of, bond_type_of
from .errors import GraphError


class Graph:
    """An immutable labelled graph without loops or parallel edges.

    Vertices are dense indices ``0..n-1``. The ids a graph was built from
    (GML ids, SMILES atom order, rule core ids) are kept in ``vertex_ids``.
    """

    __slots__ = ("name", "vertex_labels", "vertex_ids", "adjacency", "_edges",
                 "_match_cache", "_invariant")

    def __init__(self, labels: Sequence[str], adjacency: Sequence[dict],
                 ids: Optional[Sequence[int]] = None, name: str = ""):
        # Trusted constructor: callers guarantee the invariants.
        self.name = name
        self.vertex_labels = tuple(labels)
        self.vertex_ids = tuple(ids) if ids is not None else tuple(range(len(labels)))
        self.adjacency = tuple(adjacency)
        self._edges = None
        self._match_cache = None
        self._invariant = None

    def __repr__(self):
        return f"Graph({self.name!r}, |V|={self.num_vertices}, |E|={self.num_edges})"

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def edges(self) -> tuple[tuple[int, int, str], ...]:
        """All edges as ``(u, v, label)`` with ``u < v``, sorted."""
        if self._edges is None:
            self._edges = tuple(
                (u, v, lab) for u, nbrs in enumerate(self.adjacency)
                for v, lab in sorted(nbrs.items()) if u < v)
        return self._edges

    def label(self, v: int) -> str:
        return self.vertex_labels[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_label(self, u: int, v: int) -> Optional[str]:
        return self.adjacency[u].get(v)

    def index_of(self, vertex_id: int) -> int:
        return self.vertex_ids.index(vertex_id)

    def atom_data(self, v: int):
        return atom_data_of(self.vertex_labels[v])

    def bond_type(self, u: int, v: int):
        return bond_type_of(self.adjacency[u][v])

    def v_label_count(self, label: str) -> int:
        return sum(1 for lab in self.vertex_labels if lab == label)

    def renamed(self, name: str) -> "Graph":
        g = Graph(self.vertex_labels, self.adjacency, self.vertex_ids, name)
        g._match_cache = self._match_cache
        g._invariant = self._invariant
        return g

    def connected_components(self) -> list["Graph"]:
        return connected_components(self)

    def is_connected(self) -> bool:
        return self.num_vertices > 0 and len(_component_indices(self)) == 1

    # morphisms ----------------------------------------------------------
    def monomorphism(self, host: "Graph", max_num_matches: int = 1) -> int:
        return count_monomorphisms(self, host, max_num_matches)

    def isomorphism(self, other: "Graph", max_num_matches: int = 1) -> int:
        return count_isomorphisms(self, other, max_num_matches)

    def enumerate_monomorphisms(self, host: "Graph", visitor=None):
        return enumerate_monomorphisms(self, host, visitor)

    def invariant(self) -> tuple:
        """Cheap isomorphism invariant used to bucket graphs."""
        if self._invariant is None:
            labels = self.vertex_labels
            local = Counter(
                (labels[v], tuple(sorted((lab, labels[w]) for w, lab in nbrs.items())))
                for v, nbrs in enumerate(self.adjacency))
            self._invariant = (self.num_vertices, self.num_edges, tuple(sorted(local.items())))
        return self._invariant


def build_graph(vertices: Iterable[tuple[int, str]],
                edges: Iterable[tuple[int, int, str]], name: str = "") -> Graph:
    """Validated constructor from ``(id, label)`` and ``(src, tgt, label)``."""
    ids: list[int] = []
    labels: list[str] = []
    index: dict[int, int] = {}
    for vid, label in vertices:
        if vid in index:
            raise GraphError(f"duplicate vertex id {vid}")
        if not isinstance(label, str) or not label:
            raise GraphError(f"vertex {vid}: label must be a nonempty string")
        index[vid] = len(ids)
        ids.append(vid)
        labels.append(label)
    adj: list[dict[int, str]] = [{} for _ in ids]
    for src, tgt, label in edges:
        if src not in index or tgt not in index:
            missing = src if src not in index else tgt
            raise GraphError(f"edge ({src}, {tgt}): endpoint {missing} is not a vertex")
        if src == tgt:
            raise GraphError(f"edge ({src}, {tgt}): loops are not allowed")
        if not isinstance(label, str) or not label:
            raise GraphError(f"edge ({src}, {tgt}): label must be a nonempty string")
        u, v = index[src], index[tgt]
        if v in adj[u]:
            raise GraphError(f"edge ({src}, {tgt}): parallel edge")
        adj[u][v] = label
        adj[v][u] = label
    return Graph(labels, adj, ids, name)


def _component_indices(g: Graph) -> list[list[int]]:
    seen = [False] * g.num_vertices
    comps = []
    # Visit start vertices in increasing original id.
    for start in sorted(range(g.num_vertices), key=lambda v: g.vertex_ids[v]):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def induced_subgraph(g: Graph, vertices: Sequence[int], name: str = "") -> Graph:
    local = {v: i for i, v in enumerate(vertices)}
    adj = [{local[w]: lab for w, lab in g.adjacency[v].items() if w in local} for v in vertices]
    return Graph([g.vertex_labels[v] for v in vertices], adj,
                 [g.vertex_ids[v] for v in vertices], name)


def connected_components(g: Graph) -> list[Graph]:
    """Components ordered by their lowest original vertex id; ids are kept."""
    comps = _component_indices(g)
    if len(comps) == 1:
        return [g]
    return [induced_subgraph(g, c, g.name) for c in comps]


def disjoint_union(graphs: Sequence[Graph], name: str = "") -> tuple[Graph, list[int]]:
    """Union with fresh dense ids; also returns each part's index offset."""
    labels: list[str] = []
    adj: list[dict] = []
    offsets = []
    for g in graphs:
        off = len(labels)
        offsets.append(off)
        labels.extend(g.vertex_labels)
        adj.extend({w + off: lab for w, lab in nbrs.items()} for nbrs in g.adjacency)
    return Graph(labels, adj, None, name), offsets


# morphisms -----------------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """Injective label- and adjacency-preserving vertex map (by index)."""

    pattern: Graph
    host: Graph
    vertex_map: tuple[int, ...]

    @property
    def edge_map(self) -> dict[tuple[int, int], tuple[int, int]]:
        m = self.vertex_map
        return {(u, v): (m[u], m[v]) for u, v, _ in self.pattern.edges}

    def id_map(self) -> dict[int, int]:
        """The same map expressed with the graphs' original vertex ids."""
        return {self.pattern.vertex_ids[p]: self.host.vertex_ids[h]
                for p, h in enumerate(self.vertex_map)}

    def __getitem__(self, v: int) -> int:
        return self.vertex_map[v]


def _check_max(max_num_matches: int) -> None:
    if max_num_matches < 1:
        raise ValueError("max_num_matches must be positive")


def count_monomorphisms(pattern: Graph, host: Graph, max_num_matches: int = 1) -> int:
    _check_max(max_num_matches)
    return _match.count(pattern, host, max_num_matches)


def _same_shape(g1: Graph, g2: Graph) -> bool:
    if g1.num_vertices != g2.num_vertices or g1.num_edges != g2.num_edges:
        return False
    if Counter(g1.vertex_labels) != Counter(g2.vertex_labels):
        return False
    return g1.invariant() == g2.invariant()


def count_isomorphisms(g1: Graph, g2: Graph, max_num_matches: int = 1) -> int:
    """Isomorphisms g1 -> g2. A monomorphism between graphs of equal vertex
    and edge counts is bijective on both, hence an isomorphism."""
    _check_max(max_num_matches)
    if not _same_shape(g1, g2):
        return 0
    return _match.count(g1, g2, max_num_matches)


def enumerate_monomorphisms(pattern: Graph, host: Graph,
                            visitor: Optional[Callable[[Morphism], bool]] = None,
                            max_num_matches: int = -1) -> Iterator[Morphism] | int:
    """Without a visitor, return an iterator of morphisms in deterministic
    order. With one, call it per morphism (falsy return stops) and return
    the number visited."""
    if visitor is None:
        return (Morphism(pattern, host, m)
                for m in _match.enumerate_maps(pattern, host, max_num_matches))
    return _match.visit_maps(pattern, host, lambda m: visitor(Morphism(pattern, host, m)))


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    return count_isomorphisms(g1, g2, 1) > 0


# iso-class registry --------------------------------------------------------

class GraphRegistry:
    """Isomorphism classes of connected graphs, ids in registration order.

    Lookups bucket by ``Graph.invariant`` before any isomorphism test.
    """

    def __init__(self, name_prefix: str = "g"):
        self._lock = threading.RLock()
        self._buckets: dict[tuple, list[int]] = {}
        self.graphs: list[Graph] = []
        self.name_prefix = name_prefix

    def __len__(self):
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def find(self, g: Graph) -> Optional[int]:
        with self._lock:
            for cid in self._buckets.get(g.invariant(), ()):
                if self.graphs[cid] is g or count_isomorphisms(g, self.graphs[cid], 1):
                    return cid
            return None

    def register(self, g: Graph, name: Optional[str] = None) -> tuple[int, Graph, bool]:
        """Return ``(class id, representative, is_new)`` for ``g``."""
        with self._lock:
            cid = self.find(g)
            if cid is not None:
                return cid, self.graphs[cid], False
            cid = len(self.graphs)
            rep = g.renamed(name or g.name or f"{self.name_prefix}{cid}")
            self.graphs.append(rep)
            self._buckets.setdefault(g.invariant(), []).append(cid)
            return cid, rep, True

    def class_id(self, g: Graph) -> int:
        return self.register(g)[0]

    def id_of(self, rep: Graph) -> int:
        """Class id of a representative (identity lookup, then iso)."""
        for cid in self._buckets.get(rep.invariant(), ()):
            if self.graphs[cid] is rep:
                return cid
        cid = self.find(rep)
        if cid is None:
            raise KeyError(rep.name)
        return cid
