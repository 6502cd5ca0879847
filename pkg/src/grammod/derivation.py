"""Rule application on multisets of connected graphs.

A host is assembled on demand from copies of universe graphs. Since only
proper derivations are wanted, every copy must be hit by the match, so the
connected components of L are partitioned into blocks and each block is
embedded into its own copy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import _match
from .graph import Graph, GraphRegistry, connected_components, disjoint_union, induced_subgraph
from .rule import Rule

VertexMap = dict  # rule core vertex id -> host vertex index


@dataclass(frozen=True, eq=False)
class Match:
    """Witness of a derivation: which copy and vertex each L vertex hits."""

    rule: Rule
    tails: tuple[Graph, ...]
    placement: tuple[tuple[int, int, int], ...]  # (core id, copy, vertex in copy)

    def host(self) -> tuple[Graph, VertexMap]:
        """Assemble the host multiset and translate the map into it."""
        host, offsets = disjoint_union(self.tails)
        return host, {cid: offsets[c] + v for cid, c, v in self.placement}

    def to_json(self) -> list:
        return [list(p) for p in self.placement]


@dataclass(frozen=True, eq=False)
class Derivation:
    """A proper direct derivation ``tails => heads`` (``left``/``right``)."""

    rule: Rule
    left: tuple[Graph, ...]
    right: tuple[Graph, ...]
    match: Match
    tail_ids: tuple[int, ...] = field(default=())
    head_ids: tuple[int, ...] = field(default=())

    @property
    def tails(self):
        return self.left

    @property
    def heads(self):
        return self.right


# single-match checks -------------------------------------------------------

def is_match(rule: Rule, host: Graph, vmap: VertexMap) -> bool:
    """Injective, label- and adjacency-preserving map of L into ``host``."""
    left_vs = {v: l for v, (l, _) in rule.vertices.items() if l is not None}
    if set(vmap) != set(left_vs):
        return False
    images = list(vmap.values())
    if len(set(images)) != len(images):
        return False
    if any(not 0 <= h < host.num_vertices for h in images):
        return False
    if any(host.vertex_labels[vmap[v]] != l for v, l in left_vs.items()):
        return False
    for (u, v), (l, _) in rule.edges.items():
        if l is not None and host.adjacency[vmap[u]].get(vmap[v]) != l:
            return False
    return True


def check_dangling(rule: Rule, host: Graph, vmap: VertexMap) -> bool:
    """Every host edge at a deleted vertex must be the image of an L edge."""
    left_degree: dict[int, int] = {}
    for (u, v), (l, _) in rule.edges.items():
        if l is not None:
            left_degree[u] = left_degree.get(u, 0) + 1
            left_degree[v] = left_degree.get(v, 0) + 1
    for v, (l, r) in rule.vertices.items():
        if l is not None and r is None:
            if len(host.adjacency[vmap[v]]) != left_degree.get(v, 0):
                return False
    return True


def check_pushout_exists(rule: Rule, host: Graph, vmap: VertexMap) -> bool:
    """A created edge between preserved vertices must not land on a pair
    the host already joins; simple graphs have no pushout there."""
    for (u, v), (l, r) in rule.edges.items():
        if l is None and rule.vertices[u][0] is not None and rule.vertices[v][0] is not None:
            if vmap[v] in host.adjacency[vmap[u]]:
                return False
    return True


@dataclass
class Application:
    result: Graph
    host_to_result: dict  # host index -> result index, for surviving vertices
    comatch: dict  # rule core id (R side) -> result index


def apply_match(rule: Rule, host: Graph, vmap: VertexMap) -> Application:
    """Replace the image of L by R. Preconditions: dangling and pushout checks."""
    deleted = {vmap[v] for v, (l, r) in rule.vertices.items() if l is not None and r is None}
    keep = [h for h in range(host.num_vertices) if h not in deleted]
    new_index = {h: i for i, h in enumerate(keep)}
    labels = [host.vertex_labels[h] for h in keep]
    ids = [host.vertex_ids[h] for h in keep]
    adj = [{new_index[w]: lab for w, lab in host.adjacency[h].items() if w in new_index}
           for h in keep]
    comatch = {}
    for v, (l, r) in rule.vertices.items():
        if l is not None and r is not None:
            i = new_index[vmap[v]]
            labels[i] = r
            comatch[v] = i
    next_id = max(host.vertex_ids, default=-1) + 1
    for v, (l, r) in rule.vertices.items():
        if l is None:
            comatch[v] = len(labels)
            labels.append(r)
            ids.append(next_id)
            next_id += 1
            adj.append({})
    for (u, v), (l, r) in rule.edges.items():
        if l is not None and r is None:
            a, b = vmap[u], vmap[v]
            if a in new_index and b in new_index:
                del adj[new_index[a]][new_index[b]]
                del adj[new_index[b]][new_index[a]]
        elif r is not None:
            a, b = comatch[u], comatch[v]
            adj[a][b] = r
            adj[b][a] = r
    return Application(Graph(labels, adj, ids, host.name), new_index, comatch)


def interface_graph(rule: Rule, host: Graph, vmap: VertexMap) -> tuple[Graph, dict]:
    """The pushout complement D: host minus the images of L \\ K.

    Labels are the host's; pending label changes are the caller's business.
    Returns D and the host-index -> D-index map.
    """
    deleted = {vmap[v] for v, (l, r) in rule.vertices.items() if l is not None and r is None}
    dead_edges = {frozenset((vmap[u], vmap[v])) for (u, v), (l, r) in rule.edges.items()
                  if l is not None and r is None}
    keep = [h for h in range(host.num_vertices) if h not in deleted]
    idx = {h: i for i, h in enumerate(keep)}
    adj = [{idx[w]: lab for w, lab in host.adjacency[h].items()
            if w in idx and frozenset((h, w)) not in dead_edges} for h in keep]
    return Graph([host.vertex_labels[h] for h in keep], adj,
                 [host.vertex_ids[h] for h in keep], host.name), idx


def apply_rule(rule: Rule, host: Graph, vmap: VertexMap) -> list[Graph]:
    """Heads of the derivation at ``vmap``, as connected components."""
    if not (check_dangling(rule, host, vmap) and check_pushout_exists(rule, host, vmap)):
        raise ValueError("match violates the dangling or pushout condition")
    res = apply_match(rule, host, vmap).result
    return connected_components(res) if res.num_vertices else []


# enumeration ---------------------------------------------------------------

def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All set partitions of ``range(n)`` in restricted-growth order."""
    if n == 0:
        yield []
        return
    code = [0] * n

    def rec(i: int, top: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for j, b in enumerate(code):
                blocks[b].append(j)
            yield blocks
            return
        for b in range(top + 2):
            code[i] = b
            yield from rec(i + 1, max(top, b))

    code[0] = 0
    yield from rec(1, 0)


class _BlockMatcher:
    """Caches monomorphisms of L-component blocks into universe graphs."""

    def __init__(self, rule: Rule, components: list[Graph]):
        self.rule = rule
        self.components = components
        self._patterns: dict[tuple, Graph] = {}
        self._maps: dict[tuple, list] = {}

    def pattern(self, block: tuple) -> Graph:
        pat = self._patterns.get(block)
        if pat is None:
            left = self.rule.left
            index = {vid: i for i, vid in enumerate(left.vertex_ids)}
            verts = sorted(index[vid] for c in block for vid in self.components[c].vertex_ids)
            pat = induced_subgraph(left, verts)
            self._patterns[block] = pat
        return pat

    def maps(self, block: tuple, gi: int, g: Graph) -> list:
        key = (block, gi)
        found = self._maps.get(key)
        if found is None:
            pat = self.pattern(block)
            found = list(_match.enumerate_maps(pat, g)) if pat.num_vertices <= g.num_vertices else []
            self._maps[key] = found
        return found


def enumerate_derivations(
        rule: Rule,
        universe: Sequence[Graph],
        active: Optional[Iterable[Graph]] = None,
        registry: Optional[GraphRegistry] = None,
        accept_left: Optional[Callable[[Sequence[Graph]], bool]] = None,
        accept_right: Optional[Callable[["Derivation"], bool]] = None,
        max_host_vertices: Optional[int] = None,
) -> Iterator[Derivation]:
    """Proper derivations of ``rule`` over copies of ``universe`` graphs.

    At least one tail must be an ``active`` class (default: the whole
    universe). Results are unique per (tail classes, head classes)
    multiset pair; the first match found is kept as witness. Heads are
    registered in ``registry`` only when ``accept_right`` accepts them.
    """
    reg = registry if registry is not None else GraphRegistry()
    uni: list[Graph] = []
    uni_ids: list[int] = []
    seen_ids: set[int] = set()
    for g in universe:
        cid, rep, _ = reg.register(g)
        if cid not in seen_ids:
            seen_ids.add(cid)
            uni.append(rep)
            uni_ids.append(cid)
    active_ids = set(uni_ids) if active is None else {reg.register(g)[0] for g in active}

    comps = connected_components(rule.left) if rule.left.num_vertices else []
    if not comps:
        return
    bm = _BlockMatcher(rule, comps)
    scratch = GraphRegistry()
    seen_keys: set = set()
    candidates_cache: dict[tuple, list] = {}

    def candidates(block):
        c = candidates_cache.get(block)
        if c is None:
            c = []
            for gi, g in enumerate(uni):
                if max_host_vertices is not None and g.num_vertices > max_host_vertices:
                    continue
                maps = bm.maps(block, gi, g)
                if maps:
                    c.append(gi)
            candidates_cache[block] = c
        return c

    for blocks in set_partitions(len(comps)):
        blocks = [tuple(b) for b in blocks]
        cand_lists = [candidates(b) for b in blocks]
        if any(not c for c in cand_lists):
            continue
        patterns = [bm.pattern(b) for b in blocks]
        for choice in itertools.product(*cand_lists):
            if not any(uni_ids[gi] in active_ids for gi in choice):
                continue
            tails = tuple(uni[gi] for gi in choice)
            if accept_left is not None and not accept_left(tails):
                continue
            tail_ids = tuple(uni_ids[gi] for gi in choice)
            host, offsets = disjoint_union(tails)
            map_lists = [bm.maps(b, gi, uni[gi]) for b, gi in zip(blocks, choice)]
            for maps in itertools.product(*map_lists):
                vmap = {}
                for pat, off, m in zip(patterns, offsets, maps):
                    for pv, hv in enumerate(m):
                        vmap[pat.vertex_ids[pv]] = off + hv
                if not check_dangling(rule, host, vmap) or not check_pushout_exists(rule, host, vmap):
                    continue
                res = apply_match(rule, host, vmap).result
                heads = connected_components(res) if res.num_vertices else []
                key = (tuple(sorted(tail_ids)),
                       tuple(sorted(scratch.register(h)[0] for h in heads)))
                if key in seen_keys:
                    continue
                seen_keys.add(key)
                placement = []
                for copy, (pat, m) in enumerate(zip(patterns, maps)):
                    for pv, hv in enumerate(m):
                        placement.append((pat.vertex_ids[pv], copy, hv))
                match = Match(rule, tails, tuple(sorted(placement)))
                if accept_right is not None:
                    probe = Derivation(rule, tails, tuple(heads), match, tail_ids)
                    if not accept_right(probe):
                        continue
                regs = [reg.register(h) for h in heads]
                yield Derivation(rule, tails, tuple(r[1] for r in regs), match,
                                 tail_ids, tuple(r[0] for r in regs))
