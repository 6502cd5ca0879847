"""Independent re-check of recorded derivations.

Deliberately shares no code with the enumeration path in ``derivation``:
the host is rebuilt as plain vertex/edge sets and the rewrite is redone by
set arithmetic, so a bug in one path shows up as a disagreement.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .graph import Graph, count_isomorphisms
from .rule import Rule


def _host_sets(tails: Sequence[Graph]):
    labels: dict = {}
    edges: dict = {}
    for c, g in enumerate(tails):
        for v, lab in enumerate(g.vertex_labels):
            labels[(c, v)] = lab
        for u, v, lab in g.edges:
            edges[frozenset(((c, u), (c, v)))] = lab
    return labels, edges


def _components(labels: dict, edges: dict) -> list[Graph]:
    nbrs: dict = {v: {} for v in labels}
    for e, lab in edges.items():
        a, b = tuple(e)
        nbrs[a][b] = lab
        nbrs[b][a] = lab
    seen: set = set()
    out = []
    for start in sorted(labels, key=repr):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        index = {v: i for i, v in enumerate(comp)}
        adj = [{index[w]: lab for w, lab in nbrs[v].items()} for v in comp]
        out.append(Graph([labels[v] for v in comp], adj))
    return out


def validate_derivation(rule: Rule, tails: Sequence[Graph], heads: Sequence[Graph],
                        placement: Iterable[tuple[int, int, int]],
                        active: Optional[Iterable[Graph]] = None) -> list[str]:
    """Return the list of violated conditions (empty when valid).

    ``placement`` maps each L vertex (core id) to ``(copy, vertex)`` in
    ``tails``. ``active`` optionally lists the graphs of which at least one
    must be a tail.
    """
    problems: list[str] = []
    labels, edges = _host_sets(tails)
    m = {cid: (c, v) for cid, c, v in placement}
    left_vertices = {v: l for v, (l, _) in rule.vertices.items() if l is not None}

    if set(m) != set(left_vertices):
        return ["map domain differs from the L vertices"]
    if len(set(m.values())) != len(m):
        problems.append("map is not injective")
    if any(h not in labels for h in m.values()):
        return problems + ["map leaves the host"]
    for v, lab in left_vertices.items():
        if labels[m[v]] != lab:
            problems.append(f"vertex {v} label mismatch")
    for (u, v), (l, _) in rule.edges.items():
        if l is not None and edges.get(frozenset((m[u], m[v]))) != l:
            problems.append(f"edge ({u}, {v}) not preserved")

    hit = {c for c, _ in m.values()}
    if hit != set(range(len(tails))):
        problems.append("not proper: some tail copy is not hit")
    if active is not None:
        act = list(active)
        if not any(count_isomorphisms(t, a) for t in tails for a in act):
            problems.append("no tail is active")

    deleted = {m[v] for v, (l, r) in rule.vertices.items() if l is not None and r is None}
    image_edges = {frozenset((m[u], m[v])) for (u, v), (l, _) in rule.edges.items()
                   if l is not None}
    for e in edges:
        if e & deleted and e not in image_edges:
            problems.append("dangling edge at a deleted vertex")
            break
    for (u, v), (l, r) in rule.edges.items():
        if l is None and u in m and v in m and frozenset((m[u], m[v])) in edges:
            problems.append(f"created edge ({u}, {v}) would be parallel: no pushout")
    if problems:
        return problems

    # Rewrite by set arithmetic and compare heads up to isomorphism.
    new_labels = {h: lab for h, lab in labels.items() if h not in deleted}
    new_edges = {e: lab for e, lab in edges.items() if not e & deleted}
    for (u, v), (l, r) in rule.edges.items():
        if l is not None and r is None:
            new_edges.pop(frozenset((m[u], m[v])), None)
    place = dict(m)
    for v, (l, r) in rule.vertices.items():
        if l is None:
            place[v] = ("new", v)
        if r is not None:
            new_labels[place[v]] = r
    for (u, v), (l, r) in rule.edges.items():
        if r is not None:
            new_edges[frozenset((place[u], place[v]))] = r
    got = _components(new_labels, new_edges)
    remaining = list(heads)
    for g in got:
        for i, h in enumerate(remaining):
            if count_isomorphisms(g, h):
                del remaining[i]
                break
        else:
            problems.append("recomputed head has no counterpart")
            break
    if not problems and remaining:
        problems.append("recorded heads exceed the recomputed ones")
    return problems
