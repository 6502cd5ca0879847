"""Buffer preparation and backend selection for the morphism search.

Works on anything exposing ``vertex_labels`` (a sequence of hashables) and
``adjacency`` (a sequence of ``{neighbour: edge_label}`` dicts), so graphs
and rule cores share one search routine.
"""
from __future__ import annotations

import os
from array import array
from typing import Callable, Iterator, Optional

from . import _vf2_py

BACKEND = "python"
_search = _vf2_py.search
if not os.environ.get("GRAMMOD_PURE_PYTHON"):
    try:
        from . import _vf2  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        pass
    else:
        _search = _vf2.search
        BACKEND = "cython"

Compat = Callable[[object, object], bool]


def _eq(a, b) -> bool:
    return a == b


class _HostBuffers:
    """Host-side arrays, cached on the host object since hosts are reused."""

    __slots__ = ("n", "h_ptr", "h_idx", "h_mat", "labels", "edge_labels", "edge_code", "degree")

    def __init__(self, g):
        labels = list(g.vertex_labels)
        adj = g.adjacency
        n = len(labels)
        self.n = n
        self.labels = labels
        self.degree = [len(a) for a in adj]
        edge_code: dict = {}
        h_ptr = array("i", [0])
        h_idx = array("i")
        h_mat = array("i", [-1]) * (n * n)
        for u in range(n):
            for w in sorted(adj[u]):
                lab = adj[u][w]
                code = edge_code.setdefault(lab, len(edge_code))
                h_idx.append(w)
                h_mat[u * n + w] = code
            h_ptr.append(len(h_idx))
        self.h_ptr = h_ptr
        self.h_idx = h_idx
        self.h_mat = h_mat
        self.edge_code = edge_code
        self.edge_labels = list(edge_code)


def host_buffers(g) -> _HostBuffers:
    cache = getattr(g, "_match_cache", None)
    if cache is None:
        cache = _HostBuffers(g)
        try:
            g._match_cache = cache
        except AttributeError:
            pass
    return cache


def _search_order(n_p, adj, n_cand, degree):
    """Deterministic order: most constrained first, then grow along edges."""
    order: list[int] = []
    pos_of = [-1] * n_p
    placed = 0
    while placed < n_p:
        best = -1
        best_key = None
        for v in range(n_p):
            if pos_of[v] >= 0:
                continue
            conn = sum(1 for w in adj[v] if pos_of[w] >= 0)
            key = (-conn, n_cand[v], -degree[v], v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        pos_of[best] = placed
        order.append(best)
        placed += 1
    return order, pos_of


def prepare(pattern, host, vertex_compat: Optional[Compat] = None,
            edge_compat: Optional[Compat] = None):
    """Encode a (pattern, host) pair into kernel buffers.

    Returns None when some pattern vertex has no candidate at all.
    """
    hb = host_buffers(host)
    vcmp = vertex_compat or _eq
    ecmp = edge_compat or _eq
    p_labels = list(pattern.vertex_labels)
    p_adj = pattern.adjacency
    n_p, n_h = len(p_labels), hb.n
    p_degree = [len(a) for a in p_adj]

    vcompat = array("B", bytes(n_p * n_h))
    n_cand = [0] * n_p
    label_rows: dict = {}
    for v in range(n_p):
        lab = p_labels[v]
        row = label_rows.get(lab)
        if row is None:
            row = [vcmp(lab, hl) for hl in hb.labels]
            label_rows[lab] = row
        base = v * n_h
        d = p_degree[v]
        c = 0
        for h in range(n_h):
            if row[h] and hb.degree[h] >= d:
                vcompat[base + h] = 1
                c += 1
        if c == 0:
            return None
        n_cand[v] = c

    p_edge_code: dict = {}
    for v in range(n_p):
        for lab in p_adj[v].values():
            p_edge_code.setdefault(lab, len(p_edge_code))
    n_hlab = max(1, len(hb.edge_labels))
    ecompat = array("B", bytes(max(1, len(p_edge_code)) * n_hlab))
    for plab, pc in p_edge_code.items():
        for hc, hlab in enumerate(hb.edge_labels):
            if ecmp(plab, hlab):
                ecompat[pc * n_hlab + hc] = 1

    order, pos_of = _search_order(n_p, p_adj, n_cand, p_degree)
    parent = array("i")
    back_ptr = array("i", [0])
    back_pos = array("i")
    back_lab = array("i")
    for k, v in enumerate(order):
        earlier = sorted(pos_of[w] for w in p_adj[v] if pos_of[w] < k)
        parent.append(earlier[0] if earlier else -1)
        for j in earlier:
            back_pos.append(j)
            back_lab.append(p_edge_code[p_adj[v][order[j]]])
        back_ptr.append(len(back_pos))
    return (n_p, n_h, array("i", order), parent, back_ptr, back_pos, back_lab,
            hb.h_ptr, hb.h_idx, hb.h_mat, vcompat, ecompat, n_hlab)


def count(pattern, host, max_matches: int = 1, vertex_compat=None, edge_compat=None,
          search=None) -> int:
    """Count monomorphisms pattern -> host, saturating at ``max_matches``."""
    if len(pattern.vertex_labels) > len(host.vertex_labels):
        return 0
    bufs = prepare(pattern, host, vertex_compat, edge_compat)
    if bufs is None:
        return 0
    return (search or _search)(*bufs, max_matches, None)


def enumerate_maps(pattern, host, max_matches: int = -1, vertex_compat=None,
                   edge_compat=None, search=None) -> Iterator[tuple]:
    """Yield vertex maps (tuple indexed by pattern vertex) in search order."""
    if len(pattern.vertex_labels) > len(host.vertex_labels):
        return iter(())
    bufs = prepare(pattern, host, vertex_compat, edge_compat)
    if bufs is None:
        return iter(())
    found: list[tuple] = []
    (search or _search)(*bufs, max_matches, lambda m: found.append(m) or True)
    return iter(found)


def visit_maps(pattern, host, visitor, vertex_compat=None, edge_compat=None,
               search=None) -> int:
    """Call ``visitor(map)`` per monomorphism until it returns falsy."""
    if len(pattern.vertex_labels) > len(host.vertex_labels):
        return 0
    bufs = prepare(pattern, host, vertex_compat, edge_compat)
    if bufs is None:
        return 0
    return (search or _search)(*bufs, -1, visitor)
