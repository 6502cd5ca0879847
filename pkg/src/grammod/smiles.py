"""SMILES and GraphDFS loaders.

Both are pre-order records of a depth-first traversal: ``(`` ``)`` open and
close branches, ring-closure digits (or ``%nn``) pair up back-edges, and
``.`` starts a new component.

SMILES subset: organic atoms (``B C N O P S F Cl Br I`` and aromatic
``b c n o p s``), bracket atoms ``[Sym Hn charge]``, bonds ``- = # :``.
No isotopes, stereo marks, wildcards or atom classes.

GraphDFS: ``[text]`` is a vertex with the verbatim label ``text``; ``{text}``
sets the label of the next edge; bond characters ``- = # :`` are shorthand
for those labels and the default edge label is ``-``. Unbracketed
organic-subset atoms get implicit hydrogens; edges with non-bond labels
count as single bonds for that purpose.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .chem import ATOM_NUMBER, ORGANIC_SUBSET, atom_label, implicit_hydrogen_count
from .errors import ParseError
from .graph import Graph

_AROMATIC = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}
_BOND_CHARS = "-=#:"
_BOND_ORDER = {"-": 1, "=": 2, "#": 3, ":": 1.5}
_BRACKET_RE = re.compile(
    r"^(?P<sym>[A-Z][a-z]?|se|as|[bcnops])(?P<h>H\d*)?(?P<chg>\++|-+|[+-]\d+)?$")


@dataclass
class _Atom:
    label: str
    element: Optional[str]
    aromatic: bool = False
    implicit: bool = False  # eligible for implicit hydrogens
    hydrogens: int = 0  # explicit bracket H count
    bonds: list = field(default_factory=list)  # edge labels, for valence


class _DFSParser:
    def __init__(self, text: str, dialect: str, source: Optional[str]):
        self.text = text
        self.dialect = dialect
        self.source = source
        self.pos = 0
        self.atoms: list[_Atom] = []
        self.edges: dict[tuple[int, int], str] = {}

    def error(self, msg, pos=None):
        col = (self.pos if pos is None else pos) + 1
        return ParseError(msg, 1, col, self.source)

    # tokens -------------------------------------------------------------
    def _atom_token(self) -> Optional[_Atom]:
        t, i = self.text, self.pos
        if t[i] == "[":
            j = t.find("]", i)
            if j < 0:
                raise self.error("unterminated '['")
            body = t[i + 1:j]
            self.pos = j + 1
            if self.dialect == "dfs":
                if not body:
                    raise self.error("empty vertex label '[]'", i)
                return _Atom(body, None)
            return self._bracket_atom(body, i)
        if self.dialect == "smiles" and t[i] in _AROMATIC:
            self.pos += 1
            return _Atom(_AROMATIC[t[i]], _AROMATIC[t[i]], aromatic=True, implicit=True)
        for sym in (t[i:i + 2], t[i]):
            if sym in ORGANIC_SUBSET:
                self.pos += len(sym)
                return _Atom(sym, sym, implicit=True)
        return None

    def _bracket_atom(self, body: str, start: int) -> _Atom:
        m = _BRACKET_RE.match(body)
        if m is None:
            raise self.error(f"unsupported bracket atom [{body}]", start)
        sym = m.group("sym")
        aromatic = sym[0].islower()
        element = sym.capitalize() if aromatic else sym
        if element not in ATOM_NUMBER:
            raise self.error(f"unknown element {sym!r}", start)
        h = m.group("h")
        hcount = 0 if h is None else int(h[1:] or 1)
        chg = m.group("chg") or ""
        if not chg:
            charge = 0
        elif chg[1:].isdigit():
            charge = int(chg[1:])
        else:
            charge = len(chg)
        if chg.startswith("-"):
            charge = -charge
        return _Atom(atom_label(element, charge), element, aromatic=aromatic, hydrogens=hcount)

    def _ring_number(self) -> Optional[int]:
        t, i = self.text, self.pos
        if t[i].isdigit():
            self.pos += 1
            return int(t[i])
        if t[i] == "%":
            digits = t[i + 1:i + 3]
            if len(digits) == 2 and digits.isdigit():
                self.pos += 3
                return int(digits)
            raise self.error("'%' must be followed by two digits")
        return None

    def _edge_label(self) -> Optional[str]:
        t, i = self.text, self.pos
        if t[i] in _BOND_CHARS:
            self.pos += 1
            return t[i]
        if self.dialect == "dfs" and t[i] == "{":
            j = t.find("}", i)
            if j < 0:
                raise self.error("unterminated '{'")
            if j == i + 1:
                raise self.error("empty edge label '{}'")
            self.pos = j + 1
            return t[i + 1:j]
        return None

    # structure ----------------------------------------------------------
    def _connect(self, a: int, b: int, label: Optional[str], at: int) -> None:
        if a == b:
            raise self.error("ring closure onto the same atom", at)
        key = (min(a, b), max(a, b))
        if key in self.edges:
            raise self.error("duplicate bond between the same atoms", at)
        if label is None:
            if self.dialect == "smiles" and self.atoms[a].aromatic and self.atoms[b].aromatic:
                label = ":"
            else:
                label = "-"
        self.edges[key] = label
        self.atoms[a].bonds.append(label)
        self.atoms[b].bonds.append(label)

    def parse(self) -> None:
        t = self.text
        if not t:
            return
        prev: Optional[int] = None
        pending: Optional[str] = None
        pending_at = 0
        branches: list[tuple[int, int]] = []
        rings: dict[int, tuple[int, Optional[str], int]] = {}
        while self.pos < len(t):
            c = t[self.pos]
            start = self.pos
            if c == "(":
                if prev is None or pending is not None:
                    raise self.error("branch must follow an atom")
                branches.append((prev, start))
                self.pos += 1
                continue
            if c == ")":
                if not branches:
                    raise self.error("unbalanced ')'")
                if pending is not None:
                    raise self.error("bond without a following atom", pending_at)
                prev = branches.pop()[0]
                self.pos += 1
                continue
            if c == ".":
                if pending is not None or branches:
                    raise self.error("'.' inside a branch or after a bond")
                prev = None
                self.pos += 1
                continue
            label = self._edge_label()
            if label is not None:
                if pending is not None or prev is None:
                    raise self.error("unexpected bond symbol", start)
                pending, pending_at = label, start
                continue
            ring = self._ring_number()
            if ring is not None:
                if prev is None:
                    raise self.error("ring closure must follow an atom", start)
                if ring in rings:
                    other, other_label, _ = rings.pop(ring)
                    if pending is not None and other_label is not None and pending != other_label:
                        raise self.error(f"conflicting bonds on ring closure {ring}", start)
                    self._connect(other, prev, pending if pending is not None else other_label,
                                  start)
                else:
                    rings[ring] = (prev, pending, start)
                pending = None
                continue
            atom = self._atom_token()
            if atom is None:
                if c == "*":
                    raise self.error("wildcard atoms are not supported")
                if c in "/\\@":
                    raise self.error("stereo marks are not supported")
                raise self.error(f"unknown atom symbol {c!r}")
            self.atoms.append(atom)
            idx = len(self.atoms) - 1
            if prev is not None:
                self._connect(prev, idx, pending, start)
            elif pending is not None:
                raise self.error("bond without a preceding atom", pending_at)
            pending = None
            prev = idx
        if pending is not None:
            raise self.error("bond without a following atom", pending_at)
        if branches:
            raise self.error("unclosed '('", branches[-1][1])
        if rings:
            num, (_, _, at) = next(iter(rings.items()))
            raise self.error(f"unmatched ring closure {num}", at)

    def graph(self, name: str) -> Graph:
        labels = [a.label for a in self.atoms]
        adj: list[dict] = [{} for _ in labels]
        for (u, v), lab in self.edges.items():
            adj[u][v] = adj[v][u] = lab
        for i, atom in enumerate(self.atoms):
            n_h = atom.hydrogens
            if atom.implicit:
                n_h += _implicit_h(atom, self.dialect)
            for _ in range(n_h):
                labels.append("H")
                adj.append({i: "-"})
                adj[i][len(labels) - 1] = "-"
        return Graph(labels, adj, None, name)


def _implicit_h(atom: _Atom, dialect: str) -> int:
    if atom.aromatic:
        total = sum(1 if b == ":" else _BOND_ORDER.get(b, 1) for b in atom.bonds)
        return implicit_hydrogen_count(atom.element, total, aromatic=True)
    total = sum(_BOND_ORDER.get(b, 1) for b in atom.bonds)
    return implicit_hydrogen_count(atom.element, total)


def parse_smiles(text: str, name: str = "", source: Optional[str] = None) -> Graph:
    """Load a molecule; all hydrogens become explicit ``H`` vertices."""
    p = _DFSParser(text.strip(), "smiles", source)
    p.parse()
    return p.graph(name)


def parse_graph_dfs(text: str, name: str = "", source: Optional[str] = None) -> Graph:
    """Load a general labelled graph from GraphDFS text."""
    p = _DFSParser(text.strip(), "dfs", source)
    p.parse()
    return p.graph(name)
