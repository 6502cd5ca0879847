"""Exploration strategies over (subset, universe) states of graph classes.

Python combinators::

    strat = (addUniverse(formaldehyde) >> addSubset(glycolaldehyde)
             >> rightPredicate[lambda d: all(g.num_vertices <= 20 for g in d.right)](
                 repeat(rules)))
    dg = dgRuleComp([formaldehyde, glycolaldehyde], strat)
    dg.calc()

The same programs can be written as text, see :func:`parse_strategy`.
"""
from __future__ import annotations

import operator
import re
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .derivation import Derivation, enumerate_derivations
from .dg import DerivationGraph
from .errors import ParseError, StrategyError
from .graph import Graph, GraphRegistry
from .rule import Rule

DEFAULT_REPEAT_CAP = 2 ** 20


# AST -----------------------------------------------------------------------

class Strategy:
    """Base class; ``a >> b`` sequences, lists become :class:`ParallelAll`."""

    def __rshift__(self, other) -> "Sequence_":
        return Sequence_(self, as_strategy(other))

    def __rrshift__(self, other) -> "Sequence_":
        return Sequence_(as_strategy(other), self)


@dataclass(frozen=True, eq=False)
class Sequence_(Strategy):
    first: Strategy
    second: Strategy


@dataclass(frozen=True, eq=False)
class ParallelAll(Strategy):
    children: tuple[Strategy, ...]


@dataclass(frozen=True, eq=False)
class RuleStrategy(Strategy):
    rule: Rule


@dataclass(frozen=True, eq=False)
class AddSubset(Strategy):
    graphs: tuple[Graph, ...]


@dataclass(frozen=True, eq=False)
class AddUniverse(Strategy):
    graphs: tuple[Graph, ...]


@dataclass(frozen=True, eq=False)
class FilterSubset(Strategy):
    pred: Callable[[Graph], bool]


@dataclass(frozen=True, eq=False)
class FilterUniverse(Strategy):
    pred: Callable[[Graph], bool]


@dataclass(frozen=True, eq=False)
class LeftPredicate(Strategy):
    pred: Callable
    sub: Strategy


@dataclass(frozen=True, eq=False)
class RightPredicate(Strategy):
    pred: Callable
    sub: Strategy


@dataclass(frozen=True, eq=False)
class Repeat(Strategy):
    sub: Strategy
    bound: Optional[int] = None

    def __post_init__(self):
        if self.bound is not None and self.bound < 0:
            raise StrategyError(f"repeat bound must be >= 0, got {self.bound}")


@dataclass(frozen=True, eq=False)
class Revive(Strategy):
    sub: Strategy


def as_strategy(x) -> Strategy:
    if isinstance(x, Strategy):
        return x
    if isinstance(x, Rule):
        return RuleStrategy(x)
    if isinstance(x, (list, tuple)):
        return ParallelAll(tuple(as_strategy(c) for c in x))
    raise TypeError(f"cannot use {type(x).__name__} as a strategy")


def _graph_tuple(gs) -> tuple[Graph, ...]:
    return (gs,) if isinstance(gs, Graph) else tuple(gs)


def addSubset(*graphs) -> AddSubset:
    return AddSubset(tuple(g for x in graphs for g in _graph_tuple(x)))


def addUniverse(*graphs) -> AddUniverse:
    return AddUniverse(tuple(g for x in graphs for g in _graph_tuple(x)))


def filterSubset(pred) -> FilterSubset:
    return FilterSubset(pred)


def filterUniverse(pred) -> FilterUniverse:
    return FilterUniverse(pred)


def revive(sub) -> Revive:
    return Revive(as_strategy(sub))


class _Repeat:
    """``repeat(s)`` or ``repeat[n](s)``."""

    def __call__(self, sub) -> Repeat:
        return Repeat(as_strategy(sub))

    def __getitem__(self, n: int):
        return lambda sub: Repeat(as_strategy(sub), n)


class _Predicated:
    def __init__(self, node):
        self.node = node

    def __getitem__(self, pred):
        return lambda sub: self.node(pred, as_strategy(sub))


repeat = _Repeat()
leftPredicate = _Predicated(LeftPredicate)
rightPredicate = _Predicated(RightPredicate)


# evaluation ----------------------------------------------------------------

@dataclass(frozen=True)
class GraphState:
    """Class ids in insertion order; ``subset`` is contained in ``universe``."""

    subset: tuple[int, ...] = ()
    universe: tuple[int, ...] = ()

    def same_classes(self, other: "GraphState") -> bool:
        return set(self.subset) == set(other.subset) and set(self.universe) == set(other.universe)


def _merge(*seqs: Iterable[int]) -> tuple[int, ...]:
    return tuple(dict.fromkeys(c for s in seqs for c in s))


@dataclass
class DerivationView:
    """What predicates see: ``left`` tails and (for right predicates) ``right`` heads."""

    rule: Rule
    left: tuple[Graph, ...]
    right: tuple[Graph, ...] = ()


@dataclass
class _Context:
    registry: GraphRegistry
    dg: DerivationGraph
    subset_new_only: bool = False
    repeat_cap: int = DEFAULT_REPEAT_CAP
    left_preds: list = field(default_factory=list)
    right_preds: list = field(default_factory=list)
    used_stack: list = field(default_factory=list)

    def graphs(self, ids: Iterable[int]) -> list[Graph]:
        return [self.registry.graphs[c] for c in ids]

    def add(self, graphs: Iterable[Graph]) -> list[int]:
        out = []
        for g in graphs:
            cid, rep, _ = self.registry.register(g)
            self.dg.add_class(cid, rep)
            out.append(cid)
        return out


def _check_pred(pred, arg, path: str) -> bool:
    try:
        return bool(pred(arg))
    except Exception as exc:
        raise StrategyError(f"{path}: predicate failed: {exc!r}") from exc


def eval_strategy(s: Strategy, state: GraphState, ctx: _Context, path: str = "") -> GraphState:
    s = as_strategy(s)
    out = _eval(s, state, ctx, path or type(s).__name__)
    if not set(out.subset) <= set(out.universe):
        raise StrategyError(f"{path}: subset escaped the universe")
    return out


def _eval(s: Strategy, state: GraphState, ctx: _Context, path: str) -> GraphState:
    if isinstance(s, AddSubset):
        ids = ctx.add(s.graphs)
        return GraphState(_merge(state.subset, ids), _merge(state.universe, ids))
    if isinstance(s, AddUniverse):
        return GraphState(state.subset, _merge(state.universe, ctx.add(s.graphs)))
    if isinstance(s, FilterSubset):
        keep = tuple(c for c in state.subset
                     if _check_pred(s.pred, ctx.registry.graphs[c], path))
        return GraphState(keep, state.universe)
    if isinstance(s, FilterUniverse):
        uni = tuple(c for c in state.universe
                    if _check_pred(s.pred, ctx.registry.graphs[c], path))
        kept = set(uni)
        return GraphState(tuple(c for c in state.subset if c in kept), uni)
    if isinstance(s, Sequence_):
        mid = eval_strategy(s.first, state, ctx, path + ">>0")
        return eval_strategy(s.second, mid, ctx, path + ">>1")
    if isinstance(s, ParallelAll):
        outs = [eval_strategy(c, state, ctx, f"{path}[{i}]") for i, c in enumerate(s.children)]
        if not outs:
            return state
        return GraphState(_merge(*(o.subset for o in outs)),
                          _merge(*(o.universe for o in outs)))
    if isinstance(s, LeftPredicate):
        ctx.left_preds.append(s.pred)
        try:
            return eval_strategy(s.sub, state, ctx, path + "/left")
        finally:
            ctx.left_preds.pop()
    if isinstance(s, RightPredicate):
        ctx.right_preds.append(s.pred)
        try:
            return eval_strategy(s.sub, state, ctx, path + "/right")
        finally:
            ctx.right_preds.pop()
    if isinstance(s, Repeat):
        return _repeat(s, state, ctx, path)
    if isinstance(s, Revive):
        used: set[int] = set()
        ctx.used_stack.append(used)
        try:
            out = eval_strategy(s.sub, state, ctx, path + "/revive")
        finally:
            ctx.used_stack.pop()
        live = set(out.universe)
        back = [c for c in state.subset if c not in used and c in live]
        return GraphState(_merge(out.subset, back), out.universe)
    if isinstance(s, RuleStrategy):
        return _apply_rule(s.rule, state, ctx, path)
    raise StrategyError(f"{path}: unknown strategy node {type(s).__name__}")


def _repeat(s: Repeat, state: GraphState, ctx: _Context, path: str) -> GraphState:
    bound = s.bound
    if bound is None:
        bound = ctx.repeat_cap
    cur = state
    for i in range(bound):
        out = eval_strategy(s.sub, cur, ctx, f"{path}/repeat{i}")
        if not out.subset:
            return cur
        grew = not set(out.universe) <= set(cur.universe)
        cur = out
        if not grew:
            return cur
    else:
        if s.bound is None and bound > 0:
            warnings.warn(f"{path}: unbounded repeat stopped at the safety cap of {bound} "
                          "iterations", RuntimeWarning, stacklevel=2)
    return cur


def _apply_rule(rule: Rule, state: GraphState, ctx: _Context, path: str) -> GraphState:
    if not state.subset:
        return GraphState((), state.universe)
    left_preds = list(ctx.left_preds)
    right_preds = list(ctx.right_preds)

    def accept_left(tails) -> bool:
        view = DerivationView(rule, tuple(tails))
        return all(_check_pred(p, view, path) for p in left_preds)

    def accept_right(d: Derivation) -> bool:
        view = DerivationView(rule, d.left, d.right)
        return all(_check_pred(p, view, path) for p in right_preds)

    old = set(state.universe)
    heads: list[int] = []
    for d in enumerate_derivations(rule, ctx.graphs(state.universe), ctx.graphs(state.subset),
                                   ctx.registry, accept_left if left_preds else None,
                                   accept_right if right_preds else None):
        for cid, g in zip(d.head_ids, d.right):
            ctx.dg.add_class(cid, g)
        ctx.dg.add_hyperedge(rule, d.tail_ids, d.head_ids, d.match.placement, state.subset)
        for used in ctx.used_stack:
            used.update(d.tail_ids)
        heads.extend(d.head_ids)
    if ctx.subset_new_only:
        heads = [c for c in heads if c not in old]
    out = _merge(heads)
    return GraphState(out, _merge(state.universe, out))


class DerivationGraphEvaluator:
    """Runs one strategy from the empty state; ``calc`` may be called once."""

    def __init__(self, starting_graphs: Iterable[Graph], strategy, subset_new_only: bool = False,
                 repeat_cap: int = DEFAULT_REPEAT_CAP):
        self.registry = GraphRegistry()
        self.dg = DerivationGraph()
        for g in starting_graphs:
            cid, rep, _ = self.registry.register(g)
            self.dg.add_class(cid, rep, is_input=True)
        self.strategy = as_strategy(strategy)
        self.subset_new_only = subset_new_only
        self.repeat_cap = repeat_cap
        self.state: Optional[GraphState] = None

    def calc(self) -> DerivationGraph:
        if self.state is not None:
            raise StrategyError("calc() has already been run on this evaluator")
        self.state = GraphState()
        ctx = _Context(self.registry, self.dg, self.subset_new_only, self.repeat_cap)
        self.state = eval_strategy(self.strategy, GraphState(), ctx)
        return self.dg.freeze()

    @property
    def graph_database(self) -> list[Graph]:
        return list(self.registry.graphs)


def dgRuleComp(starting_graphs: Iterable[Graph], strategy, **kwargs) -> DerivationGraphEvaluator:
    return DerivationGraphEvaluator(starting_graphs, strategy, **kwargs)


# predicates ----------------------------------------------------------------

_CMP = {"<=": operator.le, "<": operator.lt, "==": operator.eq, ">=": operator.ge,
        ">": operator.gt}


@dataclass(frozen=True)
class GraphPredicate:
    """``atom cmp int`` over one graph."""

    atom: str
    label: Optional[str]
    cmp: str
    value: int

    def measure(self, g: Graph) -> int:
        if self.atom == "numVertices":
            return g.num_vertices
        if self.atom == "numEdges":
            return g.num_edges
        return g.v_label_count(self.label)

    def __call__(self, g: Graph) -> bool:
        return _CMP[self.cmp](self.measure(g), self.value)

    def __str__(self):
        atom = f'vLabelCount("{self.label}")' if self.atom == "vLabelCount" else self.atom
        return f"{atom} {self.cmp} {self.value}"


@dataclass(frozen=True)
class DerivationPredicate:
    """``all(right, numVertices <= 20)`` and friends."""

    quantifier: str  # "all" | "any"
    side: str  # "left" | "right"
    pred: GraphPredicate

    def __call__(self, d) -> bool:
        gs = getattr(d, self.side)
        return (all if self.quantifier == "all" else any)(self.pred(g) for g in gs)

    def __str__(self):
        return f"{self.quantifier}({self.side}, {self.pred})"


# text syntax ---------------------------------------------------------------

_STRAT_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<seq>>>)
  | (?P<cmp><=|>=|==|<|>)
  | (?P<int>-?\d+)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<punct>[\[\](),])
  | (?P<name>[A-Za-z_][A-Za-z0-9_.\-]*)
""", re.VERBOSE)

_KEYWORDS = {"addSubset", "addUniverse", "filterSubset", "filterUniverse", "leftPredicate",
             "rightPredicate", "repeat", "revive"}


def parse_strategy(text: str, graphs: Mapping[str, Union[Graph, Sequence[Graph]]],
                   rules: Mapping[str, Union[Rule, Sequence[Rule]]],
                   source: Optional[str] = None) -> Strategy:
    """Parse a strategy program; ``graphs``/``rules`` resolve references.

    A rule reference may name a list of rules, which acts as ``[r1, r2, ...]``.
    """
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _STRAT_TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected {text[pos]!r}", line, pos - line_start + 1, source)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), line, m.start() - line_start + 1))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = m.start() + chunk.rindex("\n") + 1
        pos = m.end()
    end = ("eof", "", line, pos - line_start + 1)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else end

    def err(tok, msg):
        return ParseError(msg, tok[2], tok[3], source)

    def take(kind, value=None):
        nonlocal i
        tok = peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise err(tok, f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        i += 1
        return tok

    def graph_refs() -> list[Graph]:
        out: list[Graph] = []
        while True:
            tok = take("name")
            if tok[1] not in graphs:
                raise err(tok, f"unknown graph {tok[1]!r}")
            out.extend(_graph_tuple(graphs[tok[1]]))
            if peek()[1] != ",":
                return out
            take("punct", ",")

    def graph_pred() -> GraphPredicate:
        tok = take("name")
        label = None
        if tok[1] == "vLabelCount":
            take("punct", "(")
            label = bytes(take("str")[1][1:-1], "utf-8").decode("unicode_escape")
            take("punct", ")")
        elif tok[1] not in ("numVertices", "numEdges"):
            raise err(tok, f"unknown predicate atom {tok[1]!r}")
        cmp = take("cmp")[1]
        value = int(take("int")[1])
        return GraphPredicate(tok[1], label, cmp, value)

    def deriv_pred() -> DerivationPredicate:
        q = take("name")
        if q[1] not in ("all", "any"):
            raise err(q, "expected 'all' or 'any'")
        take("punct", "(")
        side = take("name")
        if side[1] not in ("left", "right"):
            raise err(side, "expected 'left' or 'right'")
        take("punct", ",")
        p = graph_pred()
        take("punct", ")")
        return DerivationPredicate(q[1], side[1], p)

    def primary() -> Strategy:
        tok = peek()
        if tok[1] == "[":
            take("punct", "[")
            children = [seq()]
            while peek()[1] == ",":
                take("punct", ",")
                children.append(seq())
            take("punct", "]")
            return ParallelAll(tuple(children))
        if tok[1] == "(":
            take("punct", "(")
            s = seq()
            take("punct", ")")
            return s
        name = take("name")
        kw = name[1]
        if kw in ("addSubset", "addUniverse"):
            take("punct", "(")
            gs = graph_refs()
            take("punct", ")")
            return (AddSubset if kw == "addSubset" else AddUniverse)(tuple(gs))
        if kw in ("filterSubset", "filterUniverse"):
            take("punct", "(")
            p = graph_pred()
            take("punct", ")")
            return (FilterSubset if kw == "filterSubset" else FilterUniverse)(p)
        if kw in ("leftPredicate", "rightPredicate"):
            take("punct", "[")
            p = deriv_pred()
            take("punct", "]")
            take("punct", "(")
            s = seq()
            take("punct", ")")
            return (LeftPredicate if kw == "leftPredicate" else RightPredicate)(p, s)
        if kw == "repeat":
            bound = None
            if peek()[1] == "[":
                take("punct", "[")
                btok = take("int")
                bound = int(btok[1])
                if bound < 0:
                    raise err(btok, "repeat bound must be >= 0")
                take("punct", "]")
            take("punct", "(")
            s = seq()
            take("punct", ")")
            return Repeat(s, bound)
        if kw == "revive":
            take("punct", "(")
            s = seq()
            take("punct", ")")
            return Revive(s)
        if kw not in rules:
            raise err(name, f"unknown rule {kw!r}")
        return as_strategy(rules[kw] if isinstance(rules[kw], Rule) else list(rules[kw]))

    def seq() -> Strategy:
        s = primary()
        while peek()[0] == "seq":
            take("seq")
            s = Sequence_(s, primary())
        return s

    if not tokens:
        raise ParseError("empty strategy program", 1, 1, source)
    result = seq()
    if i != len(tokens):
        raise err(tokens[i], f"unexpected {tokens[i][1]!r}")
    return result


def parse_graph_predicate(text: str, source: Optional[str] = None) -> GraphPredicate:
    """Parse a lone ``atom cmp int`` graph predicate."""
    prefix = "filterSubset("
    try:
        node = parse_strategy(prefix + text + ")", {}, {}, source)
    except ParseError as exc:
        col = None if exc.column is None else max(1, exc.column - len(prefix))
        raise ParseError(exc.message, exc.line, col, source) from None
    return node.pred
