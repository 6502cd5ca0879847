from __future__ import annotations

import warnings

import pytest
from hypothesis import given, strategies as st

from grammod.errors import ParseError, StrategyError
from grammod.gml import parse_rule_gml
from grammod.graph import count_isomorphisms
from grammod.smiles import parse_graph_dfs
from grammod.strategy import (DerivationGraphEvaluator, DerivationPredicate, GraphPredicate, GraphState, ParallelAll, Repeat,
                              RightPredicate, Sequence_, _Context, addSubset, addUniverse,
                              dgRuleComp, eval_strategy, filterSubset, filterUniverse,
                              as_strategy, leftPredicate, parse_graph_predicate, parse_strategy, repeat,
                              revive, rightPredicate)
from grammod.validate import validate_derivation

from fixtures import *
from oracles import oracle_derivations

FORM, GLYC = formaldehyde(), glycolaldehyde()
RULES = formose_rules()
GROW = parse_rule_gml("""rule [ context [ node [ id 1 label "A" ] ]
    right [ node [ id 2 label "A" ] edge [ source 1 target 2 label "-" ] ] ]""", name="grow")


def run(strategy, start=(FORM, GLYC), **kw):
    ev = dgRuleComp(list(start), strategy, **kw)
    dg = ev.calc()
    return ev, dg


def classes(ev, ids):
    return sorted(ev.registry.graphs[c].name for c in ids)


# node semantics ------------------------------------------------------------

def test_add_subset_only():
    ev, dg = run(addSubset(GLYC), start=[GLYC])
    assert (dg.num_vertices, dg.num_edges) == (1, 0)
    assert ev.state.subset == ev.state.universe == (0,)


def test_add_universe_keeps_subset():
    ev, _ = run(addUniverse(FORM) >> addSubset(GLYC))
    assert classes(ev, ev.state.subset) == ["Glycolaldehyde"]
    assert classes(ev, ev.state.universe) == ["Formaldehyde", "Glycolaldehyde"]


def test_add_is_iso_deduplicated():
    ev, _ = run(addSubset(GLYC, glycolaldehyde(), parse_smiles("O=CCO")), start=[])
    assert len(ev.state.subset) == 1


def test_rule_step_needs_active_tail():
    ev, dg = run(addUniverse(FORM) >> addSubset(GLYC) >> RULES)
    assert dg.num_edges > 0
    glyc_id = ev.registry.find(GLYC)
    for e in dg.hyperedges:
        assert glyc_id in e.tails
    heads = {c for e in dg.hyperedges for c in e.heads}
    assert set(ev.state.subset) == heads
    assert set(ev.state.universe) == heads | {0, 1}


def test_rule_on_empty_subset_does_nothing():
    ev, dg = run(addUniverse(FORM, GLYC) >> RULES)
    assert dg.num_edges == 0 and ev.state.subset == ()


def test_filters():
    ev, _ = run(addSubset(FORM, GLYC) >> filterSubset(lambda g: g.num_vertices > 4))
    assert classes(ev, ev.state.subset) == ["Glycolaldehyde"]
    assert len(ev.state.universe) == 2
    ev, _ = run(addSubset(FORM, GLYC) >> filterUniverse(lambda g: g.num_vertices > 4))
    assert classes(ev, ev.state.universe) == classes(ev, ev.state.subset) == ["Glycolaldehyde"]


def test_filter_universe_keeps_history():
    ev, dg = run(addSubset(FORM, GLYC) >> RULES[:1] >> filterUniverse(lambda g: False))
    assert dg.num_edges == 1 and ev.state.universe == ()


def test_repeat_zero_is_identity():
    start = addUniverse(FORM) >> addSubset(GLYC)
    a, _ = run(start)
    b, dg = run(start >> repeat[0](RULES))
    assert a.state.same_classes(b.state) and dg.num_edges == 0


def test_repeat_stops_on_empty_subset():
    # ketoEnol_F has nothing to act on after one step; repeat keeps the last
    # non-empty state.
    ev, dg = run(addSubset(parse_smiles("CC=O")) >> repeat[5](RULES[:1]), start=[])
    assert dg.num_edges == 1
    assert count_isomorphisms(ev.registry.graphs[ev.state.subset[0]], parse_smiles("C=CO"))


def test_repeat_stops_without_growth():
    keto = RULES[:2]
    ev, dg = run(addSubset(parse_smiles("CC=O")) >> repeat(keto), start=[])
    assert dg.num_edges == 2
    assert len(ev.state.universe) == 2


def test_unbounded_repeat_warns_at_cap():
    a = parse_graph_dfs("[A]")
    with pytest.warns(RuntimeWarning, match="safety cap of 3"):
        ev, dg = run(addSubset(a) >> repeat(GROW), start=[a], repeat_cap=3)
    assert max(g.num_vertices for g in dg.graphs) == 4


def test_bounded_repeat_does_not_warn():
    a = parse_graph_dfs("[A]")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run(addSubset(a) >> repeat[3](GROW), start=[a])


def test_negative_repeat_bound():
    with pytest.raises(StrategyError):
        repeat[-1](RULES)


def test_revive_readds_unused_subset():
    plain, _ = run(addSubset(FORM, GLYC) >> RULES[:1])
    revived, dg = run(addSubset(FORM, GLYC) >> revive(RULES[:1]))
    assert set(revived.state.subset) == set(plain.state.subset) | {0}
    assert all(0 not in e.tails for e in dg.hyperedges)


def test_left_predicate_filters_tails():
    small = leftPredicate[lambda d: all(g.num_vertices < 8 for g in d.left)]
    ev, dg = run(addSubset(FORM, GLYC) >> small(RULES))
    assert dg.num_edges == 0


def test_right_predicate_bounds_heads():
    bound = rightPredicate[lambda d: all(g.num_vertices <= 12 for g in d.right)]
    ev, dg = run(addUniverse(FORM) >> addSubset(GLYC) >> bound(repeat[3](RULES)))
    assert dg.num_edges > 0
    for e in dg.hyperedges:
        assert all(dg.graphs[c].num_vertices <= 12 for c in e.heads)


def test_predicates_pop_after_scope():
    never = rightPredicate[lambda d: False]
    ev, dg = run(addSubset(parse_smiles("CC=O")) >> never(RULES) >> addSubset(GLYC) >> RULES[:1],
                 start=[])
    assert dg.num_edges == 1


def test_predicate_error_has_path():
    bad = rightPredicate[lambda d: 1 / 0]
    with pytest.raises(StrategyError, match="predicate failed.*ZeroDivision") as info:
        run(addSubset(GLYC) >> bad(RULES))
    assert "right" in str(info.value)


def test_calc_twice_rejected():
    ev = dgRuleComp([GLYC], addSubset(GLYC))
    ev.calc()
    with pytest.raises(StrategyError, match="already"):
        ev.calc()


def test_dg_is_frozen_after_calc():
    _, dg = run(addSubset(GLYC))
    assert dg.frozen


def test_one_step_matches_oracle():
    _, dg = run(addSubset(FORM, GLYC) >> repeat[1](RULES))
    expected = sum(len(oracle_derivations(r, [FORM, GLYC])) for r in RULES)
    assert dg.num_edges == expected > 0


def test_subset_new_only():
    ev, _ = run(addSubset(parse_smiles("CC=O")) >> RULES[:2] >> RULES[:2], start=[])
    ev2, _ = run(addSubset(parse_smiles("CC=O")) >> RULES[:2] >> RULES[:2], start=[],
                 subset_new_only=True)
    assert len(ev.state.subset) == 1 and ev2.state.subset == ()


def test_explored_hyperedges_revalidate():
    bound = rightPredicate[lambda d: all(g.num_vertices <= 20 for g in d.right)]
    _, dg = run(addUniverse(FORM) >> addSubset(GLYC) >> bound(repeat[3](RULES)))
    for e in dg.hyperedges:
        d = dg.derivation(e.id)
        active = [dg.graphs[c] for c in e.active]
        assert validate_derivation(d.rule, d.tails, d.heads, e.placement, active) == []


# algebraic properties ------------------------------------------------------

PIECES = [addSubset(FORM), addSubset(GLYC), addUniverse(FORM), as_strategy(RULES[0]),
          as_strategy(RULES[2]), filterSubset(lambda g: g.num_vertices <= 8), repeat[1](RULES)]
pieces = st.sampled_from(PIECES)


def final(strategy) -> GraphState:
    ev, dg = run(addSubset(GLYC) >> strategy)
    return ev.state, dg.signature()


@given(pieces)
def test_parallel_single_child(s):
    a, sa = final(s)
    b, sb = final(ParallelAll((s,)))
    assert a.same_classes(b) and sa == sb


@given(pieces, pieces, pieces)
def test_sequence_associative(a, b, c):
    x, sx = final(Sequence_(Sequence_(a, b), c))
    y, sy = final(Sequence_(a, Sequence_(b, c)))
    assert x.same_classes(y) and sx == sy


@given(st.lists(pieces, min_size=1, max_size=3))
def test_deterministic(seq):
    s = seq[0]
    for nxt in seq[1:]:
        s = s >> nxt
    (a, sa), (b, sb) = final(s), final(s)
    assert a == b and sa == sb


@given(st.lists(pieces, min_size=1, max_size=3))
def test_universe_monotone_without_filter_universe(seq):
    ev = DerivationGraphEvaluator([], addSubset(GLYC))
    ctx = _Context(ev.registry, ev.dg)
    state = eval_strategy(addSubset(GLYC), GraphState(), ctx)
    for s in seq:
        out = eval_strategy(s, state, ctx)
        assert set(state.universe) <= set(out.universe)
        assert set(out.subset) <= set(out.universe)
        state = out


# text syntax ---------------------------------------------------------------

NAMES = {"formaldehyde": FORM, "glycolaldehyde": GLYC}
RULE_NAMES = {"inputRules": RULES, **{r.name: r for r in RULES}}

RN2 = """addUniverse(formaldehyde)
>> addSubset(glycolaldehyde)
# Iterate the rule application 4 times.
>> repeat[4](inputRules)"""

RN3 = """addUniverse(formaldehyde) >> addSubset(glycolaldehyde)
>> rightPredicate[all(right, numVertices <= 20)](
    repeat(inputRules)
)"""


def test_parse_rn2_equals_python():
    text = parse_strategy(RN2, NAMES, RULE_NAMES)
    py = addUniverse(FORM) >> addSubset(GLYC) >> repeat[4](RULES)
    (a, sa), (b, sb) = [(ev.state, dg.signature()) for ev, dg in (run(text), run(py))]
    assert a.same_classes(b) and sa == sb


def test_parse_rn3_structure():
    s = parse_strategy(RN3, NAMES, RULE_NAMES)
    assert isinstance(s.second, RightPredicate)
    assert str(s.second.pred) == "all(right, numVertices <= 20)"
    assert isinstance(s.second.sub, Repeat) and s.second.sub.bound is None
    assert isinstance(s.second.sub.sub, ParallelAll) and len(s.second.sub.sub.children) == 4


def test_parse_all_nodes():
    s = parse_strategy('[addSubset(formaldehyde, glycolaldehyde), revive(ketoEnol_F)] '
                       '>> filterUniverse(vLabelCount("C") >= 2) >> filterSubset(numEdges < 9) '
                       '>> leftPredicate[any(left, numVertices == 4)](aldolAdd_F)',
                       NAMES, RULE_NAMES)
    ev, dg = run(s)
    assert all(dg.graphs[c].v_label_count("C") >= 2 for c in ev.state.universe)


def test_graph_predicates():
    p = parse_graph_predicate('vLabelCount("C") > 1')
    assert p == GraphPredicate("vLabelCount", "C", ">", 1)
    assert p(GLYC) and not p(FORM)
    assert parse_graph_predicate("numVertices <= 4")(FORM)
    d = DerivationPredicate("any", "left", parse_graph_predicate("numEdges == 3"))
    from grammod.strategy import DerivationView
    assert d(DerivationView(RULES[0], (FORM, GLYC)))


@pytest.mark.parametrize("text, msg, pos", [
    ("", "empty", (1, 1)),
    ("addSubset(nope)", "unknown graph", (1, 11)),
    ("addSubset(formaldehyde) >> nope", "unknown rule", (1, 28)),
    ("repeat[-2](inputRules)", "bound", (1, 8)),
    ("addSubset(formaldehyde", r"expected '\)'", (1, 23)),
    ("addSubset(formaldehyde)\n>> filterSubset(size < 3)", "unknown predicate atom", (2, 17)),
    ("rightPredicate[some(right, numVertices < 3)](inputRules)", "all' or 'any", (1, 16)),
    ("rightPredicate[all(middle, numVertices < 3)](inputRules)", "left' or 'right", (1, 20)),
    ("[inputRules,]", "expected 'name'", (1, 13)),
    ("inputRules inputRules", "unexpected", (1, 12)),
    ("inputRules @", "unexpected '@'", (1, 12)),
])
def test_parse_errors(text, msg, pos):
    with pytest.raises(ParseError, match=msg) as info:
        parse_strategy(text, NAMES, RULE_NAMES, source="p.txt")
    assert (info.value.line, info.value.column) == pos


def test_graph_predicate_error_column():
    with pytest.raises(ParseError) as info:
        parse_graph_predicate("numVertices <= x")
    assert info.value.column == 16
