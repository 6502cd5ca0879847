from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, strategies as st

from grammod.derivation import (apply_match, apply_rule, check_dangling, check_pushout_exists,
                                enumerate_derivations, is_match, set_partitions)
from grammod.gml import parse_rule_gml
from grammod.graph import (build_graph, connected_components, count_isomorphisms,
                           enumerate_monomorphisms)
from grammod.rule import invert_rule
from grammod.smiles import parse_graph_dfs, parse_smiles
from grammod.validate import validate_derivation

from fixtures import *
from oracles import ClassIndex, engine_pairs, label_multiset, oracle_derivations
from test_graph import graphs
from test_rule import rules

AA = parse_graph_dfs("[A][A]")


def _derivations(rule, universe, active=None):
    return list(enumerate_derivations(rule, universe, active))


# worked examples -----------------------------------------------------------

def test_keto_enol_ionic_on_acetaldehyde():
    ds = _derivations(keto_enol_ionic(), [acetaldehyde()])
    assert len(ds) == 1
    heads = ds[0].heads
    assert len(heads) == 2
    assert any(h.vertex_labels == ("H+",) for h in heads)
    assert {lab for h in heads for lab in h.vertex_labels} >= {"O-"}


def test_keto_enol_f_on_formaldehyde_is_empty():
    assert _derivations(keto_enol_f(), [formaldehyde()]) == []


def test_keto_enol_f_on_acetaldehyde_gives_vinyl_alcohol():
    ds = _derivations(keto_enol_f(), [acetaldehyde()])
    assert len(ds) == 1
    assert count_isomorphisms(ds[0].heads[0], parse_smiles("C=CO")) == 1


def test_aldol_addition_uses_both_graphs():
    form, ene = formaldehyde(), enediol()
    ds = _derivations(aldol_add_f(), [form, ene])
    two_tail = [d for d in ds if len(d.tails) == 2]
    assert two_tail
    for d in two_tail:
        assert sorted(t.num_vertices for t in d.tails) == [4, 8]
        assert len(d.heads) == 1 and d.heads[0].num_vertices == 12
    glyceraldehyde = parse_smiles("OCC(O)C=O")
    assert any(count_isomorphisms(d.heads[0], glyceraldehyde) for d in two_tail)


def test_identity_rule_returns_tail():
    g = parse_graph_dfs("[A]")
    ds = _derivations(parse_rule_gml(IDENTITY_GML), [g])
    assert len(ds) == 1 and count_isomorphisms(ds[0].heads[0], g) == 1


def test_destroy_vertex():
    rule = parse_rule_gml(DESTROY_VERTEX_GML)
    lone = parse_graph_dfs("[A]")
    assert check_dangling(rule, lone, {1: 0})
    assert apply_rule(rule, lone, {1: 0}) == []
    assert not check_dangling(rule, AA, {1: 0})
    assert _derivations(rule, [AA]) == []
    [d] = _derivations(rule, [lone])
    assert d.heads == ()


def test_keto_enol_never_dangles():
    rule, host = keto_enol_f(), acetaldehyde()
    maps = list(enumerate_monomorphisms(rule.left, host))
    assert maps
    ids = rule.left.vertex_ids
    for m in maps:
        vmap = {ids[i]: h for i, h in enumerate(m.vertex_map)}
        assert check_dangling(rule, host, vmap)


def test_pushout_rejected_on_joined_pair():
    rule = parse_rule_gml(ADD_EDGE_GML)
    assert not check_pushout_exists(rule, AA, {1: 0, 2: 1})
    two = build_graph([(0, "A"), (1, "A")], [])
    assert check_pushout_exists(rule, two, {1: 0, 2: 1})
    res = apply_rule(rule, two, {1: 0, 2: 1})
    assert len(res) == 1 and res[0].num_edges == 1


def test_pushout_in_enumeration():
    rule = parse_rule_gml(ADD_EDGE_GML)
    single = lambda tails: len(tails) == 1
    assert list(enumerate_derivations(rule, [AA], accept_left=single)) == []
    path = parse_graph_dfs("[A][B][A]")
    ds = list(enumerate_derivations(rule, [path], accept_left=single))
    assert len(ds) == 1 and ds[0].heads[0].num_edges == 3


def test_relabelling_edge_keeps_pushout():
    rule = parse_rule_gml(LABEL_CHANGE_GML)
    host = parse_graph_dfs("[A]{A}[Q]")
    assert check_pushout_exists(rule, host, {1: 0, 2: 1})
    [h] = apply_rule(rule, host, {1: 0, 2: 1})
    assert sorted(h.vertex_labels) == ["B", "Q"] and h.edges[0][2] == "B"


def test_is_match_rejects():
    rule = keto_enol_f()
    host = acetaldehyde()
    assert not is_match(rule, host, {1: 0, 2: 0, 3: 1, 4: 2})
    assert not is_match(rule, host, {1: 0})


def test_active_subset_required():
    form, glyc, ene = formaldehyde(), glycolaldehyde(), enediol()
    all_ds = _derivations(aldol_add_f(), [form, glyc, ene])
    only_form = _derivations(aldol_add_f(), [form, glyc, ene], active=[form])
    assert only_form and len(only_form) < len(all_ds)
    for d in only_form:
        assert any(count_isomorphisms(t, form) for t in d.tails)


def test_empty_left_rule_never_fires():
    assert _derivations(parse_rule_gml(CREATE_VERTEX_GML), [parse_graph_dfs("[A]")]) == []


def test_two_copies_of_one_class():
    ds = _derivations(parse_rule_gml(ADD_EDGE_GML), [parse_graph_dfs("[A]")])
    assert len(ds) == 1
    assert len(ds[0].tails) == 2 and ds[0].heads[0].num_edges == 1


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(n)) for n in range(6)] == [1, 1, 2, 5, 15, 52]


# properties ----------------------------------------------------------------

FORMOSE_POOL = [formaldehyde(), glycolaldehyde(), enediol(), acetaldehyde()]


@pytest.mark.parametrize("rule", formose_rules() + [keto_enol_ionic()], ids=lambda r: r.name)
def test_formose_derivations_revalidate(rule, backend):
    ds = _derivations(rule, FORMOSE_POOL)
    for d in ds:
        assert validate_derivation(rule, d.tails, d.heads, d.match.placement, FORMOSE_POOL) == []
        assert {c for _, c, _ in d.match.placement} == set(range(len(d.tails)))


@pytest.mark.parametrize("rule", formose_rules() + [keto_enol_ionic()], ids=lambda r: r.name)
def test_formose_matches_oracle(rule):
    index = ClassIndex()
    expected = oracle_derivations(rule, FORMOSE_POOL, index=index)
    assert engine_pairs(_derivations(rule, FORMOSE_POOL), index) == expected


@pytest.mark.parametrize("rule", formose_rules(), ids=lambda r: r.name)
def test_formose_conserves_atoms(rule):
    for d in _derivations(rule, FORMOSE_POOL):
        assert label_multiset(d.tails) == label_multiset(d.heads)


def test_ionic_conserves_modulo_label_changes():
    rule = keto_enol_ionic()
    changes = {l: r for l, r in rule.vertex_label_changes().values()}
    for d in _derivations(rule, FORMOSE_POOL):
        before = Counter()
        for lab, n in label_multiset(d.tails).items():
            before[lab] += n
        for l, r in changes.items():
            before[l] -= 1
            before[r] += 1
        assert +before == label_multiset(d.heads)


@pytest.mark.parametrize("rule", formose_rules(), ids=lambda r: r.name)
def test_inverse_rule_reverses(rule):
    inv = invert_rule(rule)
    for d in _derivations(rule, FORMOSE_POOL):
        host, vmap = d.match.host()
        app = apply_match(rule, host, vmap)
        assert check_dangling(inv, app.result, app.comatch)
        assert check_pushout_exists(inv, app.result, app.comatch)
        back = apply_match(inv, app.result, app.comatch).result
        assert count_isomorphisms(back, host) == 1


def _connected_pool(gs):
    return [c for g in gs if g.num_vertices for c in connected_components(g)][:3]


@given(rules(4), st.lists(graphs(6), min_size=1, max_size=3))
def test_random_rules_match_oracle(rule, gs):
    pool = _connected_pool(gs)
    if not pool:
        return
    index = ClassIndex()
    got = _derivations(rule, pool)
    assert engine_pairs(got, index) == oracle_derivations(rule, pool, index=index)
    for d in got:
        assert validate_derivation(rule, d.tails, d.heads, d.match.placement) == []


@given(rules(4), st.lists(graphs(5), min_size=1, max_size=2), st.data())
def test_random_active_subset(rule, gs, data):
    pool = _connected_pool(gs)
    if not pool:
        return
    active = data.draw(st.lists(st.sampled_from(pool), min_size=1, max_size=len(pool)))
    index = ClassIndex()
    got = _derivations(rule, pool, active)
    assert engine_pairs(got, index) == oracle_derivations(rule, pool, active, index=index)
