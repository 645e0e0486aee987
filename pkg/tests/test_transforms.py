import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newtontree import invariants as inv
from newtontree import transforms as tf
from newtontree.classify import fig2_family
from newtontree.tree import Kind, parse, serialize, validate

from conftest import small_population

POP = small_population()
GENERIC = tuple(t for t in POP if inv.is_generic(t))
CHAIN = "(v (1 a1) (1 0 (v (1 -1 (v (1 -2 (v (1 a0) (1 a1))))))))"


def dead_end(t, v):
    (e,) = t.dead_ends(v)
    return e


def arrow_edge(t, v):
    (e,) = [e for e in t.children(v) if t.kind(e.child) is Kind.ARROW1]
    return e


# -- single moves ---------------------------------------------------------------

def test_remove_unit_dead_end(T3):
    u = tf.remove_dead_end_1(T3, dead_end(T3, 2))
    assert validate(u).ok
    assert inv.multiplicities(u)[2] == 0


def test_remove_dead_end_needs_unit(T2):
    with pytest.raises(tf.MoveError, match="not 1"):
        tf.remove_dead_end_1(T2, dead_end(T2, 1))
    with pytest.raises(tf.MoveError, match="not a dead end"):
        tf.remove_dead_end_1(T2, arrow_edge(T2, 1))


def test_add_then_remove_dead_end(T3):
    stripped = tf.remove_dead_end_1(T3, dead_end(T3, 2))
    restored = tf.add_dead_end_1(stripped, 2)
    assert restored == T3
    again = tf.remove_dead_end_1(restored, dead_end(restored, 2))
    assert again == stripped


def test_add_dead_end_preconditions(T2, T3):
    with pytest.raises(tf.MoveError, match="already has a dead end"):
        tf.add_dead_end_1(T2, 1)
    with pytest.raises(tf.MoveError, match="not dicritical"):
        tf.add_dead_end_1(T3, 1)


def test_contract_preconditions(T2):
    with pytest.raises(tf.MoveError, match="valency 3"):
        tf.contract_valency_2(T2, 1)
    with pytest.raises(tf.MoveError, match="root"):
        tf.contract_valency_2(T2, 0)
    with pytest.raises(tf.MoveError, match="not a vertex"):
        tf.contract_valency_2(T2, 2)


def test_insert_then_contract_is_identity(T0):
    e = T0.edges[0]
    assert tf.completion_decoration(T0, e) == -1
    u = tf.insert_dicritical(T0, e)
    assert validate(u).ok
    w = max(u.node_ids())
    assert inv.multiplicities(u)[w] == 0
    assert tf.contract_valency_2(u, w) == T0


def test_insert_needs_positive_multiplicity(T2):
    with pytest.raises(tf.MoveError, match="multiplicity 0"):
        tf.insert_dicritical(T2, arrow_edge(T2, 1))


def test_t0_completion_gives_figure_two(T0):
    t = T0
    for e in list(T0.edges):
        t = tf.insert_dicritical(t, e)
    new = [v for v in t.vertices() if v != t.root]
    for v in new:
        t = tf.add_dead_end_1(t, v)
    assert validate(t).ok
    assert t == fig2_family(1, 1)
    assert serialize(t) == "(v (1 -1 (v (1 a0) (1 a1))) (1 -1 (v (1 a0) (1 a1))))"


def test_chain_contracts_in_either_order():
    t = parse(CHAIN)
    low, high = 2, 3
    assert t.valency(low) == t.valency(high) == 2
    a = tf.contract_valency_2(tf.contract_valency_2(t, low), high)
    b = tf.contract_valency_2(tf.contract_valency_2(t, high), low)
    assert a == b
    assert serialize(a) == "(v (1 -2 (v (1 a0) (1 a1))) (1 a1))"


def test_moves_do_not_mutate(T3):
    before = (T3.nodes, T3.edges)
    tf.remove_dead_end_1(T3, dead_end(T3, 2))
    tf.add_dead_end_1(tf.remove_dead_end_1(T3, dead_end(T3, 2)), 2)
    assert (T3.nodes, T3.edges) == before


def test_legal_moves_and_apply(T0, T3):
    kinds = sorted(m.kind for m in tf.legal_moves(T0))
    assert kinds == ["insert-dicritical", "insert-dicritical"]
    kinds = {m.kind for m in tf.legal_moves(T3)}
    assert kinds == {"remove-dead-end-1"}
    for m in tf.legal_moves(T3):
        assert validate(tf.apply_move(T3, m)).ok
    with pytest.raises(tf.MoveError):
        tf.Move("teleport", 0)


# -- normalization ---------------------------------------------------------------

def test_normalize_examples(T0, T3):
    assert tf.normalize(T0) == fig2_family(1, 1)
    assert tf.normalize(T3) == T3
    # an extra unit dead end at the multiplicity-1 vertex
    extra = parse("(v (1 0 (v (1 a0) (1 -1 (v (1 a0) (1 a1))) (1 -1 (v (1 a0) (1 a1)))))"
                  " (1 -2 (v (1 a0) (1 a1))))")
    assert validate(extra).ok and not inv.is_minimally_complete(extra)
    assert tf.normalize(extra) == T3


def test_normalize_rejects_non_generic():
    t = parse(CHAIN)
    assert not inv.is_generic(t)
    with pytest.raises(tf.MoveError, match="generic"):
        tf.normalize(t)
    with pytest.raises(tf.MoveError):
        tf.complete(t)


def test_completion_decoration_is_unique_by_scan(T0):
    from newtontree.oracle import completion_scan
    for e in T0.edges:
        assert completion_scan(T0, e) == [tf.completion_decoration(T0, e)]


def test_reexported_predicates():
    assert tf.is_minimally_complete is inv.is_minimally_complete
    assert tf.is_generic is inv.is_generic


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(POP), st.randoms(use_true_random=False))
def test_random_moves_preserve_invariants(t, rng):
    M, pts = inv.tree_multiplicity(t), inv.points_at_infinity(t)
    for _ in range(5):
        moves = tf.legal_moves(t)
        if not moves:
            break
        m = rng.choice(moves)
        u = tf.apply_move(t, m)
        assert validate(u).ok
        assert inv.tree_multiplicity(u) == M
        assert inv.points_at_infinity(u) == pts
        if m.kind in ("remove-dead-end-1", "contract-valency-2"):
            Nt, Nu = inv.multiplicities(t), inv.multiplicities(u)
            assert all(Nu[x] == Nt[x] for x in Nu)
        t = u


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(GENERIC), st.integers(0, 2**32))
def test_normalize_is_confluent_and_idempotent(t, seed):
    n = tf.normalize(t)
    assert inv.is_minimally_complete(n)
    assert tf.normalize(n) == n
    assert tf.normalize(t, random.Random(seed)) == n


def test_reduce_orders_agree_on_chain():
    t = parse(CHAIN)
    expected = tf.reduce(t)
    for seed in range(20):
        assert tf.reduce(t, random.Random(seed)) == expected
