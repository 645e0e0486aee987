import itertools
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from newtontree import classify as cl
from newtontree import invariants as inv
from newtontree.fixtures import T2_TEXT, T3_TEXT, T4_TEXT
from newtontree.transforms import normalize
from newtontree.tree import parse, serialize, validate


# -- shadows ------------------------------------------------------------------

def test_shadow_labels(T3):
    s = cl.shadow(T3)
    assert s.labels == {1: 1, 2: 0, 5: 0, 8: 0}


def test_shadow_classes(T0, T2, T3, T4):
    assert str(cl.classify_shadow(T2)) == "Fig2"
    assert cl.classify_shadow(T3) == cl.ShadowClass("Fig3", 2)
    assert str(cl.classify_shadow(T4)) == "Fig4(2)"
    assert cl.match_shadow(cl.shadow(T0)).tag == "Other"
    with pytest.raises(cl.ClassifyError):
        cl.classify_shadow(T0)


def test_shadow_forgets_decorations(T2):
    other = cl.fig2_family(5, 7)
    assert other != T2
    assert cl.shadow(other) == cl.shadow(T2)
    assert cl.shadow(other).key() == cl.fig2_key()


def test_shadow_keys_are_distinct():
    keys = [cl.fig2_key()] + [cl.fig3_key(r) for r in (2, 3, 4)] + [cl.fig4_key(r) for r in (2, 3, 4)]
    assert len(set(keys)) == len(keys)


# -- companions -----------------------------------------------------------------

def test_companions(T2, T3):
    assert cl.companion(T3, 2) == 1
    assert cl.companion(T3, 8) == 1
    assert cl.companion(T2, 1) == 4
    assert cl.companion(T2, 4) == 1
    with pytest.raises(cl.ClassifyError, match="not a dicritical"):
        cl.companion(T3, 1)


def test_companion_trichotomy_on_fixtures(fixtures):
    for name in ("T2", "T3", "T4"):
        t = fixtures[name]
        dic = inv.dicritical_set(t)
        flags = [cl.companion(t, u) in dic for u in dic]
        assert all(flags) == any(flags) == (name == "T2")


# -- maximal multiplicity -------------------------------------------------------

@pytest.mark.parametrize("text, tag, M, s", [
    (T2_TEXT, "Fig2", 0, 2),
    (T3_TEXT, "Fig3(2)", -1, 3),
    (T4_TEXT, "Fig4(2)", -2, 4),
])
def test_max_multiplicity_reports(text, tag, M, s):
    r = cl.check_max_multiplicity(parse(text))
    assert r.ok and r.equality and r.hypotheses_hold and r.identity_holds
    assert (r.M, r.s, r.gcd, r.delta_total) == (M, s, 1, 0)
    assert str(r.shadow_class) == tag
    assert r.as_dict()["shadow_class"] == tag


def test_max_multiplicity_needs_minimal_completeness(T0):
    with pytest.raises(cl.ClassifyError):
        cl.check_max_multiplicity(T0)


# -- families -----------------------------------------------------------------

def test_fig2_examples(T0, T2):
    assert cl.fig2_family(1, 1) == normalize(T0)
    assert cl.fig2_family(2, 3) == T2
    with pytest.raises(cl.FamilyError, match="coprime"):
        cl.fig2_family(2, 4)


def test_fig3_examples(T3):
    assert cl.fig3_family(1, (1, 1), 1) == T3
    t = cl.fig3_family(1, (2, 1), 1)
    assert serialize(t) == ("(v (1 -3 (v (1 a0) (1 a1)))"
                            " (1 0 (v (1 -1 (v (2 a0) (1 a1))) (1 -1 (v (1 a0) (1 a1))))))")
    with pytest.raises(cl.FamilyError, match="modulo"):
        cl.fig3_family(2, (1, 1), 1)
    with pytest.raises(cl.FamilyError, match="r >= 2"):
        cl.fig3_family(1, (1,), 1)


def test_fig4_examples(T4):
    assert cl.fig4_family(1, (1, 1), 2, 1) == T4
    for a1p in range(1, 11):
        with pytest.raises(cl.FamilyError):
            cl.fig4_family(1, (2, 1), 4, a1p)
    with pytest.raises(cl.FamilyError, match="positive"):
        cl.fig4_family(0, (1, 1), 2, 1)


def fig4_solutions(limit):
    for a, a1, a2, ap, a1p in itertools.product(range(1, limit + 1), repeat=5):
        if a1p * (a * (1 - a2) - a1) + a * ap == 1:
            yield a, (a1, a2), ap, a1p


def test_fig4_further_parameter_sets():
    found = list(fig4_solutions(5))
    assert (1, (1, 1), 2, 1) in found
    others = [p for p in found if p != (1, (1, 1), 2, 1)]
    assert others
    for a, a_list, ap, a1p in others:
        t = cl.fig4_family(a, a_list, ap, a1p)
        assert validate(t).ok
        assert str(cl.classify_shadow(t)) == "Fig4(2)"


def _root_side_decorations(t):
    return sorted(e.q_child for e in t.children(t.root))


def test_fig4_side_identity():
    for a, a_list, ap, a1p in fig4_solutions(5):
        t = cl.fig4_family(a, a_list, ap, a1p)
        n = sum(a_list[1:])
        q, qp = -a1p, a * (1 - n) - a_list[0]
        assert _root_side_decorations(t) == sorted([q, qp])
        assert a * ap - q * qp == 1


def test_family_params_build():
    assert cl.FamilyParams(2, (2,), 3).build() == parse(T2_TEXT)
    assert cl.generate(cl.FamilyParams(3, (1, 1), 1)) == parse(T3_TEXT)
    assert cl.FamilyParams(4, (1, 1), 1, a_prime=2).build() == parse(T4_TEXT)
    with pytest.raises(cl.FamilyError):
        cl.FamilyParams(5, (1,), 1).build()
    with pytest.raises(cl.FamilyError):
        cl.FamilyParams(2, (1, 2), 1).build()


def _family_checks(t, tag):
    assert validate(t).ok
    assert inv.is_minimally_complete(t)
    s = len(inv.dicriticals(t))
    assert inv.tree_multiplicity(t) == 2 - s
    assert all(d == 1 for _, d in inv.dicriticals(t))
    assert str(cl.classify_shadow(t)) == tag


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30))
def test_fig2_property(a1, a1p):
    assume(math.gcd(a1, a1p) == 1)
    _family_checks(cl.fig2_family(a1, a1p), "Fig2")


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(1, 6), min_size=2, max_size=4), st.integers(0, 3))
def test_fig3_property(a, a_list, k):
    m = a * sum(a_list[1:]) + a_list[0]
    assume(math.gcd(a, m) == 1)
    # every a1' with a * a1' = 1 modulo m
    a1p = pow(a, -1, m) + k * m
    _family_checks(cl.fig3_family(a, a_list, a1p), f"Fig3({len(a_list)})")


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(1, 6), min_size=2, max_size=4), st.integers(1, 6))
def test_fig4_property(a, a_list, a1p):
    # solve the unit constraint for a'
    n = sum(a_list[1:])
    num = 1 - a1p * (a * (1 - n) - a_list[0])
    assume(num > 0 and num % a == 0)
    _family_checks(cl.fig4_family(a, a_list, num // a, a1p), f"Fig4({len(a_list)})")
