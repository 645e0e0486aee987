import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newtontree import invariants as inv
from newtontree import oracle as orc
from newtontree.fixtures import T2_TEXT
from newtontree.tree import parse, serialize

from conftest import population, small_population


def texts(trees):
    return {serialize(t) for t in trees}


# -- enumeration ------------------------------------------------------------------

def test_tiny_population():
    got = texts(orc.enumerate_trees(orc.EnumBounds(1, 2, 1)))
    assert got == {"(v (1 a1))", "(v (1 a1) (1 a1))", "(v (1 a0) (1 a1))"}


def test_fixture_in_small_population():
    assert T2_TEXT in texts(small_population())


def test_bounds_must_be_positive():
    with pytest.raises(ValueError, match="max_vertices"):
        orc.EnumBounds(0, 2, 1)
    with pytest.raises(ValueError, match="max_abs_decoration"):
        orc.EnumBounds(2, 2, 0)


def test_population_is_valid_and_within_bounds():
    b = orc.EnumBounds(3, 4, 3)
    for t in small_population():
        assert len(t.vertices()) <= b.max_vertices
        assert len(t.arrows()) <= b.max_arrows
        assert all(abs(q) <= b.max_abs_decoration for e in t.edges for q in (e.q_parent, e.q_child))


def test_pruned_generator_matches_naive():
    b = orc.EnumBounds(2, 3, 2)
    pruned = texts(orc.enumerate_trees(b))
    naive = texts(orc.enumerate_naive(b))
    assert pruned == naive
    assert len(pruned) == 70


def test_pruned_generator_yields_no_duplicates():
    b = orc.EnumBounds(3, 4, 3)
    raw = [serialize(t) for t in orc.enumerate_trees(b, dedup=False)]
    assert len(raw) == len(set(raw))


@pytest.mark.parametrize("bounds, expected", [
    ((2, 3, 2), 70),
    ((3, 2, 2), 119),
    ((3, 4, 3), 6096),
])
def test_counting_matches_enumeration(bounds, expected):
    b = orc.EnumBounds(*bounds)
    assert orc.count_trees(b) == expected
    assert len(population(*bounds)) == expected


def test_default_population_count():
    assert orc.count_trees() == 2642487289


@pytest.mark.parametrize("bounds", [
    (3, 4, 3),
    (4, 5, 2),
    pytest.param((3, 6, 4), marks=pytest.mark.slow),
])
def test_minimal_generator_matches_filtered_enumeration(bounds):
    b = orc.EnumBounds(*bounds)
    filtered = {serialize(t) for t in orc.enumerate_trees(b)
                if inv.is_minimally_complete(t) and inv.points_at_infinity(t) >= 2}
    direct = [serialize(t) for t in orc.enumerate_minimally_complete(b)]
    assert len(direct) == len(set(direct))
    assert set(direct) == filtered


# -- campaigns --------------------------------------------------------------------

def test_fixture_campaign(fixtures):
    report = orc.run_campaign(trees=fixtures.values())
    assert report.ok, report.counterexamples
    assert report.trees_enumerated == 4
    assert report.minimally_complete == 3
    assert set(report.results) == set(orc.PROPERTIES)
    assert report.results["roundtrip"] == [4, 0]


def test_invalid_trees_are_reported_and_excluded(T2):
    bad = parse("(v (1 3 (v (2 a0) (1 a1))) (1 -2 (v (3 a0) (1 a1))))")
    report = orc.run_campaign(trees=[T2, bad], slow=False)
    assert report.trees_enumerated == 1
    assert report.rejected == [(serialize(bad), ["edge-determinant"])]
    assert report.ok
    assert "completion-unique" not in report.results


def test_counterexamples_are_recorded(T2):
    report = orc.CampaignReport()
    report.record("demo", False, T2, "broken on purpose")
    report.record("demo", True, T2)
    report.record("demo", None, T2)
    assert not report.ok
    assert report.results["demo"] == [1, 1]
    assert report.as_dict()["counterexamples"] == [
        {"property": "demo", "tree": serialize(T2), "detail": "broken on purpose"}]


def test_replay(fixtures):
    for name in orc.PROPERTIES:
        assert orc.replay(name, T2_TEXT) in (True, None)


def test_unknown_scope():
    with pytest.raises(ValueError, match="scope"):
        orc.run_campaign(orc.EnumBounds(1, 1, 1), scope="everything")


def test_small_full_campaign():
    report = orc.run_campaign(orc.EnumBounds(2, 3, 2), scope="all")
    assert report.ok, report.counterexamples[:3]
    assert report.trees_enumerated == 70


def _report(draw_counts):
    r = orc.CampaignReport(*draw_counts[:2])
    for name, p, f in draw_counts[2]:
        slot = r.results.setdefault(name, [0, 0])
        slot[0] += p
        slot[1] += f
    return r


reports = st.builds(
    lambda a, b, rs: _report((a, b, rs)),
    st.integers(0, 50), st.integers(0, 50),
    st.lists(st.tuples(st.sampled_from(["x", "y", "z"]), st.integers(0, 9), st.integers(0, 9)),
             max_size=4),
)


@settings(max_examples=100, deadline=None)
@given(reports, reports, reports)
def test_merge_is_associative(a, b, c):
    left = a.merge(b).merge(c).as_dict()
    right = a.merge(b.merge(c)).as_dict()
    assert left == right


# -- equivalence walks -----------------------------------------------------------------

def test_equivalence_walk_on_fixtures(fixtures):
    rng = random.Random(7)
    for t in fixtures.values():
        for _ in range(20):
            w = orc.equivalence_walk(t, rng)
            assert w.ok, (w.start, w.moves, w.detail)


def test_completion_scan(T0):
    edges = orc.completion_edges(T0)
    assert len(edges) == 2
    assert all(orc.completion_scan(T0, e) == [-1] for e in edges)
