import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from operadforge import delta, suite
from operadforge.delta import identity
from operadforge.unicity import (category_automorphisms, fiberwise_swap_extension_exists,
                                 natural_automorphisms, swap_extension_fails, swap_is_visible)


def test_automorphism_examples():
    assert category_automorphisms(delta.simplex(vertex=1)).order == 2
    assert category_automorphisms(delta.simplex(identity(1))).order == 2
    assert category_automorphisms(delta.simplex(vertex=0)).order == 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(delta.enumerate_simplices(2, 2)))
def test_order_formula_matches_search(sigma):
    g = category_automorphisms(sigma)
    elements = list(g.elements())
    assert len(elements) == g.order
    assert len(set(elements)) == g.order


def test_automorphisms_are_functors():
    g = category_automorphisms(delta.parse_spec("[2]-(0,2)->[1]"))
    fs = list(g.as_functors())
    assert len(fs) == g.order == 6
    assert all(F.is_valid() for F in fs)


@pytest.mark.parametrize("bound,count", [((0, 1), 2), ((1, 2), 1), ((2, 3), 1)])
def test_natural_counts(bound, count):
    rep = natural_automorphisms(*bound)
    assert rep.count == count


def test_two_stage_elimination():
    rep = natural_automorphisms(1, 2)
    assert rep.pairs_preserved_before_final
    stages = dict(rep.stages)
    # with orientation kept, the inert segments alone already force the identity
    assert stages["seed"] > stages["inert-segments"] == 1
    assert stages["all-simplices"] == 1


def test_undirected_needs_the_active_map():
    rep = natural_automorphisms(1, 2, directed=False)
    stages = dict(rep.stages)
    assert stages["inert-segments"] > 1
    assert stages["active-[2]->[1]"] == 1
    assert rep.count == 1


def test_survivors_bounded_by_orders():
    rep = natural_automorphisms(2, 2)
    for s, n in rep.survivors_at.items():
        assert 1 <= n <= rep.orders[s]


def test_report_lines():
    lines = natural_automorphisms(1, 2).lines()
    assert "AUT σ=[1] order=2" in lines
    assert lines[-1] == "NATURAL bound=(1,2) count=1"


def test_swap_extension():
    assert swap_extension_fails(suite.load("walking_arrow"))
    assert swap_extension_fails(suite.load("walking_iso"))
    assert not swap_extension_fails(suite.load("terminal"))


@pytest.mark.parametrize("name", suite.SUITE)
def test_swap_tracks_visibility(name):
    X = suite.load(name)
    assert swap_extension_fails(X) == swap_is_visible(X)


def test_fiberwise_bijections_exist_for_iso():
    # only uniform extensions are ruled out; counts alone match for a groupoid
    assert fiberwise_swap_extension_exists(suite.load("walking_iso"))
    assert not fiberwise_swap_extension_exists(suite.load("walking_arrow"))
