import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from operadforge import delta
from operadforge.delta import ass_morphism, identity, parse_spec
from operadforge.fincat import is_poset, is_simply_laced
from operadforge.fposet import (BadTarget, f_graph_edge, f_graph_generating, f_of_simplex,
                                f_on_operator, f_zero, index_action, to_dot,
                                verify_simplicial_functoriality)

SMALL = delta.enumerate_simplices(2, 2)


def test_f_zero():
    assert len(f_zero(1)) == 2
    assert f_zero(0) == ()
    assert len(f_zero(3)) == 6


def test_generating_graphs():
    g0 = f_graph_generating(ass_morphism(0, 1, (0, 0)))
    assert len(g0.edges) == 1
    (_, s, t), = g0.edges
    assert (s.vertex, s.tag, t.vertex, t.tag) == (1, "x", 1, "y")
    g1 = f_graph_generating(identity(1))
    assert {(s.vertex, s.tag, t.vertex, t.tag) for _, s, t in g1.edges} == \
        {(1, "x", 0, "x"), (0, "y", 1, "y")}
    g2 = f_graph_generating(ass_morphism(2, 1, (0, 2)))
    assert (len(g2.vertices), len(g2.edges)) == (6, 3)
    with pytest.raises(BadTarget):
        f_graph_generating(identity(2))


def test_edge_graphs():
    g = f_graph_edge(ass_morphism(3, 2, (0, 1, 3)))
    assert (len(g.vertices), len(g.edges)) == (10, 5)
    assert len(f_graph_edge(identity(3)).edges) == 6
    assert len(f_graph_edge(ass_morphism(0, 1, (0, 0))).edges) == 1


@pytest.mark.parametrize("spec,census", [
    ("[1]-(0,1)->[1]", (4, 2, 2)),
    ("[0]", (0, 0, 0)),
    ("[2]-(0,2)->[1]", (6, 3, 3)),
    ("[3]", (6, 0, 6)),
    ("[1]-(0,1)->[1]-(0,1)->[1]", (6, 4, 2)),
])
def test_census(spec, census):
    c = f_of_simplex(parse_spec(spec)).census()
    assert (c["objects"], c["edges"], c["components"]) == census


def test_two_simplex_of_identities_paths():
    cat = f_of_simplex(parse_spec("[1]-(0,1)->[1]-(0,1)->[1]"))
    assert sorted(len(c) for c in cat.components()) == [3, 3]


@pytest.mark.parametrize("sigma", SMALL, ids=delta.format_spec)
def test_f_is_simply_laced_poset(sigma):
    cat = f_of_simplex(sigma)
    free = cat.free
    assert is_poset(free) and is_simply_laced(free)
    for a in cat.objects:
        for b in cat.objects:
            assert cat.leq(a, b) == bool(free.hom(a, b))


def test_outer_face_inclusion():
    sigma = parse_spec("[1]-(0,1)->[1]")
    G = f_on_operator(delta.face_operator(1, 1), sigma)
    assert G.morphism_map == {}
    assert all(o.vertex == 0 for o in G.object_map.values())


def test_degeneracy_to_identities():
    sigma = delta.simplex(vertex=1)
    s0 = delta.degeneracy_operator(0, 0)
    G = f_on_operator(s0, sigma)
    for f in G.source.edges:
        assert G.target.is_identity(G.apply(f))


def test_inner_face_paths():
    sigma = parse_spec("[2]-(0,2)->[1]-(0,1)->[1]")
    d1 = delta.face_operator(2, 1)
    G = f_on_operator(d1, sigma)
    cat = G.target
    for e in G.source.edges:
        assert 1 <= len(cat.factor(G.apply(e))) <= 2


@pytest.mark.parametrize("sigma", SMALL, ids=delta.format_spec)
def test_index_action_matches_functor(sigma):
    cat = f_of_simplex(sigma)
    for j in range(sigma.dim + 1):
        for alpha in delta.monotone_maps(j, sigma.dim):
            tau = delta.restrict_simplex(sigma, alpha)
            G = f_on_operator(alpha, sigma, tau)
            got = index_action(alpha.map, sigma, tau)
            want = tuple(cat.objects.index(G.object_map[o]) for o in f_of_simplex(tau).objects)
            assert got == want


def test_functoriality_bounds():
    assert verify_simplicial_functoriality(2, 2, "all").ok
    assert verify_simplicial_functoriality(0, 4, "all").ok
    assert verify_simplicial_functoriality(2, 2, "generating").ok


def test_dot_is_deterministic():
    sigma = parse_spec("[2]-(0,1,2)->[2]")
    a, b = to_dot(f_of_simplex(sigma)), to_dot(f_of_simplex(sigma))
    assert a == b
    assert a.count("\" -> \"") == len(f_of_simplex(sigma).edges)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(delta.enumerate_simplices(1, 4)))
def test_one_simplex_components(sigma):
    if sigma.dim != 1 or sigma.vertices[1] != 1 or not sigma.edges[0].is_active:
        return
    comps = f_of_simplex(sigma).components()
    assert len(comps) == sigma.vertices[0] + 1
    assert all(len(c) == 2 for c in comps)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(delta.enumerate_simplices(3, 2)))
def test_object_count(sigma):
    assert len(f_of_simplex(sigma).objects) == 2 * sum(sigma.vertices)
