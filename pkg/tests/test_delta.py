from math import comb

import pytest
from hypothesis import given
import hypothesis.strategies as st

from operadforge import delta
from operadforge.delta import (ConvexSegment, SpecError, ass_morphism, compose, concatenate,
                               decompose, enumerate_simplices, format_spec, identity, parse_spec,
                               pullback_segment, segments)


def hull(f, s):
    # convex hull of the dual image of the segment's endpoints
    pts = [f.dual[i] for i in range(s.lo, s.hi + 1)]
    return ConvexSegment(min(pts), max(pts))


def test_segments():
    assert segments(1) == [ConvexSegment(0, 1)]
    assert segments(0) == []
    assert len(segments(3)) == 3


def test_pullback_examples():
    assert pullback_segment(ass_morphism(3, 1, (0, 3)), ConvexSegment(0, 1)) == ConvexSegment(0, 3)
    f = ass_morphism(3, 2, (0, 1, 3))
    assert pullback_segment(f, ConvexSegment(1, 2)) == ConvexSegment(1, 3)
    for n in range(4):
        for s in segments(n):
            assert pullback_segment(identity(n), s) == s


def test_decompose_examples():
    f = ass_morphism(3, 2, (0, 1, 3))
    assert decompose(f) == [ass_morphism(1, 1, (0, 1)), ass_morphism(2, 1, (0, 2))]
    assert decompose(identity(3)) == [identity(1)] * 3
    assert decompose(ass_morphism(0, 2, (0, 0, 0))) == [ass_morphism(0, 1, (0, 0))] * 2


def test_concatenate():
    for f in (ass_morphism(3, 2, (0, 1, 3)), identity(3), ass_morphism(0, 2, (0, 0, 0))):
        assert concatenate(decompose(f)) == f
    g = ass_morphism(2, 1, (0, 2))
    assert concatenate([g]) == g
    assert concatenate([]) == identity(0)


def test_faces_and_degeneracies():
    e1, e2 = ass_morphism(2, 1, (0, 2)), identity(1)
    sigma = delta.simplex(e1, e2)
    assert delta.simplex_face(sigma, 1) == delta.simplex(compose(e2, e1))
    assert delta.simplex_degeneracy(delta.simplex(vertex=3), 0) == delta.simplex(identity(3))


def test_enumerate_examples():
    assert [s.vertices for s in enumerate_simplices(0, 1)] == [(0,), (1,)]
    assert len(enumerate_simplices(1, 0)) == 2
    ones = [s for s in enumerate_simplices(1, 1) if s.dim == 1]
    assert len(ones) == sum(comb(m + n + 1, n + 1) for m in range(2) for n in range(2))


@given(st.integers(0, 4), st.integers(0, 4))
def test_hom_sizes(m, n):
    assert len(delta.morphisms(m, n)) == comb(m + n + 1, n + 1)


def test_spec_round_trip_and_errors():
    for s in enumerate_simplices(2, 2):
        assert parse_spec(format_spec(s)) == s
    assert parse_spec(" [2] -(0, 2)-> [1] ") == delta.simplex(ass_morphism(2, 1, (0, 2)))
    with pytest.raises(SpecError, match="0,x"):
        parse_spec("[1]-(0,x)->[1]")
    with pytest.raises(SpecError):
        parse_spec("[1]-(0,2)->[1]")


# -- properties -----------------------------------------------------------------

def morphisms_from(m):
    return st.integers(0, 3).flatmap(lambda n: st.sampled_from(delta.morphisms(m, n)))


composable = st.integers(0, 3).flatmap(
    lambda m: morphisms_from(m).flatmap(
        lambda f: morphisms_from(f.dst).flatmap(
            lambda g: morphisms_from(g.dst).map(lambda h: (f, g, h)))))


@given(composable)
def test_ass_associative(fgh):
    f, g, h = fgh
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(f, identity(f.src)) == f == compose(identity(f.dst), f)


@given(composable)
def test_pullback_is_hull(fgh):
    f = fgh[0]
    for s in segments(f.dst):
        assert pullback_segment(f, s) == hull(f, s)


@given(composable)
def test_pullback_functorial(fgh):
    f, g, _ = fgh
    for s in segments(g.dst):
        assert pullback_segment(compose(g, f), s) == pullback_segment(f, pullback_segment(g, s))


@given(composable)
def test_active_inert_factorisation(fgh):
    f = fgh[0]
    active, inert = delta.active_inert(f)
    assert active.is_active and inert.is_inert
    assert compose(active, inert) == f


@given(composable)
def test_reverse_is_involutive_functor(fgh):
    f, g, _ = fgh
    assert delta.reverse(delta.reverse(f)) == f
    assert delta.reverse(compose(g, f)) == compose(delta.reverse(g), delta.reverse(f))


@given(st.sampled_from(enumerate_simplices(3, 2)))
def test_operators_restrict(sigma):
    for alpha, tau in delta.generating_operators(sigma):
        assert alpha in delta.operators_between(tau, sigma)
