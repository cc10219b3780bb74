import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from operadforge import delta, suite
from operadforge.delta import ass_morphism, identity
from operadforge.fincat import opposite
from operadforge.operad import (LiftCounter, OperadObject, compose_operad, compose_operad_partial,
                                identity_morphism, is_valid_lift, is_valid_morphism, iter_lifts,
                                lifts, operad_morphisms, operad_objects, polymorphism_set,
                                restrict_lift, reverse_operad_check)

ARROW = suite.load("walking_arrow")
ISO = suite.load("walking_iso")
MONOID = suite.load("monoid2")
TERMINAL = suite.load("terminal")
SUITE = [suite.load(n) for n in suite.SUITE]


def test_object_counts():
    assert len(operad_objects(ARROW, 1)) == 4
    assert all(len(operad_objects(X, 0)) == 1 for X in SUITE)
    assert len(operad_objects(TERMINAL, 3)) == 1


def test_polymorphism_examples():
    ps = polymorphism_set(ARROW, ass_morphism(0, 1, (0, 0)), (), ("a", "b"))
    assert [p.chain for p in ps] == [("f",)]
    assert len(polymorphism_set(ARROW, identity(1), (("a", "b"),), ("a", "b"))) == 1
    for m in range(4):
        f = ass_morphism(m, 1, (0, m))
        u = (("*", "*"),) * m
        assert len(polymorphism_set(MONOID, f, u, ("*", "*"))) == 2 ** (m + 1)


def test_monoid_composition():
    u = OperadObject((("*", "*"),))
    phi, = [p for p in operad_morphisms(MONOID, identity(1), u, u) if p.family == (("t", "t"),)]
    out = compose_operad(MONOID, phi, phi)
    assert out.family == (("t", "t"),)
    assert out == compose_operad_partial(MONOID, phi, phi)


def test_lift_counts():
    assert len(lifts(delta.simplex(vertex=1), ARROW)) == 4
    assert len(lifts(delta.simplex(identity(1)), ARROW)) == 9
    assert len(lifts(delta.simplex(vertex=0), ISO)) == 1
    assert LiftCounter(ARROW).count(delta.simplex(identity(1))) == 9


@pytest.mark.parametrize("X", SUITE, ids=suite.SUITE)
@pytest.mark.parametrize("sigma", delta.enumerate_simplices(2, 1), ids=delta.format_spec)
def test_counter_matches_enumeration(X, sigma):
    ls = lifts(sigma, X)
    assert LiftCounter(X).count(sigma) == len(ls)
    assert all(is_valid_lift(X, L) for L in ls)


def morphism_over(X, f):
    objs_m, objs_n = operad_objects(X, f.src), operad_objects(X, f.dst)
    return [phi for u in objs_m for w in objs_n for phi in operad_morphisms(X, f, u, w)]


def test_segment_axiom():
    for X in (ARROW, ISO, MONOID):
        for f in delta.morphisms(2, 2):
            for u in operad_objects(X, 2):
                for w in operad_objects(X, 2):
                    whole = len(operad_morphisms(X, f, u, w))
                    parts = 1
                    for i, part in enumerate(delta.decompose(f)):
                        a, b = f.dual[i], f.dual[i + 1]
                        parts *= len(polymorphism_set(X, part, u.pairs[a:b], w.pairs[i]))
                    assert whole == parts


def test_associativity_walking_iso():
    f, g, h = ass_morphism(2, 1, (0, 2)), identity(1), identity(1)
    for phi in morphism_over(ISO, f):
        for psi in operad_morphisms(ISO, g, phi.dst, phi.dst):
            for chi in operad_morphisms(ISO, h, psi.dst, psi.dst):
                left = compose_operad(ISO, compose_operad(ISO, phi, psi), chi)
                right = compose_operad(ISO, phi, compose_operad(ISO, psi, chi))
                assert left == right


categories = st.sampled_from(SUITE)
ass_maps = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)).flatmap(
    lambda mnp: st.tuples(st.sampled_from(delta.morphisms(mnp[0], mnp[1])),
                          st.sampled_from(delta.morphisms(mnp[1], mnp[2]))))


@settings(max_examples=80, deadline=None)
@given(categories, ass_maps, st.randoms(use_true_random=False))
def test_composition_laws(X, fg, rnd):
    f, g = fg
    phis = morphism_over(X, f)
    if not phis:
        return
    phi = rnd.choice(phis)
    psis = [psi for w in operad_objects(X, g.dst) for psi in operad_morphisms(X, g, phi.dst, w)]
    if not psis:
        return
    psi = rnd.choice(psis)
    out = compose_operad(X, phi, psi)
    assert is_valid_morphism(X, out)
    assert out.over == delta.compose(g, f)
    assert out == compose_operad_partial(X, phi, psi)
    assert compose_operad(X, identity_morphism(X, phi.src), phi) == phi
    assert compose_operad(X, phi, identity_morphism(X, phi.dst)) == phi


@settings(max_examples=40, deadline=None)
@given(categories, st.sampled_from(delta.enumerate_simplices(2, 2)), st.randoms(use_true_random=False))
def test_restrict_along_degeneracy_and_outer_faces(X, sigma, rnd):
    ls = list(itertools.islice(iter_lifts(sigma, X), 200))
    if not ls:
        return
    L = rnd.choice(ls)
    k = sigma.dim
    for i in range(k + 1):
        s = restrict_lift(X, delta.degeneracy_operator(k, i), L)
        assert s.edge_morphisms[i] == identity_morphism(X, L.vertex_objects[i])
        assert is_valid_lift(X, s)
    if k >= 1:
        assert restrict_lift(X, delta.face_operator(k, 0), L).edge_morphisms == L.edge_morphisms[1:]
        assert restrict_lift(X, delta.face_operator(k, k), L).edge_morphisms == L.edge_morphisms[:-1]


def test_inner_face_is_composite():
    sigma = delta.simplex(ass_morphism(2, 1, (0, 2)), identity(1))
    d1 = delta.face_operator(2, 1)
    for L in iter_lifts(sigma, ARROW):
        got = restrict_lift(ARROW, d1, L)
        assert got.edge_morphisms == (compose_operad(ARROW, *L.edge_morphisms),)


def test_reversal_small():
    assert reverse_operad_check(MONOID, 2, 2, Xop=MONOID).ok
    assert reverse_operad_check(ARROW, 2, 1).ok
    assert opposite(opposite(ARROW)) == ARROW
