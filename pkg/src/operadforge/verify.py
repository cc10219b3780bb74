"""Verification sweeps shared by the command line and the acceptance suite.

Each sweep yields :class:`Record` values, one per check, in a deterministic
order. Checks over every element of a lift set are exact but only feasible
for small sets; at larger bounds the sweeps combine

* exact counts on both sides (transfer matrices vs. walk counts),
* the universal lift of ``O_{F(sigma)}``, which every lift over every X is
  the image of, and
* seeded random lifts, drawn uniformly through the functor side.
"""

from __future__ import annotations

import gc
import json
import random
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import delta
from .adjunction import (adj, backward, forward, functor_count, sample_functor, universal_bijection_holds,
                         universal_lift, universal_naturality_holds, verify_naturality)
from .delta import AssSimplex
from .fincat import compose_functors, count_functors, naive_functors
from .fposet import (InvariantViolation, NoPath, f_of_simplex, f_on_operator,
                     verify_simplicial_functoriality)
from .operad import (LiftCounter, compose_operad_partial, is_valid_lift, iter_lifts, restrict_lift,
                     reverse_operad_check)


@dataclass(frozen=True)
class Record:
    name: str
    sigma: str
    X: str
    ok: bool
    lhs: int
    rhs: int

    def line(self) -> str:
        result = "pass" if self.ok else "fail"
        return f"CHECK {self.name} σ={self.sigma} X={self.X} result={result} lhs={self.lhs} rhs={self.rhs}"

    def json(self) -> str:
        return json.dumps({"check": self.name, "sigma": self.sigma, "X": self.X,
                           "result": "pass" if self.ok else "fail",
                           "lhs": self.lhs, "rhs": self.rhs}, ensure_ascii=False)


@contextmanager
def paused_gc():
    """Sweeps allocate many short-lived tuples and no cycles; skip the collector."""
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def _rng(seed: int, *key) -> random.Random:
    return random.Random(f"{seed}:" + ":".join(map(str, key)))


def _op_name(alpha) -> str:
    k = alpha.dst_dim
    if alpha.is_face:
        return f"d{next(i for i in range(k + 1) if i not in alpha.map)}"
    if alpha.is_degeneracy:
        return f"s{next(i for i in range(k + 1) if alpha.map.count(i) == 2)}"
    return "op" + "".join(map(str, alpha.map))


def _round_trip(sigma, X, G) -> bool:
    # backward o forward is then the identity on L too, as backward(G) is L
    L = backward(sigma, G, X)
    return is_valid_lift(X, L) and forward(sigma, L, X) == G


# -- adjunction -----------------------------------------------------------------

def adjunction_records(simplices: Iterable[AssSimplex], categories: list[tuple[str, object]],
                       seed: int = 0, samples: int = 1, exhaustive_limit: int = 0,
                       rotate: bool = True) -> Iterator[Record]:
    """Bijection checks per simplex and category.

    Every ``(sigma, X)`` gets exact counts on both sides. Lift sets of size at
    most ``exhaustive_limit`` are enumerated and matched element by element;
    otherwise ``samples`` random functors are pushed through ``backward`` and
    back. With ``rotate`` only one category per simplex is sampled, cycling
    through the list.
    """
    counters = [LiftCounter(X) for _, X in categories]
    for idx, sigma in enumerate(simplices):
        spec = delta.format_spec(sigma)
        cat = f_of_simplex(sigma)
        yield Record("adjunction-universal", spec, "F(σ)", universal_bijection_holds(sigma),
                     len(cat.slots), len(cat.edges))
        for c, ((name, X), counter) in enumerate(zip(categories, counters)):
            lhs, rhs = counter.count(sigma), functor_count(sigma, X)
            ok = lhs == rhs
            if ok and lhs <= exhaustive_limit:
                try:
                    ok = adj(sigma, X).ok
                except InvariantViolation:
                    ok = False
            elif ok and (not rotate or idx % len(categories) == c):
                rng = _rng(seed, spec, name)
                for _ in range(samples):
                    G = sample_functor(sigma, X, rng)
                    if G is None:
                        ok = ok and lhs == 0
                        break
                    ok = ok and _round_trip(sigma, X, G)
            yield Record("adjunction", spec, name, ok, lhs, rhs)


# -- naturality -----------------------------------------------------------------

def naturality_records(simplices: Iterable[AssSimplex], categories: list[tuple[str, object]],
                       max_dim: int, seed: int = 0, samples: int = 1, exhaustive_limit: int = 0,
                       rotate: bool = True) -> Iterator[Record]:
    """Naturality squares for every face and degeneracy within ``max_dim``.

    Per operator: the universal lift, then per category either every lift
    (when there are at most ``exhaustive_limit``) or ``samples`` random ones.
    """
    counters = [LiftCounter(X) for _, X in categories]
    for idx, sigma in enumerate(simplices):
        spec = delta.format_spec(sigma)
        ops = [(a, t) for a, t in delta.generating_operators(sigma, max_dim) if t.dim <= max_dim]
        if not ops:
            continue
        for alpha, tau in ops:
            try:
                ok = universal_naturality_holds(alpha, sigma, tau)
            except NoPath:
                ok = False
            yield Record(f"naturality-universal[{_op_name(alpha)}]", spec, "F(σ)", ok, 1, int(ok))
        for c, ((name, X), counter) in enumerate(zip(categories, counters)):
            total = counter.count(sigma)
            if total <= exhaustive_limit:
                lifts = None
            elif not rotate or idx % len(categories) == c:
                rng = _rng(seed, spec, name)
                lifts = []
                for _ in range(samples):
                    G = sample_functor(sigma, X, rng)
                    if G is not None:
                        lifts.append(backward(sigma, G, X))
            else:
                continue
            for alpha, tau in ops:
                res = verify_naturality(alpha, sigma, X, lifts=lifts)
                yield Record(f"naturality[{_op_name(alpha)}]", spec, name, res.ok, res.checked,
                             res.checked if res.ok else res.checked - 1)


# -- F, simplicial identities ---------------------------------------------------------

def well_formedness_records(simplices: Iterable[AssSimplex]) -> Iterator[Record]:
    """F(sigma) is a simply-laced poset with the right objects; 1-simplices into [1] are Delta^1's."""
    for sigma in simplices:
        spec = delta.format_spec(sigma)
        try:
            cat = f_of_simplex(sigma)
        except InvariantViolation:
            yield Record("f-poset", spec, "-", False, 0, 0)
            continue
        want = sum(2 * n for n in sigma.vertices)
        simply_laced = len(set(cat.edges)) == len(cat.edges)
        yield Record("f-poset", spec, "-", simply_laced and len(cat.objects) == want,
                     len(cat.objects), want)
        if sigma.dim == 1 and sigma.vertices[1] == 1:
            yield Record("f-generating", spec, "-", *_generating_shape(sigma, cat))


def _generating_shape(sigma, cat) -> tuple:
    """Components of F([m] -> [1]): m + 1 copies of Delta^1 when active.

    A non-active map leaves the unused top segments as isolated objects, so
    the count is then ``m_0 + 1`` copies of Delta^1 plus two points for each
    unused segment, where ``[m_0]`` is the pulled-back segment.
    """
    f = sigma.edges[0]
    comps = cat.components()
    arrows = [c for c in comps if len(c) == 2]
    points = [c for c in comps if len(c) == 1]
    lo, hi = f.dual
    used = hi - lo
    want_arrows, want_points = used + 1, 2 * (f.src - used)
    ok = len(arrows) == want_arrows and len(points) == want_points and \
        len(arrows) + len(points) == len(comps)
    return ok, len(arrows), want_arrows


def identities_records(max_dim: int, max_vertex: int, simplices=None) -> Iterator[Record]:
    """Simplicial identities in Delta_Ass and functoriality of F along them."""
    simplices = delta.enumerate_simplices(max_dim, max_vertex) if simplices is None else simplices
    for sigma in simplices:
        spec = delta.format_spec(sigma)
        checked, passed = _delta_identities(sigma)
        yield Record("simplicial-identities", spec, "-", checked == passed, checked, passed)
        rep = verify_simplicial_functoriality(max_dim, max_vertex, "generating", simplices=[sigma])
        yield Record("f-functoriality", spec, "-", rep.ok, rep.pairs, rep.pairs - len(rep.failures))


def _delta_identities(sigma) -> tuple[int, int]:
    k = sigma.dim
    face, degen = delta.simplex_face, delta.simplex_degeneracy
    checked = passed = 0

    def check(a, b):
        nonlocal checked, passed
        checked += 1
        passed += a == b

    for j in range(k + 1):
        for i in range(j):
            if k >= 2:
                # d_i d_j = d_{j-1} d_i
                check(face(face(sigma, j), i), face(face(sigma, i), j - 1))
    for i in range(k + 1):
        for j in range(k + 2):
            s = degen(sigma, i)
            if j < i:
                if k >= 1:
                    check(face(s, j), degen(face(sigma, j), i - 1))
            elif j in (i, i + 1):
                check(face(s, j), sigma)
            else:
                if k >= 1:
                    check(face(s, j), degen(face(sigma, j - 1), i))
        for j in range(i + 1):
            # s_j s_i = s_{i+1} s_j for j <= i
            check(degen(degen(sigma, i), j), degen(degen(sigma, j), i + 1))
    return checked, passed


# -- reversal, oracles ------------------------------------------------------------------

def reversal_records(categories: list[tuple[str, object]], max_m: int, max_n: int) -> Iterator[Record]:
    for name, X in categories:
        rep = reverse_operad_check(X, max_m, max_n)
        bad = len(rep.failures)
        yield Record("reversal-polymorphisms", f"m<={max_m}", name, rep.ok,
                     rep.polymorphism_sets, rep.polymorphism_sets - bad)
        yield Record("reversal-composition", f"m,n<={max(max_m, max_n)}", name, rep.ok,
                     rep.compositions, rep.compositions - bad)


def oracle_count_records(pairs: Iterable[tuple[str, object, str, object]]) -> Iterator[Record]:
    """DP functor counts against naive enumeration, for ``(name, C, name, D)`` pairs."""
    for cname, C, dname, D in pairs:
        lhs, rhs = count_functors(C, D), len(naive_functors(C, D))
        yield Record("functor-count", cname, dname, lhs == rhs, lhs, rhs)


def _restriction_oracle_ok(alpha, i, sigma, tau, L, X) -> bool:
    got = restrict_lift(X, alpha, L)
    e = L.edge_morphisms
    by_blocks = e[:i - 1] + (compose_operad_partial(X, e[i - 1], e[i]),) + e[i + 1:]
    G = compose_functors(forward(sigma, L, X), f_on_operator(alpha, sigma, tau))
    return got.edge_morphisms == by_blocks and got == backward(tau, G, X) and \
        got.vertex_objects == L.vertex_objects[:i] + L.vertex_objects[i + 1:]


def restriction_oracle_records(simplices: Iterable[AssSimplex], categories: list[tuple[str, object]],
                               seed: int = 0, samples: int = 32,
                               exhaustive_limit: int = 4096) -> Iterator[Record]:
    """``restrict_lift`` along inner faces against two independent routes.

    The first composes the two edges by block-by-block substitution
    (:func:`compose_operad_partial`); the second restricts the labelled
    functor along ``F(alpha)`` and reads the lift back. The universal lift is
    always checked; per category every lift is checked up to
    ``exhaustive_limit`` lifts and ``samples`` seeded ones beyond that.
    """
    counters = [LiftCounter(X) for _, X in categories]
    for sigma in simplices:
        spec = delta.format_spec(sigma)
        k = sigma.dim
        for i in range(1, k):
            alpha = delta.face_operator(k, i)
            tau = delta.restrict_simplex(sigma, alpha)
            cat = f_of_simplex(sigma)
            ok = _restriction_oracle_ok(alpha, i, sigma, tau, universal_lift(sigma), cat)
            yield Record(f"restrict-oracle-universal[d{i}]", spec, "F(σ)", ok, 1, int(ok))
            for (name, X), counter in zip(categories, counters):
                if counter.count(sigma) <= exhaustive_limit:
                    lifts = iter_lifts(sigma, X)
                else:
                    rng = _rng(seed, spec, name, i)
                    lifts = (backward(sigma, sample_functor(sigma, X, rng), X) for _ in range(samples))
                checked = passed = 0
                for L in lifts:
                    checked += 1
                    passed += _restriction_oracle_ok(alpha, i, sigma, tau, L, X)
                yield Record(f"restrict-oracle[d{i}]", spec, name, checked == passed, checked, passed)
