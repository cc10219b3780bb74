"""The planar operad O_X of a finite category X, presented over Ass.

An object over ``[n]`` is an n-tuple of pairs ``(x, y)`` of objects of X. A
polymorphism ``(u_1, ..., u_m; v)`` over an active ``[m] -> [1]`` is a chain of
X-arrows

    v.x -> u_1.x,  u_i.y -> u_{i+1}.x,  u_m.y -> v.y

(one arrow ``v.x -> v.y`` when ``m = 0``). A morphism over ``f: [m] -> [n]``
is one such chain per unit segment of ``[n]``, taken over the inputs lying in
the pulled-back segment; inputs outside every such segment are dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from . import delta
from .delta import AssMorphism, AssSimplex, SimplexOperator
from .fincat import opposite


class NotComposable(ValueError):
    pass


class OperadObject(NamedTuple):
    pairs: tuple

    @property
    def over(self) -> int:
        return len(self.pairs)


class PolyMorphism(NamedTuple):
    over: AssMorphism
    src: tuple  # pairs in the pulled-back segment
    dst: tuple  # a single pair
    chain: tuple


class OperadMorphism(NamedTuple):
    over: AssMorphism
    src: OperadObject
    dst: OperadObject
    family: tuple  # one chain per unit segment of the target

    @property
    def polymorphisms(self) -> list[PolyMorphism]:
        out = []
        for i, (a, b) in enumerate(zip(self.over.dual, self.over.dual[1:])):
            piece = AssMorphism(b - a, 1, (0, b - a))
            out.append(PolyMorphism(piece, self.src.pairs[a:b], self.dst.pairs[i], self.family[i]))
        return out


class Lift(NamedTuple):
    simplex: AssSimplex
    vertex_objects: tuple
    edge_morphisms: tuple


def operad_objects(X, n: int) -> list[OperadObject]:
    pairs = [(a, b) for a in X.objects for b in X.objects]
    return [OperadObject(p) for p in itertools.product(pairs, repeat=n)]


def chain_types(f: AssMorphism, u: tuple, v: tuple) -> list[list[tuple]]:
    """Required ``(src, dst)`` of every chain entry, per target segment."""
    out = []
    for i, (a, b) in enumerate(zip(f.dual, f.dual[1:])):
        vx, vy = v[i]
        if a == b:
            out.append([(vx, vy)])
            continue
        types = [(vx, u[a][0])]
        types.extend((u[s - 1][1], u[s][0]) for s in range(a + 1, b))
        types.append((u[b - 1][1], vy))
        out.append(types)
    return out


def _chains(X, types: list[tuple]) -> list[tuple]:
    return list(itertools.product(*(X.hom(s, t) for s, t in types)))


def polymorphism_set(X, f: AssMorphism, u, v) -> list[PolyMorphism]:
    """``O_X(u; v)`` over ``f: [m] -> [1]``; ``v`` is a pair or an object over [1]."""
    if f.dst != 1:
        raise ValueError(f"polymorphisms live over maps into [1], got {f}")
    u = u.pairs if isinstance(u, OperadObject) else tuple(u)
    v = v.pairs[0] if isinstance(v, OperadObject) else tuple(v)
    (types,) = chain_types(f, u, (v,))
    a, b = f.dual
    piece = AssMorphism(b - a, 1, (0, b - a))
    return [PolyMorphism(piece, u[a:b], v, c) for c in _chains(X, types)]


def operad_morphisms(X, f: AssMorphism, u: OperadObject, w: OperadObject) -> list[OperadMorphism]:
    """All morphisms ``u -> w`` over ``f``: a product over target segments."""
    per_segment = [_chains(X, t) for t in chain_types(f, u.pairs, w.pairs)]
    return [OperadMorphism(f, u, w, fam) for fam in itertools.product(*per_segment)]


def identity_morphism(X, u: OperadObject) -> OperadMorphism:
    fam = tuple((X.identity(x), X.identity(y)) for x, y in u.pairs)
    return OperadMorphism(delta.identity(u.over), u, u, fam)


def is_valid_morphism(X, phi: OperadMorphism) -> bool:
    types = chain_types(phi.over, phi.src.pairs, phi.dst.pairs)
    if len(types) != len(phi.family):
        return False
    for ts, chain in zip(types, phi.family):
        if len(ts) != len(chain):
            return False
        for (s, t), c in zip(ts, chain):
            if X.src(c) != s or X.dst(c) != t:
                return False
    return True


def compose_operad(X, phi: OperadMorphism, psi: OperadMorphism) -> OperadMorphism:
    """``psi o phi`` for ``phi`` over ``f: [m] -> [n]`` and ``psi`` over ``g: [n] -> [p]``.

    For each target segment of ``g``, the chains of ``phi`` for the segments in
    its preimage are spliced into the chain of ``psi``; arrows meeting at the
    erased intermediate objects are composed in X. A block with empty preimage
    contributes its single arrow to the surrounding composite.
    """
    if phi.dst != psi.src:
        raise NotComposable("target object of the first morphism is not the source of the second")
    g = psi.over
    xc = X.compose
    family = []
    for k, (lo, hi) in enumerate(zip(g.dual, g.dual[1:])):
        outer = psi.family[k]
        acc = outer[0]
        chain = []
        for t, i in enumerate(range(lo, hi)):
            inner = phi.family[i]
            acc = xc(inner[0], acc)
            if len(inner) > 1:
                # the inner chain closes this group and opens a new one
                chain.append(acc)
                chain.extend(inner[1:-1])
                acc = inner[-1]
            acc = xc(outer[t + 1], acc)
        chain.append(acc)
        family.append(tuple(chain))
    return OperadMorphism(delta.compose(g, phi.over), phi.src, psi.dst, tuple(family))


def compose_operad_partial(X, phi: OperadMorphism, psi: OperadMorphism) -> OperadMorphism:
    """Same composite as :func:`compose_operad`, built by one-block substitutions.

    Blocks are substituted right to left, each fold composing X-arrows with the
    opposite bracketing; used as an independent check of the splice formula.
    """
    if phi.dst != psi.src:
        raise NotComposable("target object of the first morphism is not the source of the second")
    g = psi.over
    family = []
    for k, (lo, hi) in enumerate(zip(g.dual, g.dual[1:])):
        chain = list(psi.family[k])
        for t in reversed(range(hi - lo)):
            inner = phi.family[lo + t]
            # entry t feeds the block, entry t+1 leaves it
            if len(inner) == 1:
                merged = [X.compose(chain[t + 1], X.compose(inner[0], chain[t]))]
            else:
                merged = [X.compose(inner[0], chain[t])]
                merged.extend(inner[1:-1])
                merged.append(X.compose(chain[t + 1], inner[-1]))
            chain[t:t + 2] = merged
        family.append(tuple(chain))
    return OperadMorphism(delta.compose(g, phi.over), phi.src, psi.dst, tuple(family))


# -- lifts ------------------------------------------------------------------

def lifts(sigma: AssSimplex, X) -> list[Lift]:
    return list(iter_lifts(sigma, X))


def iter_lifts(sigma: AssSimplex, X) -> Iterator[Lift]:
    """Lifts of ``sigma``: vertex objects first, then morphisms edge by edge."""
    objs = {n: operad_objects(X, n) for n in set(sigma.vertices)}

    def grow(prefix_objs, prefix_mors):
        j = len(prefix_objs)
        if j == len(sigma.vertices):
            yield Lift(sigma, tuple(prefix_objs), tuple(prefix_mors))
            return
        for w in objs[sigma.vertices[j]]:
            if j == 0:
                yield from grow([w], [])
                continue
            for phi in operad_morphisms(X, sigma.edges[j - 1], prefix_objs[-1], w):
                yield from grow(prefix_objs + [w], prefix_mors + [phi])

    yield from grow([], [])


def is_valid_lift(X, L: Lift) -> bool:
    sigma = L.simplex
    if len(L.vertex_objects) != len(sigma.vertices) or len(L.edge_morphisms) != len(sigma.edges):
        return False
    for u, n in zip(L.vertex_objects, sigma.vertices):
        if u.over != n or any(x not in X.objects or y not in X.objects for x, y in u.pairs):
            return False
    for j, (phi, e) in enumerate(zip(L.edge_morphisms, sigma.edges)):
        if phi.over != e or phi.src != L.vertex_objects[j] or phi.dst != L.vertex_objects[j + 1]:
            return False
        if not is_valid_morphism(X, phi):
            return False
    return True


def restrict_lift(X, alpha: SimplexOperator, L: Lift) -> Lift:
    """Pull ``L`` back along ``alpha``; each new edge is a composite of old ones."""
    tau = delta.restrict_simplex(L.simplex, alpha)
    a = alpha.map
    objs = tuple(L.vertex_objects[i] for i in a)
    mors = []
    for t in range(len(a) - 1):
        path = L.edge_morphisms[a[t]:a[t + 1]]
        if not path:
            mors.append(identity_morphism(X, L.vertex_objects[a[t]]))
            continue
        acc = path[0]
        for phi in path[1:]:
            acc = compose_operad(X, acc, phi)
        mors.append(acc)
    return Lift(tau, objs, tuple(mors))


# -- counting ---------------------------------------------------------------

@dataclass
class LiftCounter:
    """Counts lifts through transfer matrices of polymorphism-set sizes.

    ``T_e[u, w] = |O_X(u, w)|`` over ``e``; the number of lifts of a simplex is
    ``1^T T_1 ... T_k 1``.
    """

    X: object
    _hom: np.ndarray = field(init=False, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)
    _rows: dict = field(default_factory=dict, repr=False)
    _sums: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        objs = list(self.X.objects)
        self._hom = np.array([[len(self.X.hom(a, b)) for b in objs] for a in objs], dtype=np.int64)

    def transfer(self, f: AssMorphism) -> np.ndarray:
        if f in self._cache:
            return self._cache[f]
        k = len(self.X.objects)
        m, n = f.src, f.dst
        # axes: u_0x, u_0y, ..., u_{m-1}y, v_0x, ..., v_{n-1}y
        naxes = 2 * (m + n)
        t = np.ones((k,) * naxes, dtype=np.int64) if naxes else np.ones((), dtype=np.int64)

        def factor(ax_a, ax_b):
            shape = [1] * naxes
            shape[ax_a] = k
            shape[ax_b] = k
            arr = self._hom if ax_a < ax_b else self._hom.T
            return arr.reshape(shape)

        ux = lambda s: 2 * s
        uy = lambda s: 2 * s + 1
        vx = lambda i: 2 * m + 2 * i
        vy = lambda i: 2 * m + 2 * i + 1
        for i, (a, b) in enumerate(zip(f.dual, f.dual[1:])):
            if a == b:
                t = t * factor(vx(i), vy(i))
                continue
            t = t * factor(vx(i), ux(a))
            for s in range(a + 1, b):
                t = t * factor(uy(s - 1), ux(s))
            t = t * factor(uy(b - 1), vy(i))
        mat = t.reshape(k ** (2 * m), k ** (2 * n))
        self._cache[f] = mat
        return mat

    def count(self, sigma: AssSimplex) -> int:
        if not sigma.edges:
            return len(self.X.objects) ** (2 * sigma.vertices[0])
        last = sigma.edges[-1]
        if last not in self._sums:
            self._sums[last] = self.transfer(last).sum(axis=1)
        if len(sigma.edges) == 1:
            return int(self._sums[last].sum())
        return int(self.row(sigma.edges[:-1]) @ self._sums[last])

    def row(self, edges: tuple) -> np.ndarray:
        """``1^T T_1 ... T_k`` for a chain of edges, memoised on prefixes."""
        if edges in self._rows:
            return self._rows[edges]
        if len(edges) == 1:
            out = self.transfer(edges[0]).sum(axis=0)
        else:
            out = self.row(edges[:-1]) @ self.transfer(edges[-1])
        if len(edges) < 3:
            self._rows[edges] = out
        return out


def count_lifts(sigma: AssSimplex, X) -> int:
    return LiftCounter(X).count(sigma)


# -- reversal ---------------------------------------------------------------

def reverse_object(u: OperadObject) -> OperadObject:
    return OperadObject(tuple((y, x) for x, y in reversed(u.pairs)))


def reverse_morphism(phi: OperadMorphism) -> OperadMorphism:
    """Send a morphism of ``O_{X^op}`` to the matching morphism of ``O_X``.

    Segments and chains are read backwards and every X^op arrow is read as the
    X arrow with the same name.
    """
    return OperadMorphism(delta.reverse(phi.over), reverse_object(phi.src), reverse_object(phi.dst),
                          tuple(tuple(reversed(c)) for c in reversed(phi.family)))


@dataclass
class ReversalReport:
    polymorphism_sets: int = 0
    compositions: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def reverse_operad_check(X, max_m: int, max_n: int, Xop=None) -> ReversalReport:
    """Compare ``O_{X^op}`` with the reversed ``O_X``.

    Polymorphism sets over every ``f: [m] -> [1]`` with ``m <= max_m`` must
    match under the relabelling; composition must commute with reversal for
    every composable pair over ``[m] -> [n] -> [p]`` with all three objects
    at most ``max(max_m, max_n)`` and ``n, p <= max_n``.
    """
    Xop = opposite(X) if Xop is None else Xop
    rep = ReversalReport()
    for m in range(max_m + 1):
        for f in delta.morphisms(m, 1):
            for u in operad_objects(X, m):
                for v in operad_objects(X, 1):
                    left = {tuple(reversed(p.chain)) for p in polymorphism_set(Xop, f, u, v)}
                    right = {p.chain for p in polymorphism_set(X, delta.reverse(f),
                                                               reverse_object(u), reverse_object(v))}
                    rep.polymorphism_sets += 1
                    if left != right:
                        rep.failures.append(("polymorphisms", str(f), u.pairs, v.pairs))
    top = max(max_m, max_n)
    for m in range(top + 1):
        for n in range(max_n + 1):
            for p in range(max_n + 1):
                _check_compositions(X, Xop, m, n, p, rep)
    return rep


def _reversed_family(phi: OperadMorphism) -> tuple:
    return tuple(tuple(reversed(c)) for c in reversed(phi.family))


def _check_compositions(X, Xop, m, n, p, rep):
    objs_m, objs_n, objs_p = (operad_objects(Xop, k) for k in (m, n, p))
    for f in delta.morphisms(m, n):
        for g in delta.morphisms(n, p):
            # over-maps and endpoints agree once per (f, g); families per pair
            if delta.reverse(delta.compose(g, f)) != delta.compose(delta.reverse(g), delta.reverse(f)):
                rep.failures.append(("over", str(f), str(g)))
                continue
            for w in objs_n:
                firsts = [phi for u in objs_m for phi in operad_morphisms(Xop, f, u, w)]
                if not firsts:
                    continue
                seconds = [(psi, reverse_morphism(psi))
                           for v in objs_p for psi in operad_morphisms(Xop, g, w, v)]
                rep.compositions += len(firsts) * len(seconds)
                for phi in firsts:
                    rphi = reverse_morphism(phi)
                    for psi, rpsi in seconds:
                        a = _reversed_family(compose_operad(Xop, phi, psi))
                        if a != compose_operad(X, rphi, rpsi).family:
                            rep.failures.append(("composition", str(f), str(g), phi, psi))
