"""Natural automorphisms of F on bounded sets of simplices.

A natural automorphism is a family ``phi_sigma`` of automorphisms of the
categories ``F(sigma)`` commuting with every ``F(alpha)``. The vertex
inclusions of a simplex are jointly surjective on objects, so each
``phi_sigma`` acts vertex by vertex through the components at the 0-simplices
``[n]``: a family is a choice of permutation of the ``2n`` objects of ``F([n])``
for each ``n``. Constraints are propagated from 1-simplices first and every
surviving family is then checked on all simplices within the bounds.

``directed=True`` asks for automorphisms of the categories themselves.
``directed=False`` only asks that generating arrows go to generating arrows
up to orientation, which is what survives passing to groupoid completions.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from . import delta
from .adjunction import forward
from .delta import AssMorphism, AssSimplex
from .fincat import FinFunctor, enumerate_functors
from .fposet import _offsets, edge_index_pairs, f_of_simplex
from .operad import iter_lifts


# -- automorphisms of a single F(sigma) -------------------------------------

@dataclass
class AutGroup:
    sigma: AssSimplex
    order: int
    _objects: tuple = field(repr=False, default=())
    _edges: frozenset = field(repr=False, default=frozenset())

    def elements(self):
        """Every automorphism as a tuple of object images, by backtracking."""
        yield from _graph_automorphisms(len(self._objects), self._edges, directed=True)

    def as_functors(self):
        cat = f_of_simplex(self.sigma)
        for perm in self.elements():
            om = {cat.objects[i]: cat.objects[perm[i]] for i in range(len(perm))}
            mm = {(s, t): (om[s], om[t]) for s, t in cat.edges}
            yield FinFunctor(cat, cat, om, mm)


def category_automorphisms(sigma: AssSimplex) -> AutGroup:
    """Self-isomorphisms of ``F(sigma)``.

    F(sigma) is a disjoint union of chains, so the order is a product of
    factorials over equal-length chains; :meth:`AutGroup.elements` lists them
    by an independent search.
    """
    cat = f_of_simplex(sigma)
    edges = frozenset(edge_index_pairs(sigma))
    if cat.chains is not None:
        order = math.prod(math.factorial(c) for c in Counter(map(len, cat.chains)).values())
    else:
        order = sum(1 for _ in _graph_automorphisms(len(cat.objects), edges, True))
    return AutGroup(sigma, order, cat.objects, edges)


def _graph_automorphisms(n: int, edges, directed: bool):
    edges = _orient(edges, directed)
    out_nb = [set() for _ in range(n)]
    in_nb = [set() for _ in range(n)]
    for a, b in edges:
        out_nb[a].add(b)
        in_nb[b].add(a)
    deg = [(len(out_nb[i]), len(in_nb[i])) for i in range(n)]
    image = [None] * n
    used = [False] * n

    def extend(i):
        if i == n:
            yield tuple(image)
            return
        for j in range(n):
            if used[j] or deg[j] != deg[i]:
                continue
            ok = all((image[k], j) in edges for k in in_nb[i] if k < i) and \
                all((j, image[k]) in edges for k in out_nb[i] if k < i)
            if not ok:
                continue
            image[i], used[j] = j, True
            yield from extend(i + 1)
            image[i], used[j] = None, False

    yield from extend(0)


def _orient(edges, directed: bool) -> frozenset:
    edges = frozenset(edges)
    if directed:
        return edges
    return edges | frozenset((b, a) for a, b in edges)


# -- natural automorphisms ----------------------------------------------------

@dataclass
class AutReport:
    bound: tuple
    directed: bool
    orders: dict = field(default_factory=dict)
    count: int = 0
    families: list = field(default_factory=list)
    stages: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    survivors_at: dict = field(default_factory=dict)
    pairs_preserved_before_final: bool = True

    def lines(self) -> list[str]:
        out = [f"AUT σ={delta.format_spec(s)} order={n}" for s, n in self.orders.items()]
        for name, left in self.stages:
            out.append(f"STAGE bound=({self.bound[0]},{self.bound[1]}) {name} candidates={left}")
        out.append(f"NATURAL bound=({self.bound[0]},{self.bound[1]}) count={self.count}")
        return out


def _vertexwise(family: dict, vertices: tuple) -> tuple:
    off = _offsets(vertices)
    return tuple(off[v] + p for v, n in enumerate(vertices) for p in family[n])


def _respects(family: dict, sigma: AssSimplex, directed: bool) -> bool:
    edges = _oriented_edges(sigma, directed)
    perm = _vertexwise(family, sigma.vertices)
    return all((perm[a], perm[b]) in edges for a, b in edges)


@lru_cache(maxsize=65536)
def _oriented_edges(sigma: AssSimplex, directed: bool) -> frozenset:
    return _orient(edge_index_pairs(sigma), directed)


def _preserves_pairs(perm: tuple) -> bool:
    return all(perm[2 * s] // 2 == s and perm[2 * s + 1] // 2 == s for s in range(len(perm) // 2))


def _stage_of(f: AssMorphism) -> int:
    # inert segment diagrams, then the active [2] -> [1], then everything else
    if f.dst == 1 and f.is_inert:
        return 0
    if f.src == 2 and f.dst == 1 and f.dual == (0, 2):
        return 1
    return 2


def natural_automorphisms(max_dim: int, max_vertex: int, directed: bool = True,
                          orders: bool = True) -> AutReport:
    """All natural automorphisms of F restricted to ``enumerate_simplices(max_dim, max_vertex)``."""
    rep = AutReport((max_dim, max_vertex), directed)
    simplices = delta.enumerate_simplices(max_dim, max_vertex)
    if orders:
        rep.orders = {s: category_automorphisms(s).order for s in simplices}
    domains = {n: list(itertools.permutations(range(2 * n))) for n in range(max_vertex + 1)}
    rep.stages.append(("seed", math.prod(len(d) for d in domains.values())))

    one = [s for s in simplices if s.dim == 1]
    groups = [[s for s in one if _stage_of(s.edges[0]) == k] for k in range(3)]
    names = ("inert-segments", "active-[2]->[1]", "other-1-simplices")
    for k, (name, group) in enumerate(zip(names, groups)):
        _propagate(domains, group, directed, rep)
        rep.stages.append((name, math.prod(len(d) for d in domains.values())))
        if k == 0 and max_dim >= 1:
            # before the active constraint every survivor keeps each {x, y} pair
            rep.pairs_preserved_before_final = all(
                _preserves_pairs(p) for n in range(1, max_vertex + 1) for p in domains[n])

    survivors = []
    for choice in itertools.product(*(domains[n] for n in range(max_vertex + 1))):
        family = dict(enumerate(choice))
        if all(_respects(family, s, directed) for s in simplices if s.dim >= 1):
            survivors.append(family)
    rep.families = survivors
    rep.count = len(survivors)
    rep.stages.append(("all-simplices", rep.count))
    if orders:
        for s in simplices:
            rep.survivors_at[s] = len({_vertexwise(f, s.vertices) for f in survivors})
    return rep


def _propagate(domains: dict, constraints, directed: bool, rep: AutReport):
    """Arc consistency on the binary constraints from 1-simplices."""
    changed = True
    while changed:
        changed = False
        for s in sorted(constraints, key=lambda s: len(domains[s.vertices[0]]) * len(domains[s.vertices[1]])):
            m, n = s.vertices
            edges = _oriented_edges(s, directed)
            ok = set()
            for pm in domains[m]:
                for pn in domains[n]:
                    if m == n and pm != pn:
                        continue
                    if all((_vp(pm, pn, a, m), _vp(pm, pn, b, m)) in edges for a, b in edges):
                        ok.add((pm, pn))
            keep_m = {pm for pm, _ in ok}
            keep_n = {pn for _, pn in ok}
            if len(keep_m) < len(domains[m]) or len(keep_n) < len(domains[n]):
                rep.witnesses.append(delta.format_spec(s))
                domains[m] = [p for p in domains[m] if p in keep_m]
                domains[n] = [p for p in domains[n] if p in keep_n]
                changed = True


def _vp(pm: tuple, pn: tuple, i: int, m: int) -> int:
    # object i of a 1-simplex [m] -> [n]; vertex 0 comes first
    return pm[i] if i < 2 * m else 2 * m + pn[i - 2 * m]


# -- the swapped vertex identification ------------------------------------------

def _swap_index(i: int) -> int:
    return i ^ 1


def _swapped_map(cat) -> dict:
    return {o: cat.objects[_swap_index(i)] for i, o in enumerate(cat.objects)}


def swap_is_visible(X) -> bool:
    """Whether X has a non-identity arrow between distinct objects."""
    return any(X.src(f) != X.dst(f) for f in X.generators())


def swap_candidates(X, sigma: AssSimplex | None = None) -> dict:
    """For each generating arrow, the formulas for its image that type-check on X.

    A formula is uniform in the lift: either an identity or the label of an
    arrow of F(sigma). It type-checks when, for every lift, it runs between
    the swapped images of the arrow's endpoints.
    """
    sigma = delta.simplex(delta.identity(1)) if sigma is None else sigma
    cat = f_of_simplex(sigma)
    sw = _swapped_map(cat)
    functors = [forward(sigma, L, X) for L in iter_lifts(sigma, X)]
    out = {}
    for s, t in cat.edges:
        want = (sw[s], sw[t])
        opts = []
        if all(G.object_map[want[0]] == G.object_map[want[1]] for G in functors):
            opts.append(("id",))
        for p, q in cat.morphisms:
            if all(G.object_map[p] == G.object_map[want[0]] and G.object_map[q] == G.object_map[want[1]]
                   for G in functors):
                opts.append(("label", p, q))
        out[s, t] = opts
    return out


def _evaluate(X, G: FinFunctor, formula, src):
    if formula[0] == "id":
        return X.identity(G.object_map[src])
    return G.apply((formula[1], formula[2]))


def swap_extension_fails(X, sigma: AssSimplex | None = None) -> bool:
    """True iff the swapped vertex identification admits no compatible extension.

    Every assignment of type-correct formulas to the arrows of ``F(id:[1])``
    defines a map from lifts to functors whose objects are swapped; the
    search asks whether any such map is a bijection onto those functors.
    """
    sigma = delta.simplex(delta.identity(1)) if sigma is None else sigma
    cat = f_of_simplex(sigma)
    sw = _swapped_map(cat)
    lifts = list(iter_lifts(sigma, X))
    labels = [forward(sigma, L, X) for L in lifts]
    cands = swap_candidates(X, sigma)
    edges = list(cat.edges)
    targets = {_key(G) for G in enumerate_functors(cat, X)}
    for choice in itertools.product(*(cands[e] for e in edges)):
        images = set()
        for G in labels:
            om = {o: G.object_map[sw[o]] for o in cat.objects}
            mm = {e: _evaluate(X, G, c, sw[e[0]]) for e, c in zip(edges, choice)}
            H = FinFunctor(cat, X, om, mm)
            if not H.is_valid():
                break
            images.add(_key(H))
        else:
            if len(images) == len(lifts) and images == targets:
                return False
    return True


def _key(G: FinFunctor):
    return tuple(sorted(G.object_map.items())), tuple(sorted(G.morphism_map.items()))


def fiberwise_swap_extension_exists(X, sigma: AssSimplex | None = None) -> bool:
    """Whether bijections exist fibre by fibre over the vertex objects.

    Drops the requirement that the extension be given uniformly in the lift;
    then only the sizes of matching fibres matter.
    """
    sigma = delta.simplex(delta.identity(1)) if sigma is None else sigma
    cat = f_of_simplex(sigma)
    sw = _swapped_map(cat)
    fibre_l, fibre_r = Counter(), Counter()
    verts = [o for o in cat.objects]
    for L in iter_lifts(sigma, X):
        G = forward(sigma, L, X)
        fibre_l[tuple(G.object_map[sw[o]] for o in verts)] += 1
    for G in enumerate_functors(cat, X):
        fibre_r[tuple(G.object_map[o] for o in verts)] += 1
    return fibre_l == fibre_r
