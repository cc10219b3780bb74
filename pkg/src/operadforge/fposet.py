"""The functor F from simplices of Ass to finite posets.

Objects of ``F(sigma)`` are triples ``(vertex, segment, tag)``. Each edge
``e_j: sigma_{j-1} -> sigma_j`` contributes, for every unit segment of its
target, the zig-zag of arrows read off the chain of a polymorphism::

    bottom.x -> top.x_1,  top.y_i -> top.x_{i+1},  top.y_m -> bottom.y

(a lone ``bottom.x -> bottom.y`` when the segment has empty preimage). The
category ``F(sigma)`` is the free category on the union of these graphs over
the consecutive edges of ``sigma``; it is always a disjoint union of chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple

from .delta import (AssMorphism, AssSimplex, ConvexSegment, SimplexOperator, format_spec,
                    generating_operators, iter_simplices, monotone_maps,
                    restrict_simplex, segments)
from .fincat import FinCategory, FinFunctor, OrientedGraph, compose_functors, free_category

TAGS = ("x", "y")


class InvariantViolation(AssertionError):
    """An F(sigma) failed a structural invariant; always an implementation bug."""


class NoPath(InvariantViolation):
    """An operator sent an arrow to a pair of objects with no morphism between them."""


class BadTarget(ValueError):
    pass


class FObject(NamedTuple):
    vertex: int
    segment: ConvexSegment
    tag: str

    def __str__(self):
        return f"v{self.vertex}.s{self.segment.lo}{self.segment.hi}.{self.tag}"


@lru_cache(maxsize=None)
def _obj(vertex: int, lo: int, tag: str) -> FObject:
    return FObject(vertex, ConvexSegment(lo, lo + 1), tag)


def f_zero(n: int, vertex: int = 0) -> tuple:
    """Objects ``{[1] in [n]} x {x, y}`` sitting over ``vertex``."""
    return tuple(FObject(vertex, s, t) for s in segments(n) for t in TAGS)


@lru_cache(maxsize=None)
def edge_slots(f: AssMorphism, top: int = 0, bottom: int = 1) -> tuple:
    """Arrows contributed by ``f``, as ``((segment, entry), src, dst)``.

    ``entry`` runs along the chain of the polymorphism over that target
    segment, so the order here is the labelling used by the adjunction.
    """
    out = []
    for i, (a, b) in enumerate(zip(f.dual, f.dual[1:])):
        bx, by = _obj(bottom, i, "x"), _obj(bottom, i, "y")
        if a == b:
            out.append(((i, 0), bx, by))
            continue
        out.append(((i, 0), bx, _obj(top, a, "x")))
        for k in range(1, b - a):
            out.append(((i, k), _obj(top, a + k - 1, "y"), _obj(top, a + k, "x")))
        out.append(((i, b - a), _obj(top, b - 1, "y"), by))
    return tuple(out)


def _graph(vertices, arrows) -> OrientedGraph:
    return OrientedGraph(tuple(vertices), tuple((f"{s}->{t}", s, t) for s, t in arrows))


def f_graph_generating(f: AssMorphism) -> OrientedGraph:
    if f.dst != 1:
        raise BadTarget(f"generating graphs need target [1], got {f}")
    return f_graph_edge(f)


def f_graph_edge(f: AssMorphism) -> OrientedGraph:
    """Disjoint union of the generating graphs of the pieces of ``f``."""
    return _graph(f_zero(f.src, 0) + f_zero(f.dst, 1), ((s, t) for _, s, t in edge_slots(f)))


def simplex_slots(sigma: AssSimplex) -> tuple:
    """``((edge, segment, entry), src, dst)`` for every generating arrow of F(sigma)."""
    return tuple(((j, i, k), s, t)
                 for j, e in enumerate(sigma.edges, start=1)
                 for (i, k), s, t in edge_slots(e, j - 1, j))


class FCategory:
    """``F(sigma)``: a finite poset on FObjects presented by its generating arrows.

    Morphisms are the pairs ``(a, b)`` with ``a <= b``; composition is
    ``(b, c) o (a, b) = (a, c)``.
    """

    def __init__(self, sigma: AssSimplex):
        self.simplex = sigma
        objs = []
        for v, n in enumerate(sigma.vertices):
            objs.extend(_obj(v, s, t) for s in range(n) for t in TAGS)
        # vertex-major, segment, then x before y: already sorted
        self.objects = tuple(objs)
        self.vertex_pairs = tuple(tuple((_obj(v, s, "x"), _obj(v, s, "y")) for s in range(n))
                                  for v, n in enumerate(sigma.vertices))
        self.slots = simplex_slots(sigma)
        pairs = sorted(_slot_positions(sigma.vertices, self.slots))
        self.edges = tuple((objs[a], objs[b]) for a, b in pairs)
        if len(set(pairs)) != len(pairs):
            raise InvariantViolation(f"F({format_spec(sigma)}) is not simply-laced")
        self._index(pairs)

    def _index(self, pairs):
        n = len(self.objects)
        succ, pred = [-1] * n, [-1] * n
        chain_like = True
        for a, b in pairs:
            if succ[a] != -1 or pred[b] != -1:
                chain_like = False
            succ[a], pred[b] = b, a
        if chain_like:
            rank = [None] * n
            key = [0] * n
            chains = []
            for i in range(n):
                if pred[i] != -1:
                    continue
                chain = [i]
                while succ[chain[-1]] != -1:
                    chain.append(succ[chain[-1]])
                for p, j in enumerate(chain):
                    rank[j] = (len(chains), p)
                    key[j] = len(chains) * n + p
                chains.append(tuple(self.objects[j] for j in chain))
            if None in rank:
                raise InvariantViolation(f"F({format_spec(self.simplex)}) has a directed cycle")
            self.chains = chains
            self.rank = tuple(rank)
            # a <= b iff 0 <= key[b] - key[a] < n
            self.key = key
            self._reach = None
        else:
            self.chains = None
            self.rank = None
            self.key = None
            self._reach = self._closure()

    @cached_property
    def chain_layout(self) -> tuple:
        """Generating arrows grouped per edge and target segment, in chain order."""
        out = [[[] for _ in range(e.dst)] for e in self.simplex.edges]
        for (j, i, k), s, t in self.slots:
            out[j - 1][i].append((s, t))
        return tuple(tuple(map(tuple, segs)) for segs in out)

    @cached_property
    def _succ(self) -> dict:
        out = {}
        for s, t in self.edges:
            out.setdefault(s, []).append(t)
        return out

    @cached_property
    def _pos(self) -> dict:
        return dict(zip(self.objects, self.rank))

    def _closure(self):
        # Path counts in topological order; a poset has at most one path per pair.
        order, indeg = [], {o: 0 for o in self.objects}
        for _, t in self.edges:
            indeg[t] += 1
        stack = [o for o in self.objects if indeg[o] == 0]
        while stack:
            o = stack.pop()
            order.append(o)
            for t in self._succ.get(o, ()):
                indeg[t] -= 1
                if indeg[t] == 0:
                    stack.append(t)
        if len(order) != len(self.objects):
            raise InvariantViolation(f"F({format_spec(self.simplex)}) has a directed cycle")
        paths = {o: {o: 1} for o in self.objects}
        for o in reversed(order):
            for t in self._succ.get(o, ()):
                for u, n in paths[t].items():
                    paths[o][u] = paths[o].get(u, 0) + n
        for o, row in paths.items():
            if any(n > 1 for n in row.values()):
                raise InvariantViolation(f"F({format_spec(self.simplex)}) is not a poset")
        return {o: set(row) for o, row in paths.items()}

    # -- category protocol -------------------------------------------------

    def leq(self, a, b) -> bool:
        if self._reach is not None:
            return b in self._reach[a]
        ca, pa = self._pos[a]
        cb, pb = self._pos[b]
        return ca == cb and pa <= pb

    def hom(self, a, b) -> list:
        return [(a, b)] if self.leq(a, b) else []

    @cached_property
    def morphisms(self) -> tuple:
        return tuple((a, b) for a in self.objects for b in self.objects if self.leq(a, b))

    def generators(self) -> tuple:
        return self.edges

    @staticmethod
    def src(f):
        return f[0]

    @staticmethod
    def dst(f):
        return f[1]

    @staticmethod
    def identity(o):
        return (o, o)

    @staticmethod
    def is_identity(f) -> bool:
        return f[0] == f[1]

    def compose(self, g, f):
        if f[1] != g[0]:
            raise ValueError(f"cannot compose {g} after {f}")
        return (f[0], g[1])

    def factor(self, f) -> list:
        """Generating arrows along the unique path realising ``f``."""
        a, b = f
        if not self.leq(a, b):
            raise NoPath(f"no morphism {a} -> {b}")
        out = []
        while a != b:
            nxt = [t for t in self._succ.get(a, ()) if self.leq(t, b)]
            out.append((a, nxt[0]))
            a = nxt[0]
        return out

    # -- views -------------------------------------------------------------

    def components(self) -> list[tuple]:
        if self.chains is not None:
            return sorted(self.chains)
        from .fincat import connected_components
        return connected_components(self)

    @cached_property
    def graph(self) -> OrientedGraph:
        return _graph(self.objects, self.edges)

    @cached_property
    def free(self) -> FinCategory:
        """The free category on the generating graph, as an explicit table."""
        return free_category(self.graph)

    def census(self) -> dict:
        return {"objects": len(self.objects), "edges": len(self.edges),
                "components": len(self.components())}

    def __repr__(self):
        c = self.census()
        return f"FCategory({format_spec(self.simplex)}, objects={c['objects']}, edges={c['edges']})"


@lru_cache(maxsize=16384)
def f_of_simplex(sigma: AssSimplex) -> FCategory:
    """Build ``F(sigma)``; invariants are checked on construction."""
    cat = FCategory(sigma)
    if len(cat.objects) != sum(2 * n for n in sigma.vertices):
        raise InvariantViolation(f"F({format_spec(sigma)}) has the wrong object count")
    return cat


def f_on_operator(alpha: SimplexOperator, sigma: AssSimplex, tau: AssSimplex | None = None) -> FinFunctor:
    """``F(alpha): F(tau) -> F(sigma)`` for ``tau = sigma o alpha``.

    Objects move with the vertex index; each arrow goes to the unique morphism
    between the image objects.
    """
    if tau is None:
        tau = restrict_simplex(sigma, alpha)
    ft, fs = f_of_simplex(tau), f_of_simplex(sigma)
    a = alpha.map
    om = {o: FObject(a[o.vertex], o.segment, o.tag) for o in ft.objects}
    mm = {}
    for s, t in ft.edges:
        img = (om[s], om[t])
        if not fs.leq(*img):
            raise NoPath(f"F({alpha.map}) on {format_spec(sigma)}: no morphism {img[0]} -> {img[1]}")
        mm[s, t] = img
    return FinFunctor(ft, fs, om, mm)


@lru_cache(maxsize=None)
def _offsets(vertices: tuple) -> tuple:
    out, acc = [], 0
    for n in vertices:
        out.append(acc)
        acc += 2 * n
    return tuple(out)


@lru_cache(maxsize=None)
def operator_index_map(amap: tuple, tau_vertices: tuple, sigma_vertices: tuple) -> tuple:
    """Object part of ``F(alpha)`` on positions in the sorted object tuples."""
    off_t, off_s = _offsets(tau_vertices), _offsets(sigma_vertices)
    return tuple(off_s[amap[v]] + i
                 for v, n in enumerate(tau_vertices) for i in range(2 * n))


def _slot_positions(vertices: tuple, slots) -> list:
    off = _offsets(vertices)
    at = lambda o: off[o.vertex] + 2 * o.segment.lo + (o.tag == "y")
    return [(at(s), at(t)) for _, s, t in slots]


@lru_cache(maxsize=65536)
def edge_index_pairs(tau: AssSimplex) -> tuple:
    return tuple(_slot_positions(tau.vertices, simplex_slots(tau)))


def index_action(amap: tuple, sigma: AssSimplex, tau: AssSimplex) -> tuple | None:
    """``F(alpha)`` as a tuple of object positions, or None if some arrow has no image.

    Agrees with :func:`f_on_operator` whenever both F(sigma) and F(tau) are
    chain forests, which is checked where this is used.
    """
    img = operator_index_map(amap, tau.vertices, sigma.vertices)
    cat = f_of_simplex(sigma)
    key, n = cat.key, len(cat.objects)
    for s, t in edge_index_pairs(tau):
        if not 0 <= key[img[t]] - key[img[s]] < n:
            return None
    return img


@dataclass
class FunctorialityReport:
    max_dim: int
    max_vertex: int
    mode: str
    simplices: int = 0
    operators: int = 0
    pairs: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_simplicial_functoriality(max_dim: int, max_vertex: int, mode: str = "all",
                                    simplices=None) -> FunctorialityReport:
    """Check ``F(beta o alpha) == F(beta) o F(alpha)`` within bounds.

    ``mode="all"`` ranges over every composable pair of operators;
    ``mode="generating"`` over pairs of faces and degeneracies. Either way every
    operator met is also checked to be a functor (no missing paths) and
    identity operators to give identity functors.
    """
    if mode not in ("all", "generating"):
        raise ValueError(f"unknown mode {mode!r}")
    rep = FunctorialityReport(max_dim, max_vertex, mode)
    if simplices is None:
        simplices = (s for d in range(max_dim + 1) for s in iter_simplices(d, max_vertex))

    def into(sigma):
        if mode == "all":
            for j in range(max_dim + 1):
                for beta in monotone_maps(j, sigma.dim):
                    yield beta, restrict_simplex(sigma, beta)
        else:
            for beta, tau in generating_operators(sigma, max_dim):
                if tau.dim <= max_dim:
                    yield beta, tau

    for sigma in simplices:
        rep.simplices += 1
        if mode == "generating" and f_of_simplex(sigma).rank is not None:
            _generating_pairs(sigma, max_dim, rep)
            continue
        ident = SimplexOperator(sigma.dim, sigma.dim, tuple(range(sigma.dim + 1)))
        fid = f_on_operator(ident, sigma, sigma)
        if fid.object_map != {o: o for o in fid.source.objects} or \
                any(k != v for k, v in fid.morphism_map.items()):
            rep.failures.append(("identity", format_spec(sigma)))
        for beta, tau in into(sigma):
            rep.operators += 1
            try:
                fb = f_on_operator(beta, sigma, tau)
            except NoPath as exc:
                rep.failures.append(("nopath", format_spec(sigma), beta.map, str(exc)))
                continue
            for alpha, rho in into(tau):
                rep.pairs += 1
                try:
                    lhs = f_on_operator(alpha.then(beta), sigma, rho)
                    rhs = compose_functors(fb, f_on_operator(alpha, tau, rho))
                except NoPath as exc:
                    rep.failures.append(("nopath", format_spec(sigma), beta.map, alpha.map, str(exc)))
                    continue
                if lhs != rhs:
                    rep.failures.append(("functoriality", format_spec(sigma), beta.map, alpha.map))
    return rep


@lru_cache(maxsize=8192)
def _generators_within(sigma: AssSimplex, max_dim: int) -> tuple:
    return tuple((b, t) for b, t in generating_operators(sigma, max_dim) if t.dim <= max_dim)


def _generating_pairs(sigma: AssSimplex, max_dim: int, rep: FunctorialityReport):
    # F(sigma) is a chain forest, so functors out of it are their object maps
    ident = tuple(range(sigma.dim + 1))
    n = len(f_of_simplex(sigma).objects)
    if index_action(ident, sigma, sigma) != tuple(range(n)):
        rep.failures.append(("identity", format_spec(sigma)))
    for beta, tau in generating_operators(sigma, max_dim):
        if tau.dim > max_dim:
            continue
        rep.operators += 1
        fb = index_action(beta.map, sigma, tau)
        if fb is None:
            rep.failures.append(("nopath", format_spec(sigma), beta.map))
            continue
        # F(alpha) on tau itself is checked when tau is visited: it lies within the bounds.
        # When the object maps agree, F(beta o alpha) is the composite of two
        # monotone maps, so its arrows exist; only disagreements are searched.
        for alpha, rho in _generators_within(tau, max_dim):
            rep.pairs += 1
            if _composite_agrees(beta.map, alpha.map, sigma.vertices, tau.vertices, rho.vertices):
                continue
            gamma = _compose_maps(beta.map, alpha.map)
            if index_action(gamma, sigma, rho) is None:
                rep.failures.append(("nopath", format_spec(sigma), beta.map, alpha.map))
            else:
                rep.failures.append(("functoriality", format_spec(sigma), beta.map, alpha.map))


@lru_cache(maxsize=None)
def _compose_maps(bmap: tuple, amap: tuple) -> tuple:
    return tuple(bmap[i] for i in amap)


@lru_cache(maxsize=None)
def _composite_agrees(bmap, amap, sv, tv, rv) -> bool:
    fb = operator_index_map(bmap, tv, sv)
    fa = operator_index_map(amap, rv, tv)
    lhs = operator_index_map(tuple(bmap[i] for i in amap), rv, sv)
    return lhs == tuple(fb[i] for i in fa)


def to_dot(cat: FCategory, name: str = "F") -> str:
    """Graphviz text for the generating arrows of ``F(sigma)``, byte-stable."""
    lines = [f"digraph {name} {{", f'  label="{format_spec(cat.simplex)}";']
    for node in sorted(str(o) for o in cat.objects):
        lines.append(f'  "{node}";')
    for s, t in sorted((str(s), str(t)) for s, t in cat.edges):
        lines.append(f'  "{s}" -> "{t}";')
    lines.append("}")
    return "\n".join(lines) + "\n"

