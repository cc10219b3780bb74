"""Combinatorics of Ass = Delta^op and of its category of simplices.

An object ``[n]`` of Ass is a plain ``int``. A morphism ``[m] -> [n]`` is
stored through its dual monotone map ``{0..n} -> {0..m}``, so pulling back
segments, decomposing and concatenating are index arithmetic.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator, NamedTuple, Sequence

AssObject = int


class SpecError(ValueError):
    """A simplex spec string could not be parsed."""


class IndexOutOfRange(IndexError):
    pass


class ConvexSegment(NamedTuple):
    lo: int
    hi: int

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


class AssMorphism(NamedTuple):
    src: int
    dst: int
    dual: tuple

    def __str__(self):
        return f"[{self.src}]-({','.join(map(str, self.dual))})->[{self.dst}]"

    def then(self, g: "AssMorphism") -> "AssMorphism":
        """``g o self``."""
        return compose(g, self)

    @property
    def is_identity(self) -> bool:
        return self.src == self.dst and self.dual == tuple(range(self.dst + 1))

    @property
    def is_active(self) -> bool:
        return self.dual[0] == 0 and self.dual[-1] == self.src

    @property
    def is_inert(self) -> bool:
        return all(b - a == 1 for a, b in zip(self.dual, self.dual[1:]))


def ass_morphism(src: int, dst: int, dual: Sequence[int]) -> AssMorphism:
    dual = tuple(dual)
    if src < 0 or dst < 0:
        raise ValueError("objects of Ass are [n] with n >= 0")
    if len(dual) != dst + 1:
        raise ValueError(f"dual map of [{src}]->[{dst}] needs {dst + 1} values, got {len(dual)}")
    if any(not 0 <= d <= src for d in dual) or any(a > b for a, b in zip(dual, dual[1:])):
        raise ValueError(f"dual map {dual} is not monotone into 0..{src}")
    return AssMorphism(src, dst, dual)


@lru_cache(maxsize=None)
def identity(n: int) -> AssMorphism:
    return AssMorphism(n, n, tuple(range(n + 1)))


@lru_cache(maxsize=65536)
def compose(g: AssMorphism, f: AssMorphism) -> AssMorphism:
    """``g o f`` for ``f: [m] -> [n]`` and ``g: [n] -> [p]``."""
    if f.dst != g.src:
        raise ValueError(f"cannot compose {g} after {f}")
    return AssMorphism(f.src, g.dst, tuple(f.dual[j] for j in g.dual))


@lru_cache(maxsize=None)
def morphisms(m: int, n: int) -> tuple:
    """All of ``Ass([m], [n])``, lexicographic in the dual map."""
    return tuple(AssMorphism(m, n, d)
                 for d in combinations_with_replacement(range(m + 1), n + 1))


def segments(n: int) -> list[ConvexSegment]:
    """The unit segments ``[i, i+1]`` of ``[n]``."""
    return [ConvexSegment(i, i + 1) for i in range(n)]


def pullback_segment(f: AssMorphism, s: ConvexSegment) -> ConvexSegment:
    if not 0 <= s.lo <= s.hi <= f.dst:
        raise IndexOutOfRange(f"segment {s} is not inside [{f.dst}]")
    return ConvexSegment(f.dual[s.lo], f.dual[s.hi])


def decompose(f: AssMorphism) -> list[AssMorphism]:
    """One active ``[m_i] -> [1]`` per unit segment of the target."""
    return [AssMorphism(b - a, 1, (0, b - a)) for a, b in zip(f.dual, f.dual[1:])]


def concatenate(parts: Sequence[AssMorphism]) -> AssMorphism:
    """Inverse of :func:`decompose` on active morphisms."""
    dual = [0]
    for p in parts:
        if p.dst != 1:
            raise ValueError(f"concatenation needs parts with target [1], got {p}")
        if not p.is_active:
            raise ValueError(f"only active parts concatenate, got {p}")
        dual.append(dual[-1] + p.src)
    return AssMorphism(dual[-1], len(parts), tuple(dual))


def active_inert(f: AssMorphism) -> tuple[AssMorphism, AssMorphism]:
    """Factor ``f = active o inert``."""
    lo, hi = f.dual[0], f.dual[-1]
    inert = AssMorphism(f.src, hi - lo, tuple(range(lo, hi + 1)))
    active = AssMorphism(hi - lo, f.dst, tuple(d - lo for d in f.dual))
    return active, inert


def reverse(f: AssMorphism) -> AssMorphism:
    """Mirror image of ``f`` under the order-reversing involution of Delta."""
    return AssMorphism(f.src, f.dst, tuple(f.src - d for d in reversed(f.dual)))


# -- simplices --------------------------------------------------------------

class AssSimplex(NamedTuple):
    vertices: tuple
    edges: tuple

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __str__(self):
        return format_spec(self)


def simplex(*edges: AssMorphism, vertex: int | None = None) -> AssSimplex:
    """Build a simplex from consecutive edges, or a 0-simplex from ``vertex``."""
    if not edges:
        if vertex is None:
            raise ValueError("a 0-simplex needs its vertex")
        return AssSimplex((vertex,), ())
    for a, b in zip(edges, edges[1:]):
        if a.dst != b.src:
            raise ValueError(f"edges {a} and {b} do not chain")
    return AssSimplex((edges[0].src,) + tuple(e.dst for e in edges), tuple(edges))


def arrow(sigma: AssSimplex, i: int, j: int) -> AssMorphism:
    """The morphism ``sigma_i -> sigma_j`` for ``i <= j``."""
    if j == i + 1:
        return sigma.edges[i]
    out = identity(sigma.vertices[i])
    for e in sigma.edges[i:j]:
        out = compose(e, out)
    return out


class SimplexOperator(NamedTuple):
    """A monotone map ``{0..j} -> {0..k}``, i.e. an arrow of Delta."""
    src_dim: int
    dst_dim: int
    map: tuple

    @property
    def is_identity(self) -> bool:
        return self.map == tuple(range(self.dst_dim + 1))

    @property
    def is_face(self) -> bool:
        return self.src_dim == self.dst_dim - 1 and len(set(self.map)) == len(self.map)

    @property
    def is_degeneracy(self) -> bool:
        return self.src_dim == self.dst_dim + 1 and set(self.map) == set(range(self.dst_dim + 1))

    @property
    def is_outer(self) -> bool:
        return self.is_face and (self.map[0] != 0 or self.map[-1] != self.dst_dim)

    @property
    def is_inner(self) -> bool:
        return self.is_face and not self.is_outer

    def then(self, beta: "SimplexOperator") -> "SimplexOperator":
        """``beta o self``."""
        if self.dst_dim != beta.src_dim:
            raise ValueError("operators do not compose")
        return SimplexOperator(self.src_dim, beta.dst_dim, tuple(beta.map[i] for i in self.map))


@lru_cache(maxsize=None)
def face_operator(k: int, i: int) -> SimplexOperator:
    """``d_i: [k-1] -> [k]``, skipping ``i``."""
    if not 0 <= i <= k or k < 1:
        raise IndexOutOfRange(f"no face d_{i} of a {k}-simplex")
    return SimplexOperator(k - 1, k, tuple(t if t < i else t + 1 for t in range(k)))


@lru_cache(maxsize=None)
def degeneracy_operator(k: int, i: int) -> SimplexOperator:
    """``s_i: [k+1] -> [k]``, hitting ``i`` twice."""
    if not 0 <= i <= k:
        raise IndexOutOfRange(f"no degeneracy s_{i} of a {k}-simplex")
    return SimplexOperator(k + 1, k, tuple(t if t <= i else t - 1 for t in range(k + 2)))


def monotone_maps(j: int, k: int) -> Iterator[SimplexOperator]:
    for m in combinations_with_replacement(range(k + 1), j + 1):
        yield SimplexOperator(j, k, m)


def restrict_simplex(sigma: AssSimplex, alpha: SimplexOperator) -> AssSimplex:
    """``sigma o alpha``."""
    verts = sigma.vertices
    if alpha.dst_dim != len(verts) - 1:
        raise IndexOutOfRange(f"operator into [{alpha.dst_dim}] applied to a {len(verts) - 1}-simplex")
    a = alpha.map
    edges = []
    for s, t in zip(a, a[1:]):
        if t == s + 1:
            edges.append(sigma.edges[s])
        elif t == s:
            edges.append(identity(verts[s]))
        else:
            edges.append(arrow(sigma, s, t))
    return AssSimplex(tuple(verts[i] for i in a), tuple(edges))


def simplex_face(sigma: AssSimplex, i: int) -> AssSimplex:
    return restrict_simplex(sigma, face_operator(sigma.dim, i))


def simplex_degeneracy(sigma: AssSimplex, i: int) -> AssSimplex:
    return restrict_simplex(sigma, degeneracy_operator(sigma.dim, i))


def operators_between(tau: AssSimplex, sigma: AssSimplex) -> list[SimplexOperator]:
    """Monotone ``alpha`` with ``sigma o alpha == tau``."""
    return [a for a in monotone_maps(tau.dim, sigma.dim) if restrict_simplex(sigma, a) == tau]


def generating_operators(sigma: AssSimplex, max_dim: int | None = None):
    """Faces into ``sigma`` and degeneracies out of it, as ``(alpha, tau)``.

    Degeneracies are included only while ``tau`` stays within ``max_dim``.
    """
    k = sigma.dim
    out = []
    if k >= 1:
        for i in range(k + 1):
            a = face_operator(k, i)
            out.append((a, restrict_simplex(sigma, a)))
    if max_dim is None or k + 1 <= max_dim:
        for i in range(k + 1):
            a = degeneracy_operator(k, i)
            out.append((a, restrict_simplex(sigma, a)))
    return out


def iter_simplices(dim: int, max_vertex: int) -> Iterator[AssSimplex]:
    """All ``dim``-simplices with vertices at most ``[max_vertex]``."""
    if dim == 0:
        for n in range(max_vertex + 1):
            yield AssSimplex((n,), ())
        return
    for base in iter_simplices(dim - 1, max_vertex):
        last = base.vertices[-1]
        for n in range(max_vertex + 1):
            for e in morphisms(last, n):
                yield AssSimplex(base.vertices + (n,), base.edges + (e,))


def enumerate_simplices(max_dim: int, max_vertex: int) -> list[AssSimplex]:
    if max_dim < 0 or max_vertex < 0:
        raise ValueError("bounds must be nonnegative")
    return [s for d in range(max_dim + 1) for s in iter_simplices(d, max_vertex)]


# -- spec strings -----------------------------------------------------------

_VERTEX = re.compile(r"\[(\d+)\]")
_EDGE = re.compile(r"-\(([\d,]*)\)->")


def parse_spec(text: str) -> AssSimplex:
    """Parse ``"[n0]-(i0,...,i_n1)->[n1]-(...)->..."``; whitespace is ignored."""
    s = re.sub(r"\s+", "", text)
    pos = 0
    m = _VERTEX.match(s, pos)
    if not m:
        raise SpecError(f"expected a vertex like [n] at {s[pos:pos + 8]!r}")
    vertices = [int(m.group(1))]
    edges = []
    pos = m.end()
    while pos < len(s):
        e = _EDGE.match(s, pos)
        if not e:
            raise SpecError(f"expected an edge like -(0,1)-> at {s[pos:pos + 8]!r}")
        v = _VERTEX.match(s, e.end())
        if not v:
            raise SpecError(f"expected a vertex like [n] at {s[e.end():e.end() + 8]!r}")
        token = e.group(1)
        try:
            dual = tuple(int(t) for t in token.split(",")) if token else ()
            edges.append(ass_morphism(vertices[-1], int(v.group(1)), dual))
        except ValueError as exc:
            raise SpecError(f"bad edge ({token}): {exc}") from None
        vertices.append(int(v.group(1)))
        pos = v.end()
    return AssSimplex(tuple(vertices), tuple(edges))


def format_spec(sigma: AssSimplex) -> str:
    out = f"[{sigma.vertices[0]}]"
    for e in sigma.edges:
        out += f"-({','.join(map(str, e.dual))})->[{e.dst}]"
    return out
