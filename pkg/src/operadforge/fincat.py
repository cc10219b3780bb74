"""Finite categories given by explicit tables.

A category here is anything exposing the small protocol used throughout the
package::

    objects, morphisms, generators(), src(f), dst(f), identity(o),
    is_identity(f), compose(g, f), hom(a, b)

:class:`FinCategory` is the table-backed implementation; the categories
produced by :mod:`operadforge.fposet` are poset-backed and implement the same
protocol without materialising a composition table.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np


class CategoryError(ValueError):
    """Base class for rejected category data."""


class NonAssociative(CategoryError):
    pass


class MissingComposite(CategoryError):
    pass


class BadEndpoints(CategoryError):
    pass


class CyclicGraph(CategoryError):
    pass


def identity_name(obj: Hashable) -> str:
    return f"id:{obj}"


class FinCategory:
    """A finite category with implicit identities named ``id:<obj>``.

    ``morphisms`` maps each non-identity morphism name to ``(src, dst)``;
    ``table`` maps ``(after, before)`` to the name of ``after o before`` for
    every composable pair of non-identity morphisms.
    """

    def __init__(self, objects, morphisms, table, *, validate=True):
        self.objects = tuple(sorted(objects))
        self._ends = dict(morphisms)
        self._table = dict(table)
        self._ids = {o: identity_name(o) for o in self.objects}
        self._id_obj = {name: o for o, name in self._ids.items()}
        homs = defaultdict(list)
        for o in self.objects:
            homs[o, o].append(self._ids[o])
        for name in sorted(self._ends):
            homs[self._ends[name]].append(name)
        self._homs = dict(homs)
        self._walks = []
        # every composable pair, identities included, for the hot path
        self._full = dict(self._table)
        for (a, b), names in self._homs.items():
            for h in names:
                self._full[h, self._ids[a]] = h
                self._full[self._ids[b], h] = h
        if validate:
            self._validate()

    # -- protocol -----------------------------------------------------------

    @property
    def morphisms(self) -> tuple:
        return tuple(self._ids[o] for o in self.objects) + tuple(sorted(self._ends))

    def generators(self) -> tuple:
        return tuple(sorted(self._ends))

    def src(self, f):
        if f in self._id_obj:
            return self._id_obj[f]
        return self._ends[f][0]

    def dst(self, f):
        if f in self._id_obj:
            return self._id_obj[f]
        return self._ends[f][1]

    def identity(self, obj):
        return self._ids[obj]

    def is_identity(self, f) -> bool:
        return f in self._id_obj

    def compose(self, g, f):
        """Return ``g o f`` (apply ``f`` first)."""
        try:
            return self._full[g, f]
        except KeyError:
            pass
        if f in self._id_obj:
            if self._id_obj[f] != self.src(g):
                raise BadEndpoints(f"cannot compose {g} after {f}")
            return g
        if g in self._id_obj:
            if self._id_obj[g] != self._ends[f][1]:
                raise BadEndpoints(f"cannot compose {g} after {f}")
            return f
        try:
            return self._table[g, f]
        except KeyError:
            raise BadEndpoints(f"cannot compose {g} after {f}") from None

    def hom(self, a, b) -> list:
        return self._homs.get((a, b), [])

    # -- derived ------------------------------------------------------------

    @property
    def table(self) -> dict:
        return dict(self._table)

    def __len__(self):
        return len(self._ids) + len(self._ends)

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.objects == other.objects and self._ends == other._ends
                and self._table == other._table)

    def __hash__(self):
        return hash((self.objects, tuple(sorted(self._ends.items()))))

    def __repr__(self):
        return f"FinCategory(objects={len(self.objects)}, morphisms={len(self)})"

    def hom_matrix(self) -> np.ndarray:
        """Hom-set sizes indexed by position in ``objects``."""
        idx = {o: i for i, o in enumerate(self.objects)}
        out = np.zeros((len(idx), len(idx)), dtype=np.int64)
        for (a, b), fs in self._homs.items():
            out[idx[a], idx[b]] = len(fs)
        return out

    def _validate(self):
        names = set(self._ends)
        for name, (s, t) in self._ends.items():
            if s not in self._ids or t not in self._ids:
                raise BadEndpoints(f"morphism {name}: endpoint not an object")
            if name in self._id_obj:
                raise CategoryError(f"morphism name {name} is reserved for an identity")
        for (g, f), h in self._table.items():
            if g not in names or f not in names:
                raise BadEndpoints(f"composite {g} o {f}: unknown morphism")
            if self._ends[f][1] != self._ends[g][0]:
                raise BadEndpoints(f"composite {g} o {f}: {f} does not end where {g} starts")
            if h not in names and h not in self._id_obj:
                raise BadEndpoints(f"composite {g} o {f} = {h}: unknown morphism")
            if (self.src(h), self.dst(h)) != (self._ends[f][0], self._ends[g][1]):
                raise BadEndpoints(f"composite {g} o {f} = {h}: endpoints do not match")
        outgoing = defaultdict(list)
        for f, (s, _) in self._ends.items():
            outgoing[s].append(f)
        for f, (_, t) in sorted(self._ends.items()):
            for g in sorted(outgoing[t]):
                if (g, f) not in self._table:
                    raise MissingComposite(f"totality: composite {g} o {f} undeclared")
        for f in sorted(self._ends):
            for g in sorted(outgoing[self._ends[f][1]]):
                gf = self._table[g, f]
                for h in sorted(outgoing[self._ends[g][1]]):
                    left = self.compose(h, gf)
                    right = self.compose(self.compose(h, g), f)
                    if left != right:
                        raise NonAssociative(
                            f"associativity fails on ({h}, {g}, {f}): "
                            f"({h} o {g}) o {f} = {right} but {h} o ({g} o {f}) = {left}")


def make_category(objects: Iterable, morphisms: Iterable, compose_table: Iterable) -> FinCategory:
    """Validate and build a category.

    ``morphisms`` holds ``(name, src, dst)`` triples and ``compose_table``
    holds ``(after, before, result)`` triples for non-identity pairs.
    """
    objects = list(objects)
    if len(set(objects)) != len(objects):
        raise CategoryError("duplicate object names")
    ends = {}
    for name, s, t in morphisms:
        if name in ends:
            raise CategoryError(f"duplicate morphism name {name}")
        ends[name] = (s, t)
    table = {}
    for g, f, h in compose_table:
        if (g, f) in table and table[g, f] != h:
            raise CategoryError(f"composite {g} o {f} declared twice")
        table[g, f] = h
    return FinCategory(objects, ends, table)


# -- JSON -------------------------------------------------------------------

def category_from_json(data: Mapping[str, Any]) -> FinCategory:
    return make_category(
        data.get("objects", []),
        [(m["name"], m["src"], m["dst"]) for m in data.get("morphisms", [])],
        [(c["after"], c["before"], c["result"]) for c in data.get("compose", [])],
    )


def category_to_json(cat: FinCategory) -> dict:
    return {
        "objects": list(cat.objects),
        "morphisms": [{"name": f, "src": cat.src(f), "dst": cat.dst(f)} for f in cat.generators()],
        "compose": [{"after": g, "before": f, "result": h}
                    for (g, f), h in sorted(cat.table.items())],
    }


def load_category(path) -> FinCategory:
    return category_from_json(json.loads(Path(path).read_text()))


# -- graphs -----------------------------------------------------------------

@dataclass(frozen=True)
class OrientedGraph:
    vertices: tuple
    edges: tuple  # (name, src, dst)

    def __post_init__(self):
        verts = set(self.vertices)
        names = set()
        for name, s, t in self.edges:
            if s not in verts or t not in verts:
                raise BadEndpoints(f"edge {name}: endpoint not a vertex")
            if name in names:
                raise CategoryError(f"duplicate edge name {name}")
            names.add(name)

    def __add__(self, other: "OrientedGraph") -> "OrientedGraph":
        """Disjoint union; callers keep vertex and edge names apart."""
        return OrientedGraph(self.vertices + other.vertices, self.edges + other.edges)


def free_category(graph: OrientedGraph) -> FinCategory:
    """Paths of an acyclic graph, composed by concatenation.

    A path of edges ``e1, ..., ek`` (``e1`` first) is named ``"e1;...;ek"``.
    """
    out = defaultdict(list)
    for name, s, t in sorted(graph.edges, key=lambda e: str(e[0])):
        out[s].append((name, t))
    # Kahn's algorithm doubles as the cycle check.
    indeg = {v: 0 for v in graph.vertices}
    for _, _, t in graph.edges:
        indeg[t] += 1
    queue = [v for v in graph.vertices if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for _, t in out[v]:
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    if seen != len(graph.vertices):
        raise CyclicGraph("graph has a directed cycle; its free category is infinite")

    paths = {}  # name -> (src, dst, edge tuple)

    def extend(start, node, trail):
        for name, t in out[node]:
            p = trail + (str(name),)
            paths[";".join(p)] = (start, t, p)
            extend(start, t, p)

    for v in graph.vertices:
        extend(v, v, ())
    by_edges = {p: name for name, (_, _, p) in paths.items()}
    table = {}
    for f, (_, t, pf) in paths.items():
        for g, (s, _, pg) in paths.items():
            if s == t:
                table[g, f] = by_edges[pf + pg]
    return FinCategory(graph.vertices, {k: (s, t) for k, (s, t, _) in paths.items()}, table,
                       validate=False)


# -- functors ---------------------------------------------------------------

@dataclass
class FinFunctor:
    """A functor, stored on objects and on the source's generators."""

    source: Any = field(compare=False, repr=False)
    target: Any = field(compare=False, repr=False)
    object_map: dict
    morphism_map: dict

    def __call__(self, f):
        return self.apply(f)

    def apply(self, f):
        src = self.source
        if src.is_identity(f):
            return self.target.identity(self.object_map[src.src(f)])
        if f in self.morphism_map:
            return self.morphism_map[f]
        parts = src.factor(f)
        out = self.morphism_map[parts[0]]
        for e in parts[1:]:
            out = self.target.compose(self.morphism_map[e], out)
        return out

    def is_valid(self) -> bool:
        """Check endpoints on generators and, for table sources, composites."""
        src, tgt = self.source, self.target
        if set(self.object_map) != set(src.objects):
            return False
        for f in src.generators():
            g = self.morphism_map.get(f)
            if g is None or tgt.src(g) != self.object_map[src.src(f)] \
                    or tgt.dst(g) != self.object_map[src.dst(f)]:
                return False
        if isinstance(src, FinCategory):
            for (g, f), h in src.table.items():
                if tgt.compose(self.apply(g), self.apply(f)) != self.apply(h):
                    return False
        return True


def identity_functor(cat) -> FinFunctor:
    return FinFunctor(cat, cat, {o: o for o in cat.objects}, {f: f for f in cat.generators()})


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    """``g o f``."""
    return FinFunctor(
        f.source, g.target,
        {o: g.object_map[t] for o, t in f.object_map.items()},
        {e: g.apply(h) for e, h in f.morphism_map.items()},
    )


# -- constructions ----------------------------------------------------------

def opposite(cat: FinCategory) -> FinCategory:
    ends = {f: (cat.dst(f), cat.src(f)) for f in cat.generators()}
    table = {(f, g): h for (g, f), h in cat.table.items()}
    return FinCategory(cat.objects, ends, table, validate=False)


def product(c: FinCategory, d: FinCategory) -> FinCategory:
    """Cartesian product; morphisms are named ``(f,g)`` pairs of factor names."""
    objects = [(a, b) for a in c.objects for b in d.objects]
    name = {}
    ends = {}
    for f in c.morphisms:
        for g in d.morphisms:
            if c.is_identity(f) and d.is_identity(g):
                continue
            n = f"({f},{g})"
            name[f, g] = n
            ends[n] = ((c.src(f), d.src(g)), (c.dst(f), d.dst(g)))

    def label(f, g):
        if c.is_identity(f) and d.is_identity(g):
            return identity_name((c.src(f), d.src(g)))
        return name[f, g]

    table = {}
    pairs = list(name)
    for f1, g1 in pairs:
        for f2, g2 in pairs:
            if c.dst(f1) == c.src(f2) and d.dst(g1) == d.src(g2):
                table[name[f2, g2], name[f1, g1]] = label(c.compose(f2, f1), d.compose(g2, g1))
    return FinCategory(objects, ends, table, validate=False)


def coproduct(c: FinCategory, d: FinCategory) -> FinCategory:
    """Disjoint union; objects and morphisms are tagged ``0``/``1`` by summand."""
    def tag(i, cat, f):
        if cat.is_identity(f):
            return identity_name((i, cat.src(f)))
        return f"{i}:{f}"

    objects = [(0, o) for o in c.objects] + [(1, o) for o in d.objects]
    ends, table = {}, {}
    for i, cat in ((0, c), (1, d)):
        for f in cat.generators():
            ends[tag(i, cat, f)] = ((i, cat.src(f)), (i, cat.dst(f)))
        for (g, f), h in cat.table.items():
            table[tag(i, cat, g), tag(i, cat, f)] = tag(i, cat, h)
    return FinCategory(objects, ends, table, validate=False)


def is_poset(cat) -> bool:
    """At most one morphism between any ordered pair, and no non-trivial loops."""
    for a in cat.objects:
        for b in cat.objects:
            n = len(cat.hom(a, b))
            if n > 1 or (a != b and n and cat.hom(b, a)):
                return False
    return True


def is_simply_laced(cat, generators: Iterable | None = None) -> bool:
    """No parallel generating arrows and at most one morphism a -> b."""
    seen = set()
    gens = cat.generators() if generators is None else generators
    for f in gens:
        key = (cat.src(f), cat.dst(f))
        if key in seen:
            return False
        seen.add(key)
    return all(len(cat.hom(a, b)) <= 1 for a in cat.objects for b in cat.objects)


def connected_components(cat) -> list[tuple]:
    parent = {o: o for o in cat.objects}

    def find(o):
        while parent[o] != o:
            parent[o] = parent[parent[o]]
            o = parent[o]
        return o

    for f in cat.generators():
        a, b = find(cat.src(f)), find(cat.dst(f))
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups = defaultdict(list)
    for o in cat.objects:
        groups[find(o)].append(o)
    return [tuple(groups[k]) for k in sorted(groups)]


def path_shape(cat, component: Sequence) -> list | None:
    """Objects of ``component`` in order if its generators form one directed path."""
    comp = set(component)
    succ, pred = {}, {}
    for f in cat.generators():
        s, t = cat.src(f), cat.dst(f)
        if s not in comp:
            continue
        if s in succ or t in pred or s == t:
            return None
        succ[s], pred[t] = t, s
    starts = [o for o in component if o not in pred]
    if len(starts) != 1:
        return None
    chain = [starts[0]]
    while chain[-1] in succ:
        chain.append(succ[chain[-1]])
    if len(chain) != len(comp):
        return None
    # A path-shaped component must also be free on that path (a chain poset).
    for i, a in enumerate(chain):
        for j, b in enumerate(chain):
            if len(cat.hom(a, b)) != (1 if i <= j else 0):
                return None
    return chain


# -- enumeration ------------------------------------------------------------

def _walks(target, length: int) -> list[tuple]:
    """Composable strings ``(f1, ..., f_length)`` in ``target`` (f1 first).

    Built one arrow at a time; the zero-length case lists objects.
    """
    if length == 0:
        return [(o,) for o in target.objects]
    ending = defaultdict(list)
    for o in target.objects:
        for b in target.objects:
            for f in target.hom(o, b):
                ending[b].append((f,))
    for _ in range(length - 1):
        nxt = defaultdict(list)
        for b, strings in ending.items():
            for c in target.objects:
                for g in target.hom(b, c):
                    nxt[c].extend(s + (g,) for s in strings)
        ending = nxt
    return [s for b in sorted(ending) for s in ending[b]]


def _component_functors(source, target, comp) -> list[tuple[dict, dict]]:
    chain = path_shape(source, comp)
    if chain is not None:
        gens = {}
        for f in source.generators():
            if source.src(f) in comp:
                gens[source.src(f)] = f
        out = []
        if len(chain) == 1:
            return [({chain[0]: o}, {}) for o in target.objects]
        for walk in _walks(target, len(chain) - 1):
            obj = {chain[0]: target.src(walk[0])}
            mor = {}
            for a, b, g in zip(chain, chain[1:], walk):
                obj[b] = target.dst(g)
                mor[gens[a]] = g
            out.append((obj, mor))
        return out
    return [(o, m) for o, m in _backtrack_functors(source, target, comp)]


def _backtrack_functors(source, target, comp) -> Iterator[tuple[dict, dict]]:
    """Generic search: assign objects, then every non-identity morphism."""
    comp = list(comp)
    comp_set = set(comp)
    mors = [f for f in source.morphisms if not source.is_identity(f) and source.src(f) in comp_set]
    table = [(g, f, h) for g in mors for f in mors
             if source.dst(f) == source.src(g)
             for h in [source.compose(g, f)]]
    for objs in itertools.product(target.objects, repeat=len(comp)):
        om = dict(zip(comp, objs))
        choices = [target.hom(om[source.src(f)], om[source.dst(f)]) for f in mors]
        for pick in itertools.product(*choices):
            mm = dict(zip(mors, pick))

            def img(h):
                if source.is_identity(h):
                    return target.identity(om[source.src(h)])
                return mm[h]

            if all(target.compose(mm[g], mm[f]) == img(h) for g, f, h in table):
                gens = {f: mm[f] for f in source.generators() if f in mm}
                yield om, gens


def enumerate_functors(source, target) -> list[FinFunctor]:
    """Every functor ``source -> target``, deterministic order.

    Enumerated one connected component at a time: path-shaped components by
    extending composable strings arrow by arrow, others by backtracking. The
    result is the product over components.
    """
    per_comp = [_component_functors(source, target, c) for c in connected_components(source)]
    out = []
    for combo in itertools.product(*per_comp):
        om, mm = {}, {}
        for o, m in combo:
            om.update(o)
            mm.update(m)
        out.append(FinFunctor(source, target, om, mm))
    return out


def walk_counts(target, max_length: int) -> list[int]:
    """``counts[L]`` = number of composable strings of length L in ``target``."""
    memo = getattr(target, "_walks", None)
    if memo is not None and len(memo) > max_length:
        return memo
    objs = list(target.objects)
    h = np.array([[len(target.hom(a, b)) for b in objs] for a in objs], dtype=object)
    counts = [len(objs)]
    vec = np.ones(len(objs), dtype=object)
    for _ in range(max_length):
        vec = vec.dot(h) if len(objs) else vec
        counts.append(int(sum(vec)))
    if memo is not None:
        memo[:] = counts
    return counts


def count_functors(source, target) -> int:
    """``|Fun(source, target)|`` without listing functors.

    Path-shaped components are counted from powers of the hom-size matrix.
    """
    total = 1
    chains = getattr(source, "chains", None)
    if chains is not None:
        # a known chain forest: one walk count per chain
        counts = walk_counts(target, max((len(c) for c in chains), default=1))
        for c in chains:
            total *= counts[len(c) - 1]
        return total
    comps = connected_components(source)
    longest = max((len(c) for c in comps), default=1)
    counts = walk_counts(target, longest)
    for comp in comps:
        chain = path_shape(source, comp)
        if chain is not None:
            total *= counts[len(chain) - 1]
        else:
            total *= sum(1 for _ in _backtrack_functors(source, target, comp))
        if total == 0:
            return 0
    return total


def naive_functors(source, target) -> list[FinFunctor]:
    """Oracle: try every assignment on all objects and morphisms at once."""
    objs = list(source.objects)
    mors = [f for f in source.morphisms if not source.is_identity(f)]
    out = []
    for images in itertools.product(target.objects, repeat=len(objs)):
        om = dict(zip(objs, images))
        for pick in itertools.product(*(target.hom(om[source.src(f)], om[source.dst(f)])
                                         for f in mors)):
            mm = dict(zip(mors, pick))

            def img(h):
                if source.is_identity(h):
                    return target.identity(om[source.src(h)])
                return mm[h]

            ok = True
            for f in mors:
                for g in mors:
                    if source.dst(f) == source.src(g) and \
                            target.compose(mm[g], mm[f]) != img(source.compose(g, f)):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(FinFunctor(source, target, om,
                                      {f: mm[f] for f in source.generators()}))
    return out
