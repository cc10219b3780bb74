"""The bijection between lifts of a simplex to O_X and functors F(sigma) -> X.

A lift's vertex objects label the objects of ``F(sigma)`` (``x`` gets the
first component of each pair, ``y`` the second) and the entries of its chains
label the generating arrows, in the order fixed by
:func:`operadforge.fposet.edge_slots`. Both directions are pure relabellings.
"""

from __future__ import annotations

import random
from bisect import bisect
from itertools import accumulate
from dataclasses import dataclass, field

from . import delta
from .delta import AssMorphism, AssSimplex, SimplexOperator
from .fincat import FinFunctor, compose_functors, count_functors, enumerate_functors, identity_functor
from .fposet import InvariantViolation, f_of_simplex, f_on_operator
from .operad import (Lift, OperadMorphism, OperadObject, is_valid_lift, iter_lifts, restrict_lift)


def forward(sigma: AssSimplex, L: Lift, X) -> FinFunctor:
    """The functor ``F(sigma) -> X`` labelled by ``L``."""
    cat = f_of_simplex(sigma)
    om = {}
    for objs, u in zip(cat.vertex_pairs, L.vertex_objects):
        for (a, b), (x, y) in zip(objs, u.pairs):
            om[a] = x
            om[b] = y
    mm = {}
    for (j, i, k), s, t in cat.slots:
        mm[s, t] = L.edge_morphisms[j - 1].family[i][k]
    return FinFunctor(cat, X, om, mm)


def backward(sigma: AssSimplex, G: FinFunctor, X) -> Lift:
    """The lift whose labelling is ``G``."""
    cat = f_of_simplex(sigma)
    om = G.object_map
    objs = [OperadObject(tuple((om[a], om[b]) for a, b in pairs)) for pairs in cat.vertex_pairs]
    mm = G.morphism_map
    mors = tuple(OperadMorphism(e, objs[j], objs[j + 1], tuple(tuple(mm[k] for k in seg) for seg in segs))
                 for j, (e, segs) in enumerate(zip(sigma.edges, cat.chain_layout)))
    return Lift(sigma, tuple(objs), mors)


@dataclass
class AdjWitness:
    sigma: AssSimplex
    X: object = field(repr=False)
    lifts: list = field(repr=False)
    functors: list = field(repr=False)
    audit: dict = field(default_factory=dict)

    def forward(self, L: Lift) -> FinFunctor:
        return forward(self.sigma, L, self.X)

    def backward(self, G: FinFunctor) -> Lift:
        return backward(self.sigma, G, self.X)

    @property
    def ok(self) -> bool:
        return self.audit.get("bijection", False)


def adj(sigma: AssSimplex, X) -> AdjWitness:
    """Enumerate both sides and verify the bijection element by element."""
    ls = list(iter_lifts(sigma, X))
    fs = enumerate_functors(f_of_simplex(sigma), X)
    key = lambda G: (tuple(sorted(G.object_map.items())), tuple(sorted(G.morphism_map.items())))
    images = {key(forward(sigma, L, X)) for L in ls}
    targets = {key(G) for G in fs}
    round_trip = all(backward(sigma, forward(sigma, L, X), X) == L for L in ls) and \
        all(forward(sigma, backward(sigma, G, X), X) == G for G in fs)
    audit = {"lifts": len(ls), "functors": len(fs), "round_trip": round_trip,
             "image_matches": images == targets and len(images) == len(ls)}
    audit["bijection"] = round_trip and audit["image_matches"] and len(ls) == len(fs)
    if len(ls) != len(fs):
        raise InvariantViolation(f"{delta.format_spec(sigma)}: {len(ls)} lifts but {len(fs)} functors")
    return AdjWitness(sigma, X, ls, fs, audit)


def adj_zero(n: int, X) -> AdjWitness:
    return adj(AssSimplex((n,), ()), X)


def adj_generating(f: AssMorphism, X) -> AdjWitness:
    if f.dst != 1:
        raise ValueError(f"generating case needs target [1], got {f}")
    return adj(delta.simplex(f), X)


# -- naturality -------------------------------------------------------------

@dataclass
class NaturalityResult:
    ok: bool
    checked: int
    counterexample: object = None

    def __bool__(self):
        return self.ok


def naturality_holds(alpha: SimplexOperator, sigma: AssSimplex, L: Lift, X,
                     tau: AssSimplex | None = None) -> bool:
    if tau is None:
        tau = delta.restrict_simplex(sigma, alpha)
    lhs = forward(tau, restrict_lift(X, alpha, L), X)
    rhs = compose_functors(forward(sigma, L, X), f_on_operator(alpha, sigma, tau))
    return lhs == rhs


def verify_naturality(alpha: SimplexOperator, sigma: AssSimplex, X, lifts=None) -> NaturalityResult:
    """Check ``adj(tau) o restrict(alpha) == (- o F(alpha)) o adj(sigma)``.

    Runs over every lift of ``sigma`` unless ``lifts`` is given.
    """
    tau = delta.restrict_simplex(sigma, alpha)
    checked = 0
    for L in (iter_lifts(sigma, X) if lifts is None else lifts):
        checked += 1
        if not naturality_holds(alpha, sigma, L, X, tau):
            return NaturalityResult(False, checked, L)
    return NaturalityResult(True, checked)


def push_lift(F: FinFunctor, L: Lift) -> Lift:
    """Apply a functor X -> X' to every object and arrow of a lift."""
    om = F.object_map
    objs = tuple(OperadObject(tuple((om[x], om[y]) for x, y in u.pairs)) for u in L.vertex_objects)
    mors = tuple(OperadMorphism(phi.over, objs[j], objs[j + 1],
                                tuple(tuple(F.apply(c) for c in chain) for chain in phi.family))
                 for j, phi in enumerate(L.edge_morphisms))
    return Lift(L.simplex, objs, mors)


def verify_naturality_in_X(F: FinFunctor, sigma: AssSimplex) -> NaturalityResult:
    """Post-composition with ``F`` commutes with the bijection."""
    X, Y = F.source, F.target
    checked = 0
    for L in iter_lifts(sigma, X):
        checked += 1
        if forward(sigma, push_lift(F, L), Y) != compose_functors(F, forward(sigma, L, X)):
            return NaturalityResult(False, checked, L)
    return NaturalityResult(True, checked)


# -- universal element ------------------------------------------------------

def universal_lift(sigma: AssSimplex) -> Lift:
    """The lift into ``O_{F(sigma)}`` labelled by the identity of ``F(sigma)``.

    Every lift over any X is the image of this one under the functor
    ``F(sigma) -> X`` it labels, so checks on it hold for all lifts.
    """
    cat = f_of_simplex(sigma)
    cached = cat.__dict__.get("_universal_lift")
    if cached is None:
        cached = cat.__dict__["_universal_lift"] = backward(sigma, identity_functor(cat), cat)
    return cached


def universal_bijection_holds(sigma: AssSimplex) -> bool:
    cat = f_of_simplex(sigma)
    L = universal_lift(sigma)
    # L was built as backward(identity), so forward(L) == identity closes the loop
    return is_valid_lift(cat, L) and forward(sigma, L, cat) == identity_functor(cat)


def universal_naturality_holds(alpha: SimplexOperator, sigma: AssSimplex,
                               tau: AssSimplex | None = None) -> bool:
    """Naturality square on the universal lift: ``adj(restrict L) == F(alpha)``."""
    if tau is None:
        tau = delta.restrict_simplex(sigma, alpha)
    cat = f_of_simplex(sigma)
    L = universal_lift(sigma)
    return forward(tau, restrict_lift(cat, alpha, L), cat) == f_on_operator(alpha, sigma, tau)


# -- sampling ---------------------------------------------------------------

class _Sampler:
    """Completion counts and outgoing arrows of X, grown on demand."""

    def __init__(self, X):
        self.X = X
        self.objs = list(X.objects)
        self.out = {a: [(g, b) for b in self.objs for g in X.hom(a, b)] for a in self.objs}
        # ways[l][o]: composable strings of length l starting at o
        self.ways = [{o: 1 for o in self.objs}]
        self._cum = {}

    def upto(self, length: int):
        while len(self.ways) <= length:
            prev = self.ways[-1]
            self.ways.append({a: sum(prev[b] for _, b in self.out[a]) for a in self.objs})
        return self.ways


    def step(self, rest: int, a):
        """Outgoing arrows of ``a`` with cumulative weights for ``rest`` more steps."""
        key = (rest, a)
        hit = self._cum.get(key)
        if hit is None:
            options = self.out[a]
            hit = self._cum[key] = (options, list(accumulate(self.ways[rest][b] for _, b in options)))
        return hit

    def start(self, length: int):
        key = (length, None)
        hit = self._cum.get(key)
        if hit is None:
            hit = self._cum[key] = (self.objs, list(accumulate(self.ways[length][o] for o in self.objs)))
        return hit


def _pick(rng, items, cum):
    return items[bisect(cum, rng.random() * cum[-1])]


_SAMPLERS: dict = {}


def _sampler(X) -> _Sampler:
    sm = _SAMPLERS.get(id(X))
    if sm is None or sm.X is not X:
        sm = _SAMPLERS[id(X)] = _Sampler(X)
    return sm


def sample_functor(sigma: AssSimplex, X, rng: random.Random) -> FinFunctor | None:
    """A uniformly random functor ``F(sigma) -> X``, or None if there are none.

    Each chain component is drawn as a composable string, walking forward
    from its first object with weights given by the number of completions.
    """
    cat = f_of_simplex(sigma)
    sm = _sampler(X)
    sm.upto(max((len(c) for c in cat.chains or cat.components()), default=1))
    om, mm = {}, {}
    for chain in cat.components():
        L = len(chain) - 1
        objs, cum = sm.start(L)
        if not cum or not cum[-1]:
            return None
        cur = _pick(rng, objs, cum)
        om[chain[0]] = cur
        for step in range(L):
            options, cum = sm.step(L - step - 1, cur)
            g, b = _pick(rng, options, cum)
            mm[chain[step], chain[step + 1]] = g
            om[chain[step + 1]] = b
            cur = b
    return FinFunctor(cat, X, om, mm)


def functor_count(sigma: AssSimplex, X) -> int:
    return count_functors(f_of_simplex(sigma), X)
