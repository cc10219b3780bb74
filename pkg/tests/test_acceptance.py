"""Acceptance criteria 1-7, one report line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``;
either way a line ``ACCEPT <n> <name> result=<PASS|FAIL> ...`` is printed per
criterion and repeated in the run summary. A criterion passes when it has zero failed
checks and finishes within its time budget.
"""

from __future__ import annotations

import gc
import sys
import time

import pytest

from operadforge import delta, suite
from operadforge.fposet import f_of_simplex, verify_simplicial_functoriality
from operadforge.unicity import natural_automorphisms, swap_extension_fails
from operadforge.verify import (adjunction_records, naturality_records, oracle_count_records,
                                paused_gc, reversal_records, restriction_oracle_records,
                                well_formedness_records)

BOUND = (3, 3)
# element-wise enumeration of every lift is feasible on these; the full
# bounds are covered by counts, the universal lift and seeded samples
SMALL = [s for s in delta.enumerate_simplices(3, 1)] + \
    [s for s in delta.enumerate_simplices(1, 2) if max(s.vertices) == 2]
EVERYTHING = 10 ** 12


def categories():
    return [(f"{n}.json", suite.load(n)) for n in suite.SUITE]


def report(emit, n: int, name: str, ok: bool, budget: float, elapsed: float, **detail) -> bool:
    within = elapsed <= budget
    passed = ok and within
    extra = " ".join(f"{k}={v}" for k, v in detail.items())
    line = (f"ACCEPT {n} {name} result={'PASS' if passed else 'FAIL'} {extra} "
            f"time={elapsed:.1f}s budget={budget:.0f}s")
    if not within:
        line += " (over budget)"
    emit(line)
    return passed


def tally(records) -> tuple[int, int]:
    n = bad = 0
    for r in records:
        n += 1
        bad += not r.ok
    return n, bad


def elements(records) -> tuple[int, int, int]:
    """Records and lifts checked, ignoring the universal-lift records."""
    records = [r for r in records if "universal" not in r.name]
    return len(records), sum(r.lhs for r in records), sum(not r.ok for r in records)


@pytest.fixture(autouse=True)
def fresh_caches():
    # each criterion is timed from a cold start, independent of test order
    f_of_simplex.cache_clear()
    gc.collect()
    yield


def test_1_adjunction_bijection(accept_line):
    t = time.perf_counter()
    cats = categories()
    with paused_gc():
        n, bad = tally(adjunction_records(delta.enumerate_simplices(*BOUND), cats, seed=0, samples=1))
        m, lifts, bad2 = elements(adjunction_records(SMALL, cats, exhaustive_limit=EVERYTHING))
    dt = time.perf_counter() - t
    assert report(accept_line, 1, "adjunction-bijection", bad + bad2 == 0, 120, dt,
                  checks=n, elementwise_lifts=lifts, failures=bad + bad2)


def test_2_naturality(accept_line):
    t = time.perf_counter()
    cats = categories()
    with paused_gc():
        n, bad = tally(naturality_records(delta.enumerate_simplices(*BOUND), cats, BOUND[0], seed=0, samples=1))
        m, squares, bad2 = elements(naturality_records(SMALL, cats, BOUND[0], exhaustive_limit=EVERYTHING))
    dt = time.perf_counter() - t
    assert report(accept_line, 2, "naturality", bad + bad2 == 0, 300, dt, checks=n,
                  elementwise_squares=squares, failures=bad + bad2)


def test_3_well_formedness(accept_line):
    t = time.perf_counter()
    with paused_gc():
        n, bad = tally(well_formedness_records(delta.enumerate_simplices(*BOUND)))
    dt = time.perf_counter() - t
    assert report(accept_line, 3, "f-well-formed", bad == 0, 30, dt, checks=n, failures=bad)


def test_4_simplicial_functoriality(accept_line):
    t = time.perf_counter()
    with paused_gc():
        rep = verify_simplicial_functoriality(*BOUND, mode="generating")
    dt = time.perf_counter() - t
    assert report(accept_line, 4, "simplicial-functoriality", rep.ok, 60, dt, simplices=rep.simplices,
                  operators=rep.operators, pairs=rep.pairs, failures=len(rep.failures))


def test_4b_functoriality_all_operators_small():
    # every composable pair of operators, not just generators, at (2, 2)
    with paused_gc():
        rep = verify_simplicial_functoriality(2, 2, mode="all")
    assert rep.ok and rep.pairs > 0


def test_5_unicity(accept_line):
    t = time.perf_counter()
    counts = {}
    staged = True
    for d in range(1, 4):
        for v in range(2, 4):
            rep = natural_automorphisms(d, v, orders=False)
            counts[d, v] = rep.count
            staged = staged and rep.pairs_preserved_before_final
    swaps = {name: swap_extension_fails(suite.load(name)) for name in ("walking_arrow", "walking_iso")}
    dt = time.perf_counter() - t
    ok = all(c == 1 for c in counts.values()) and all(swaps.values()) and staged
    assert report(accept_line, 5, "unicity", ok, 120, dt,
                  counts=",".join(f"({d},{v}):{c}" for (d, v), c in counts.items()),
                  swap_fails=",".join(f"{k}:{v}" for k, v in swaps.items()))


def test_6_reversal(accept_line):
    t = time.perf_counter()
    with paused_gc():
        recs = list(reversal_records(categories(), 2, 2))
    dt = time.perf_counter() - t
    n, bad = tally(recs)
    comps = sum(r.lhs for r in recs if r.name == "reversal-composition")
    assert report(accept_line, 6, "reversal", bad == 0, 60, dt, checks=n, compositions=comps, failures=bad)


def test_7_oracles(accept_line):
    t = time.perf_counter()
    cats = categories()
    # F(sigma) has 2 * sum(vertices) objects
    sources = [(delta.format_spec(s), f_of_simplex(s)) for s in delta.enumerate_simplices(*BOUND)
               if sum(s.vertices) <= 3]
    sources += cats
    pairs = [(cn, C, dn, D) for cn, C in sources for dn, D in cats]
    with paused_gc():
        n, bad = tally(oracle_count_records(pairs))
        m, bad2 = tally(restriction_oracle_records(delta.enumerate_simplices(2, 2), cats,
                                                    samples=32, exhaustive_limit=1024))
    dt = time.perf_counter() - t
    assert report(accept_line, 7, "oracles", bad + bad2 == 0, 60, dt, count_checks=n, restrict_checks=m,
                  failures=bad + bad2)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
