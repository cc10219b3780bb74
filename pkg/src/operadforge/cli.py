"""Command line front end.

    operadforge show-f --simplex "[2]-(0,2)->[1]" [--dot out.dot]
    operadforge check adjunction --category walking_arrow.json --max-dim 2 --max-vertex 2

Exit status: 0 when every check passes, 1 when one fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import delta, suite, verify
from .delta import SpecError
from .fincat import CategoryError, category_from_json
from .fposet import InvariantViolation, f_of_simplex, to_dot
from .unicity import natural_automorphisms, swap_extension_fails, swap_is_visible

KINDS = ("adjunction", "identities", "unicity", "reversal")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    categories: list = field(default_factory=list)
    simplex: str | None = None
    max_dim: int = 2
    max_vertex: int = 2
    dot: str | None = None
    output: str | None = None
    fmt: str = "text"
    seed: int = 0
    samples: int = 1
    exhaustive_limit: int = 4096

    def __post_init__(self):
        if self.max_dim < 0 or self.max_vertex < 0:
            raise InputError("bounds must be nonnegative")


def load_categories(paths: list[str]) -> list[tuple[str, object]]:
    """``(label, category)`` pairs; no paths means the built-in suite."""
    if not paths:
        return [(f"{name}.json", suite.load(name)) for name in suite.SUITE]
    out = []
    for p in paths:
        path = Path(p)
        if not path.exists():
            # fall back to the packaged data files by name
            stem = path.name.removesuffix(".json")
            if stem in suite.SUITE:
                out.append((path.name, suite.load(stem)))
                continue
            raise InputError(f"category file not found: {p}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{p}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
        try:
            out.append((path.name, category_from_json(data)))
        except CategoryError as exc:
            raise InputError(f"{p}: {type(exc).__name__}: {exc}") from None
        except (KeyError, TypeError) as exc:
            raise InputError(f"{p}: malformed category file ({exc})") from None
    return out


def workers() -> int:
    raw = os.environ.get("OPERADFORGE_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"OPERADFORGE_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise InputError("OPERADFORGE_THREADS must be nonnegative")
    return (os.cpu_count() or 1) if n == 0 else n


# -- commands -----------------------------------------------------------------

def cmd_show_f(cfg: RunConfig, out) -> int:
    sigma = delta.parse_spec(cfg.simplex)
    cat = f_of_simplex(sigma)
    c = cat.census()
    out.write(f"objects={c['objects']} edges={c['edges']} components={c['components']}\n")
    if cfg.dot:
        Path(cfg.dot).write_text(to_dot(cat))
    return 0


def _chunk_records(kind, chunk, categories, cfg):
    with verify.paused_gc():
        if kind == "adjunction":
            recs = list(verify.adjunction_records(chunk, categories, cfg.seed, cfg.samples,
                                                  cfg.exhaustive_limit, rotate=False))
            recs += verify.naturality_records(chunk, categories, cfg.max_dim, cfg.seed, cfg.samples,
                                              cfg.exhaustive_limit, rotate=False)
        else:
            recs = list(verify.well_formedness_records(chunk))
            recs += verify.identities_records(cfg.max_dim, cfg.max_vertex, simplices=chunk)
    return recs


CHUNK = 256


def _sweep(kind, categories, cfg) -> list:
    # fixed chunk size keeps the record order independent of the worker count
    sims = delta.enumerate_simplices(cfg.max_dim, cfg.max_vertex)
    chunks = [sims[i:i + CHUNK] for i in range(0, len(sims), CHUNK)]
    n = min(workers(), len(chunks))
    if n <= 1:
        return [r for c in chunks for r in _chunk_records(kind, c, categories, cfg)]
    with ProcessPoolExecutor(n) as pool:
        parts = pool.map(_chunk_records, [kind] * len(chunks), chunks,
                         [categories] * len(chunks), [cfg] * len(chunks))
        return [r for part in parts for r in part]


def _unicity(categories, cfg):
    if cfg.max_dim < 1 or cfg.max_vertex < 2:
        raise InputError("unicity needs bounds of at least --max-dim 1 --max-vertex 2")
    rep = natural_automorphisms(cfg.max_dim, cfg.max_vertex)
    lines = rep.lines()
    records = [verify.Record("natural-automorphisms", f"bound=({cfg.max_dim},{cfg.max_vertex})", "-",
                             rep.count == 1 and rep.pairs_preserved_before_final, rep.count, 1)]
    for name, X in categories:
        # the swap only moves objects when some arrow joins distinct objects
        expected = swap_is_visible(X)
        fails = swap_extension_fails(X)
        records.append(verify.Record("swap-extension-fails", "[1]-(0,1)->[1]", name, fails == expected,
                                     int(fails), int(expected)))
    return lines, records


def cmd_check(kind: str, cfg: RunConfig, out) -> int:
    categories = load_categories(cfg.categories)
    lines = []
    if kind in ("adjunction", "identities"):
        records = _sweep(kind, categories if kind == "adjunction" else [], cfg)
    elif kind == "unicity":
        lines, records = _unicity(categories, cfg)
    else:
        records = list(verify.reversal_records(categories, cfg.max_vertex, cfg.max_vertex))
    for ln in lines:
        out.write((json.dumps({"line": ln}, ensure_ascii=False) if cfg.fmt == "jsonl" else ln) + "\n")
    failed = 0
    for r in records:
        failed += not r.ok
        out.write((r.json() if cfg.fmt == "jsonl" else r.line()) + "\n")
    summary = f"SUMMARY kind={kind} checks={len(records)} failed={failed}"
    out.write((json.dumps({"summary": summary}) if cfg.fmt == "jsonl" else summary) + "\n")
    return 1 if failed else 0


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="operadforge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    show = sub.add_parser("show-f", help="census (and DOT) of F(sigma) for a simplex spec")
    show.add_argument("--simplex", required=True)
    show.add_argument("--dot")

    check = sub.add_parser("check", help="run a verification suite")
    check.add_argument("kind", choices=KINDS)
    check.add_argument("--category", action="append", default=[],
                       help="category JSON file; repeatable; default is the built-in suite")
    check.add_argument("--max-dim", type=int, default=2)
    check.add_argument("--max-vertex", type=int, default=2)
    check.add_argument("--format", choices=("text", "jsonl"), default="text")
    check.add_argument("--output")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--samples", type=int, default=1)
    check.add_argument("--exhaustive-limit", type=int, default=4096)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "show-f":
            cfg = RunConfig("show-f", simplex=args.simplex, dot=args.dot)
            return cmd_show_f(cfg, sys.stdout)
        cfg = RunConfig("check", args.category, max_dim=args.max_dim, max_vertex=args.max_vertex,
                        output=args.output, fmt=args.format, seed=args.seed, samples=args.samples,
                        exhaustive_limit=args.exhaustive_limit)
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                return cmd_check(args.kind, cfg, fh)
        return cmd_check(args.kind, cfg, sys.stdout)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
