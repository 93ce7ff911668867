"""Command-line interface.

Exit codes: 0 success / valid, 1 negative verdict (infeasible, invalid,
unsatisfiable), 2 usage or parse error, 3 resource exhaustion (timeout).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .corpus import CorpusError, corpus_verify, list_ids, load
from .corpus.store import CorpusEntry, dumps, loads
from .compose import MaterializationError, PlanningError, materialize, plan
from .feasibility import classify
from .graphs import SpecError, Vertex, describe, edge_count, format_spec, parse_spec
from .search.engine import DEFAULT_CEILING, SearchConfig, SearchError, search
from .sunlet import SunletBlock
from .verify import Decomposition, verify

OK, NEGATIVE, USAGE, EXHAUSTED = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2 itself; keep control here
        raise _Usage(message)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


# --------------------------------------------------------------------------
# Document formats
# --------------------------------------------------------------------------


def to_json(d: Decomposition, extra: Optional[dict] = None) -> str:
    doc = {
        "host": format_spec(d.host),
        "blocks": [[[list(v) for v in b.cycle], [list(v) for v in b.pendants]] for b in d.blocks],
    }
    doc.update(extra or {})
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> Decomposition:
    try:
        doc = json.loads(text)
        host = parse_spec(doc["host"])
        blocks = tuple(
            SunletBlock(tuple(Vertex(*v) for v in c), tuple(Vertex(*v) for v in p)) for c, p in doc["blocks"]
        )
    except (ValueError, KeyError, TypeError, SpecError) as exc:
        raise CorpusError(f"bad structured document: {exc}") from exc
    for b in blocks:
        if len(b.cycle) != 4 or len(b.pendants) != 4:
            raise CorpusError("a block needs 4 cycle vertices and 4 pendants")
    return Decomposition(host, blocks)


def read_document(path: Path) -> Decomposition:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("{"):
        return from_json(text)
    return loads(text, path.name).decomposition()


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_feasible(args) -> int:
    v = classify(args.m, args.n)
    print(v.describe())
    return OK if v.feasible else NEGATIVE


def cmd_decompose(args) -> int:
    v = classify(args.m, args.n)
    if not v.feasible:
        print(v.describe(), file=sys.stderr)
        return NEGATIVE
    try:
        tree = plan(args.m, args.n)
        d = materialize(tree, SearchConfig(time_budget=args.time, restart_policy="luby-scaled"))
    except MaterializationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXHAUSTED
    except PlanningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE
    rep = verify(d)
    nodes = sum(1 for _ in tree.walk())
    leaves = len(tree.leaves())
    if args.format == "json":
        text = to_json(
            d,
            {
                "plan": {"rule": tree.rule, "nodes": nodes, "leaves": leaves, "pieces": tree.summary()},
                "verification": rep.summary(),
            },
        )
    else:
        text = dumps(CorpusEntry(f"K{args.m}xK{args.n}", d.host, d.blocks, "composed"))
    _emit(text, args.out)
    summary = (
        f"{describe(d.host)}: {len(d.blocks)} blocks, {rep.status}; "
        f"plan {tree.rule}, {nodes} nodes, {leaves} leaves"
    )
    print(summary, file=sys.stderr if args.out is None else sys.stdout)
    return OK if rep.valid else NEGATIVE


def cmd_verify(args) -> int:
    try:
        d = read_document(args.path)
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    host = parse_spec(args.host) if args.host else d.host
    rep = verify(Decomposition(host, d.blocks))
    print(f"host {format_spec(host)}, {len(d.blocks)} blocks")
    for line in rep.lines(args.limit):
        print(line)
    return OK if rep.valid else NEGATIVE


def cmd_search(args) -> int:
    host = parse_spec(args.spec)
    if edge_count(host) > args.ceiling:
        print(
            f"error: {describe(host)} has {edge_count(host)} edges, above the search ceiling "
            f"{args.ceiling}; use `decompose`",
            file=sys.stderr,
        )
        return USAGE
    cfg = SearchConfig(
        time_budget=args.time,
        seed=args.seed,
        restart_policy="luby-scaled" if args.restarts else "none",
        symmetry_breaking=not args.no_symmetry,
        mode="prove-exhaustive" if args.prove else "find-one",
        ceiling=args.ceiling,
    )
    out = search(host, cfg)
    st = out.stats.as_dict()
    stats = ", ".join(f"{k} {st[k]}" for k in sorted(st))
    if out.found:
        _emit(dumps(CorpusEntry("search", host, out.decomposition.blocks, "search-derived")), args.out)
        print(f"found {len(out.decomposition.blocks)} blocks ({stats})", file=sys.stderr)
        return OK
    if out.result == "infeasible-proven":
        print(f"UNSAT: {describe(host)} has no L8-decomposition ({out.reason or stats})")
        return NEGATIVE
    print(f"timeout after {args.time}s ({stats})")
    return EXHAUSTED


def cmd_corpus(args) -> int:
    try:
        if args.action == "list":
            for i in list_ids():
                e = load(i)
                print(f"{i}\t{format_spec(e.host)}\t{len(e.blocks)}\t{e.provenance}")
            return OK
        reports = corpus_verify()
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    bad = 0
    for i, rep in reports.items():
        print(f"{i}\t{rep.summary()}")
        bad += not rep.valid
    return OK if not bad else NEGATIVE


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sunlet8", description="L8-decompositions of K_m x K_n")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("feasible", help="decide feasibility of K_m x K_n")
    p.add_argument("m", type=_positive)
    p.add_argument("n", type=_positive)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("decompose", help="build a verified decomposition of K_m x K_n")
    p.add_argument("m", type=_positive)
    p.add_argument("n", type=_positive)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--time", type=float, default=60.0, help="budget for any searched leaf")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check a decomposition file")
    p.add_argument("path", type=Path)
    p.add_argument("--host", nargs="+", metavar="SPEC", help="host to check against (default: the file's)")
    p.add_argument("--limit", type=int, default=50, help="defect lines to print")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exact-cover search on a small host")
    p.add_argument("spec", nargs="+", metavar="SPEC")
    p.add_argument("--time", type=float, default=60.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prove", action="store_true", help="exhaustive mode; can prove infeasibility")
    p.add_argument("--restarts", action="store_true", help="randomised Luby restarts")
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("corpus", help="list or re-verify the shipped corpus")
    p.add_argument("action", choices=("verify", "list"))
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except SpecError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except SearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    raise SystemExit(main())
