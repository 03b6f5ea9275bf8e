"""Command-line front end: ``check``, ``sweep``, ``gen`` and ``probe``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import harness
from .graph import GraphError, encode_graph6, parse_edge_list_text, parse_graph6
from .hc import InternalInvariantViolation, run_hc
from .oracle import RetriesExhausted, random_cubic_bridgeless

log = logging.getLogger("hamcubic")


class UsageError(Exception):
    pass


def _add_hc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--matching", default="first", help="first, all, or a matching index k")
    p.add_argument("--matching-cap", type=int, default=64, help="cap for --matching all")
    p.add_argument("--oracle", choices=["on", "off"], default="on")
    p.add_argument("--budget", type=int, default=None, help="DC branch-node budget")
    p.add_argument("--objective", choices=["components-first", "cycles-first"], default="components-first")


def _config(args):
    if args.matching not in ("first", "all") and not args.matching.isdigit():
        raise UsageError(f"--matching must be first, all or an integer, got {args.matching!r}")
    cfg = harness.default_config(args.budget, args.objective, args.matching)
    return replace(cfg, matching_cap=args.matching_cap)


def _load_graphs(target: str):
    if os.path.exists(target):
        text = Path(target).read_text()
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if lines and len(lines[0].split()) == 2 and all(t.isdigit() for t in lines[0].split()):
            return [parse_edge_list_text(text)]
        return [parse_graph6(ln) for ln in lines if ln != ">>graph6<<"]
    return [parse_graph6(target)]


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        return int(lo), int(lo)
    return int(lo), int(hi)


def cmd_check(args) -> int:
    cfg = _config(args)
    graphs = _load_graphs(args.target)
    trace_fh = open(args.trace, "w") if args.trace else None
    code = harness.EXIT_OK
    try:
        for g in graphs:
            v = harness.verify_instance(g, cfg, "file", use_oracle=args.oracle == "on")
            out = v.to_json()
            out["wall_times"] = v.wall_times
            print(json.dumps(out, sort_keys=True))
            if v.soundness_violations:
                code = harness.EXIT_BREACH
            if trace_fh is not None and v.skipped is None:
                traced = replace(cfg, trace_level=1)
                pms, _ = harness._matchings_for(g, cfg)
                for run, pm in zip(v.matchings, pms):
                    res = run_hc(g, traced, pm)
                    for ev in res.trace:
                        trace_fh.write(json.dumps({"graph_id": v.graph_id, "matching_index": run.matching_index,
                                                   "kind": "dc", **ev}, sort_keys=True) + "\n")
                    for row in harness.hc_round_rows(v.graph_id, run.matching_index, res):
                        trace_fh.write(json.dumps({"kind": "round", **row}, sort_keys=True) + "\n")
    finally:
        if trace_fh is not None:
            trace_fh.close()
    return code


def _corpus(args) -> harness.CorpusSpec:
    picked = [x for x in (args.enumerate, args.classes, args.random, args.file) if x]
    if len(picked) != 1:
        raise UsageError("give exactly one of --enumerate, --classes, --random, --file")
    if args.enumerate or args.classes:
        lo, hi = _parse_range(args.enumerate or args.classes)
        return harness.CorpusSpec("enumerate" if args.enumerate else "classes", lo, hi)
    if args.random:
        n, count, seed = args.random
        return harness.CorpusSpec("random", n_min=n, n_max=n, count=count, seed=seed)
    return harness.CorpusSpec("file", path=args.file)


def cmd_sweep(args) -> int:
    cfg = _config(args)
    spec = _corpus(args)
    res = harness.sweep(spec, cfg, args.out, args.jobs, use_oracle=args.oracle == "on")
    print(json.dumps({k: res.report[k] for k in ("corpus", "totals", "sufficiency", "anomalies", "witness")},
                     indent=1, sort_keys=True))
    return res.exit_code


def cmd_gen(args) -> int:
    n, count, seed = args.random
    with open(args.out, "w") as fh:
        for i in range(count):
            fh.write(encode_graph6(random_cubic_bridgeless(n, seed + i)) + "\n")
    return harness.EXIT_OK


def cmd_probe(args) -> int:
    cfg = _config(args)
    verdicts = []
    for n in args.n:
        spec = harness.CorpusSpec("random", n_min=n, n_max=n, count=args.count, seed=args.seed)
        verdicts += harness.sweep(spec, cfg, None, args.jobs, use_oracle=False).verdicts
    rows = harness.runtime_table(verdicts)
    print(json.dumps(rows, indent=1))
    return harness.EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hamcubic", description="HC/DC Hamiltonicity experiments on cubic graphs")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run HC and the oracle on one graph or file")
    c.add_argument("target", help="graph6 string, graph6 file, or edge-list file")
    _add_hc_flags(c)
    c.add_argument("--trace", help="write DC rule firings and round records as JSONL")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sweep", help="verify a whole corpus")
    s.add_argument("--enumerate", metavar="NMIN..NMAX", help="labeled enumeration")
    s.add_argument("--classes", metavar="NMIN..NMAX", help="one graph per isomorphism class")
    s.add_argument("--random", nargs=3, type=int, metavar=("N", "COUNT", "SEED"))
    s.add_argument("--file", help="graph6 file")
    s.add_argument("--out", default="sweep-out")
    s.add_argument("--jobs", type=int, default=1)
    _add_hc_flags(s)
    s.set_defaults(func=cmd_sweep)

    gn = sub.add_parser("gen", help="write random bridgeless cubic graphs as graph6")
    gn.add_argument("--random", nargs=3, type=int, metavar=("N", "COUNT", "SEED"), required=True)
    gn.add_argument("--out", required=True)
    gn.set_defaults(func=cmd_gen)

    pr = sub.add_parser("probe", help="runtime table on random graphs")
    pr.add_argument("--n", type=int, nargs="+", default=[20, 40, 60, 80])
    pr.add_argument("--count", type=int, default=20)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--jobs", type=int, default=1)
    _add_hc_flags(pr)
    pr.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return harness.EXIT_USAGE if exc.code else harness.EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InternalInvariantViolation as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return harness.EXIT_BREACH
    except (UsageError, GraphError, ValueError, RetriesExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return harness.EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return harness.EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
