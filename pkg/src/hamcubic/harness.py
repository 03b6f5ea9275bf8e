"""Experiment engine: HC against the oracle over graph corpora.

A sweep writes ``verdicts.jsonl`` (deterministic, sorted by graph id),
``timings.jsonl`` (wall-clock data kept out of the reproducible file),
``report.json`` and one replay bundle per finding under ``counterexamples/``.
"""

from __future__ import annotations

import json
import logging
import statistics
import time
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Iterable, Iterator

from .dc import DCBudget, Objective
from .factor import TwoFactor, check_alternating, complement_two_factor, is_hamilton_cycle
from .graph import CycleSet, Edge, Graph, GraphError, components, cycle_decomposition, encode_graph6, read_graph6_file
from .hc import HCConfig, HCResult, NotBridgelessCubic, check_input, run_hc, validate_result
from .matching import NoPerfectMatching, PerfectMatching, enumerate_perfect_matchings, perfect_matching
from .oracle import (
    ORACLE_CAP,
    cubic_graph_classes,
    enumerate_cubic_graphs,
    is_hamiltonian_bruteforce,
    random_cubic_bridgeless,
    verify_hamilton_cycle,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_BREACH = 0, 1, 2


@dataclass
class WitnessCheck:
    """The symmetric difference of a Hamilton cycle H and the 2-factor F."""

    cycles: list[tuple[int, ...]]
    alternating: bool
    union_connected: bool
    ok: bool


def symmetric_difference_witness(g: Graph, f: TwoFactor, m: PerfectMatching, hamilton: tuple[int, ...]) -> WitnessCheck:
    h_edges = frozenset(_cycle_edge_list(hamilton))
    diff = h_edges ^ f.edge_set
    try:
        cs = cycle_decomposition(g, diff)
    except GraphError:
        return WitnessCheck([], False, False, False)
    try:
        check_alternating(cs, m.edge_set)
        alternating = True
    except GraphError:
        alternating = False
    connected = components(g.n, f.edge_set | cs.edge_set) == 1
    return WitnessCheck(list(cs.cycles), alternating, connected, alternating and connected and bool(cs))


def _cycle_edge_list(seq) -> list[Edge]:
    return [tuple(sorted((seq[i], seq[(i + 1) % len(seq)]))) for i in range(len(seq))]


@dataclass
class MatchingRun:
    matching_index: int
    hc_found: bool
    termination_reason: str
    rounds: int
    anomalies: list[str]
    cycle_counts: list[int]
    dc_nodes: int
    valid: bool
    witness_ok: bool | None = None
    witness_survived: bool | None = None


@dataclass
class Verdict:
    graph_id: str
    n: int
    source: str
    graph6: str
    skipped: str | None = None
    matchings: list[MatchingRun] = field(default_factory=list)
    matchings_truncated: bool = False
    oracle_hamiltonian: bool | None = None
    oracle_certificate: list[int] | None = None
    agreement_some_matching: bool | None = None
    agreement_first_matching: bool | None = None
    soundness_violations: int = 0
    wall_times: dict[str, float] = field(default_factory=dict)

    @property
    def hc_found_first(self) -> bool:
        return bool(self.matchings) and self.matchings[0].hc_found

    @property
    def hc_found_some(self) -> bool:
        return any(r.hc_found for r in self.matchings)

    @property
    def anomalies(self) -> list[str]:
        return [a for r in self.matchings for a in r.anomalies]

    def to_json(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("wall_times")
        return d


def _matchings_for(g: Graph, cfg: HCConfig) -> tuple[list[PerfectMatching], bool]:
    strat = cfg.matching_strategy
    if strat == "first":
        return [perfect_matching(g)], False
    if strat == "all":
        pms = enumerate_perfect_matchings(g, cfg.matching_cap + 1)
        return pms[: cfg.matching_cap], len(pms) > cfg.matching_cap
    k = int(strat)
    pms = enumerate_perfect_matchings(g, k + 1)
    if len(pms) <= k:
        raise NoPerfectMatching(f"graph has only {len(pms)} perfect matchings, index {k} requested")
    return [pms[k]], False


def verify_instance(
    g: Graph,
    cfg: HCConfig = HCConfig(),
    source: str = "file",
    use_oracle: bool = True,
    oracle_cap: int = ORACLE_CAP,
) -> Verdict:
    """Run HC per the matching strategy, the oracle, and every cross-check."""
    v = Verdict(g.graph_id(), g.n, source, encode_graph6(g))
    try:
        check_input(g)
    except NotBridgelessCubic as exc:
        v.skipped = "NotBridgeless" if "bridge" in str(exc) else f"NotCubicConnected: {exc}"
        return v

    t0 = time.perf_counter()
    cert = None
    if use_oracle and g.n <= oracle_cap:
        ov = is_hamiltonian_bruteforce(g, oracle_cap)
        v.oracle_hamiltonian = ov.hamiltonian
        cert = ov.certificate
        v.oracle_certificate = list(cert) if cert else None
        if cert is not None and not verify_hamilton_cycle(g, cert):
            raise AssertionError(f"oracle certificate {cert} does not verify")
    v.wall_times["oracle"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pms, v.matchings_truncated = _matchings_for(g, cfg)
    v.wall_times["matching"] = time.perf_counter() - t0
    hc_time = 0.0
    index_base = int(cfg.matching_strategy) if cfg.matching_strategy.isdigit() else 0
    for i, pm in enumerate(pms):
        f0 = complement_two_factor(g, pm)
        witness = None
        wcheck = None
        if cert is not None and not is_hamilton_cycle(f0):
            wcheck = symmetric_difference_witness(g, f0, pm, cert)
            witness = frozenset(e for c in wcheck.cycles for e in _cycle_edge_list(c))
        t0 = time.perf_counter()
        res = run_hc(g, cfg, pm, witness)
        hc_time += time.perf_counter() - t0
        valid = validate_result(g, res)
        run = MatchingRun(
            index_base + i,
            res.hamiltonian_found,
            res.termination_reason,
            len(res.rounds),
            list(res.anomalies),
            [f0.cycle_count] + [r.c_after for r in res.rounds if r.accepted],
            res.dc_nodes,
            valid,
            None if wcheck is None else wcheck.ok,
            res.rounds[0].witness_survived if res.rounds and witness is not None else None,
        )
        if res.hamiltonian_found:
            seq = res.final_factor.cycles.cycles[0]
            if not (valid and verify_hamilton_cycle(g, seq) and v.oracle_hamiltonian is not False):
                v.soundness_violations += 1
        elif not valid:
            v.soundness_violations += 1
        v.matchings.append(run)
    v.wall_times["hc"] = hc_time
    if v.oracle_hamiltonian is not None:
        v.agreement_first_matching = v.hc_found_first == v.oracle_hamiltonian
        v.agreement_some_matching = v.hc_found_some == v.oracle_hamiltonian
    return v


# -- corpora ---------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusSpec:
    kind: str  # "enumerate", "classes", "random", "file"
    n_min: int = 0
    n_max: int = 0
    count: int = 0
    seed: int = 0
    path: str | None = None

    def describe(self) -> str:
        if self.kind in ("enumerate", "classes"):
            return f"{self.kind} n={self.n_min}..{self.n_max}"
        if self.kind == "random":
            ns = str(self.n_min) if self.n_max <= self.n_min else f"{self.n_min}..{self.n_max}"
            return f"random n={ns} count={self.count} seed={self.seed}"
        return f"file {self.path}"


def iter_corpus(spec: CorpusSpec) -> Iterator[tuple[Graph, str]]:
    if spec.kind == "enumerate":
        for n in range(spec.n_min + spec.n_min % 2, spec.n_max + 1, 2):
            for g in enumerate_cubic_graphs(n):
                yield g, "enumerated"
    elif spec.kind == "classes":
        for n in range(spec.n_min + spec.n_min % 2, spec.n_max + 1, 2):
            for g in cubic_graph_classes(n):
                yield g, "enumerated"
    elif spec.kind == "random":
        # orders cycle through the even n in n_min..n_max; seed i + spec.seed
        sizes = list(range(spec.n_min, max(spec.n_min, spec.n_max) + 1, 2))
        for i in range(spec.count):
            yield random_cubic_bridgeless(sizes[i % len(sizes)], spec.seed + i), "random"
    elif spec.kind == "file":
        path = Path(spec.path)
        if not path.is_file():
            raise FileNotFoundError(f"corpus file not found: {path}")
        for g in read_graph6_file(path):
            yield g, "file"
    else:
        raise ValueError(f"unknown corpus kind {spec.kind!r}")


# -- reports ---------------------------------------------------------------------


def _frac(num: int, den: int) -> float | None:
    return num / den if den else None


def runtime_table(verdicts: Iterable[Verdict]) -> list[dict[str, Any]]:
    by_n: dict[int, list[Verdict]] = {}
    for v in verdicts:
        if v.skipped is None:
            by_n.setdefault(v.n, []).append(v)
    rows = []
    for n in sorted(by_n):
        vs = by_n[n]
        runs = [r for v in vs for r in v.matchings]
        budget = sum(1 for r in runs if r.termination_reason == "budget")
        rows.append({
            "n": n,
            "graphs": len(vs),
            "runs": len(runs),
            "median_hc_seconds": statistics.median(v.wall_times.get("hc", 0.0) / max(1, len(v.matchings)) for v in vs),
            "median_dc_nodes": statistics.median(r.dc_nodes for r in runs) if runs else 0,
            "max_dc_nodes": max((r.dc_nodes for r in runs), default=0),
            "budget_exhausted_rate": _frac(budget, len(runs)),
            "hc_found_rate": _frac(sum(r.hc_found for r in runs), len(runs)),
        })
    return rows


def build_report(corpus: str, verdicts: list[Verdict], bundles: dict[str, str]) -> dict[str, Any]:
    live = [v for v in verdicts if v.skipped is None]
    ham = [v for v in live if v.oracle_hamiltonian]
    miss_first = [v for v in ham if not v.hc_found_first]
    miss_some = [v for v in ham if not v.hc_found_some]
    anomalies: dict[str, int] = {}
    for v in live:
        for a in v.anomalies:
            anomalies[a] = anomalies.get(a, 0) + 1
    witness_runs = [r for v in live for r in v.matchings if r.witness_ok is not None]
    return {
        "corpus": corpus,
        "totals": {
            "graphs": len(verdicts),
            "skipped": len(verdicts) - len(live),
            "checked": len(live),
            "oracle_known": sum(1 for v in live if v.oracle_hamiltonian is not None),
            "oracle_hamiltonian": len(ham),
            "hc_runs": sum(len(v.matchings) for v in live),
            "hc_found_first": sum(v.hc_found_first for v in live),
            "hc_found_some": sum(v.hc_found_some for v in live),
            "soundness_violations": sum(v.soundness_violations for v in live),
        },
        "sufficiency": {
            "first_matching": _frac(len(ham) - len(miss_first), len(ham)),
            "some_matching": _frac(len(ham) - len(miss_some), len(ham)),
        },
        "sufficiency_failures": [
            {"graph_id": v.graph_id, "graph6": v.graph6, "missed_first": True,
             "missed_some": not v.hc_found_some, "bundle": bundles.get(v.graph_id)}
            for v in miss_first
        ],
        "anomalies": anomalies,
        "anomaly_graphs": [
            {"graph_id": v.graph_id, "anomalies": sorted(set(v.anomalies)), "bundle": bundles.get(v.graph_id)}
            for v in live if v.anomalies
        ],
        "witness": {
            "checked": len(witness_runs),
            "ok": sum(1 for r in witness_runs if r.witness_ok),
            "survived_in_terminal_j": sum(1 for r in witness_runs if r.witness_survived),
        },
        "runtime": runtime_table(live),
    }


def write_bundle(out: Path, g: Graph, v: Verdict, cfg: HCConfig) -> Path:
    """Replay bundle: graph, matchings, per-round records and full DC traces."""
    from dataclasses import replace

    traced = replace(cfg, trace_level=1)
    pms, _ = _matchings_for(g, cfg)
    runs = []
    for run, pm in zip(v.matchings, pms):
        res: HCResult = run_hc(g, traced, pm)
        runs.append({
            "matching_index": run.matching_index,
            "matching": [list(e) for e in pm.pairs],
            "hc_found": res.hamiltonian_found,
            "termination_reason": res.termination_reason,
            "rounds": [r.to_json() for r in res.rounds],
            "final_factor": [list(c) for c in res.final_factor.cycles],
            "dc_trace": res.trace,
        })
    bundle = {
        "graph_id": v.graph_id,
        "graph6": v.graph6,
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "oracle_hamiltonian": v.oracle_hamiltonian,
        "oracle_certificate": v.oracle_certificate,
        "config": config_to_json(cfg),
        "runs": runs,
    }
    d = out / "counterexamples"
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{v.graph_id}.json"
    path.write_text(json.dumps(bundle, indent=1, sort_keys=True) + "\n")
    return path


def config_to_json(cfg: HCConfig) -> dict[str, Any]:
    return {
        "matching_strategy": cfg.matching_strategy,
        "matching_cap": cfg.matching_cap,
        "dc_budget": asdict(cfg.dc_budget),
        "objective": cfg.objective.value,
    }


@dataclass
class SweepResult:
    report: dict[str, Any]
    verdicts: list[Verdict]
    exit_code: int


def _work(args) -> Verdict:
    g, source, cfg, use_oracle = args
    return verify_instance(g, cfg, source, use_oracle)


def sweep(
    spec: CorpusSpec,
    cfg: HCConfig = HCConfig(),
    out_dir: str | Path | None = None,
    jobs: int = 1,
    use_oracle: bool = True,
) -> SweepResult:
    items = [(g, src, cfg, use_oracle) for g, src in iter_corpus(spec)]
    if jobs > 1:
        with Pool(jobs) as pool:
            verdicts = pool.map(_work, items, chunksize=max(1, len(items) // (8 * jobs)))
    else:
        verdicts = [_work(it) for it in items]
    order = sorted(range(len(verdicts)), key=lambda i: (verdicts[i].graph_id, i))
    verdicts = [verdicts[i] for i in order]
    graph_of = [items[i][0] for i in order]

    bundles: dict[str, str] = {}
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        for g, v in zip(graph_of, verdicts):
            finding = v.skipped is None and (
                (v.oracle_hamiltonian and not v.hc_found_first)
                or v.anomalies or v.soundness_violations
            )
            if finding and v.graph_id not in bundles:
                bundles[v.graph_id] = str(write_bundle(out, g, v, cfg).relative_to(out))
    report = build_report(spec.describe(), verdicts, bundles)
    report["config"] = config_to_json(cfg)
    if out is not None:
        with open(out / "verdicts.jsonl", "w") as fh:
            for v in verdicts:
                fh.write(json.dumps(v.to_json(), sort_keys=True) + "\n")
        with open(out / "timings.jsonl", "w") as fh:
            for v in verdicts:
                fh.write(json.dumps({"graph_id": v.graph_id, **v.wall_times}, sort_keys=True) + "\n")
        (out / "report.json").write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    breach = report["totals"]["soundness_violations"] > 0
    return SweepResult(report, verdicts, EXIT_BREACH if breach else EXIT_OK)


def default_config(budget: int | None = None, objective: str = "components-first", matching: str = "first") -> HCConfig:
    b = DCBudget() if budget is None else DCBudget(branch_nodes=budget)
    return HCConfig(matching_strategy=matching, dc_budget=b, objective=Objective(objective))


def hc_round_rows(graph_id: str, matching_index: int, res: HCResult) -> list[dict[str, Any]]:
    """Round records with the stable JSONL field names."""
    rows = []
    for r in res.rounds:
        rows.append({
            "graph_id": graph_id,
            "matching_index": matching_index,
            "round": r.round,
            "c_before": r.c_before,
            "c_after": r.c_after,
            "k_prime_cycles": [list(c) for c in r.k_prime_cycles],
            "termination_reason": res.termination_reason,
            "accepted": r.accepted,
            "anomaly": r.anomaly,
            "dc_nodes": r.dc_nodes,
        })
    return rows
