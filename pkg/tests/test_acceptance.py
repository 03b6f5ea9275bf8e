"""One test per acceptance criterion, run over a shared corpus.

Corpus: every labeled connected cubic graph for n in {4, 6, 8}, one graph per
isomorphism class for n in {10, 12}, and 1000 seeded random bridgeless graphs
with n cycling through 4..20.  Each test records a PASS/FAIL line that is
printed in the terminal summary.
"""

import json
from collections import Counter
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES
from hamcubic import named
from hamcubic.graph import bridges, is_connected
from hamcubic.harness import CorpusSpec, EXIT_OK, iter_corpus, runtime_table, sweep, verify_instance
from hamcubic.hc import HCConfig, run_hc
from hamcubic.matching import perfect_matching, verify_matching
from hamcubic.oracle import is_hamiltonian_bruteforce, is_hamiltonian_permutations, random_cubic_bridgeless

SPECS = {
    "labeled": CorpusSpec("enumerate", 4, 8),
    "classes": CorpusSpec("classes", 10, 12),
    "random": CorpusSpec("random", 4, 20, count=1000, seed=0),
}
CFG = HCConfig(matching_strategy="all")


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="session")
def corpus():
    return {name: [g for g, _ in iter_corpus(spec)] for name, spec in SPECS.items()}


@pytest.fixture(scope="session")
def sweeps(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance")
    return {name: (root / name, sweep(spec, CFG, root / name)) for name, spec in SPECS.items()}


def _bridgeless(graphs):
    return [g for g in graphs if not bridges(g)]


def test_perfect_matching_everywhere(corpus):
    total = failures = 0
    for graphs in corpus.values():
        for g in _bridgeless(graphs):
            total += 1
            try:
                verify_matching(g, perfect_matching(g))
            except Exception:
                failures += 1
    ok = failures == 0 and total > 0
    record(1, ok, f"perfect matching found on {total - failures}/{total} bridgeless corpus graphs")
    assert ok


def test_complement_is_two_factor(corpus):
    total = failures = 0
    for graphs in corpus.values():
        for g in _bridgeless(graphs):
            total += 1
            pm = perfect_matching(g)
            rest = g.edges - pm.edge_set
            deg = Counter(v for e in rest for v in e)
            if len(rest) != g.n or any(deg[v] != 2 for v in range(g.n)):
                failures += 1
    ok = failures == 0
    record(2, ok, f"complement spanning 2-regular on {total - failures}/{total} graphs")
    assert ok


def test_soundness(sweeps):
    violations = sum(res.report["totals"]["soundness_violations"] for _, res in sweeps.values())
    runs = sum(res.report["totals"]["hc_runs"] for _, res in sweeps.values())
    codes = {name: res.exit_code for name, (_, res) in sweeps.items()}
    ok = violations == 0 and all(c == EXIT_OK for c in codes.values())
    record(3, ok, f"{violations} soundness violations over {runs} HC runs, exit codes {codes}")
    assert ok


def test_sufficiency_experiment(sweeps):
    parts = []
    ok = True
    for name, (out, res) in sweeps.items():
        rep = res.report
        suff = rep["sufficiency"]
        ok &= suff["first_matching"] is not None and suff["some_matching"] is not None
        # the "some matching" reading is only exact if no matching list was capped
        ok &= not any(v.matchings_truncated for v in res.verdicts)
        for miss in rep["sufficiency_failures"]:
            bundle_path = miss["bundle"] and out / miss["bundle"]
            if not bundle_path or not Path(bundle_path).is_file():
                ok = False
                continue
            bundle = json.loads(Path(bundle_path).read_text())
            ok &= bundle["oracle_hamiltonian"] is True and not bundle["runs"][0]["hc_found"]
        t = rep["totals"]
        parts.append(
            f"{name}: {t['oracle_hamiltonian']} hamiltonian, first-matching {suff['first_matching']:.4f}, "
            f"some-matching {suff['some_matching']:.4f}, {len(rep['sufficiency_failures'])} bundles"
        )
    record(4, ok, "; ".join(parts))
    assert ok


def test_bundle_replay_matches(sweeps):
    # replay the first recorded miss from each part and compare the outcome
    from hamcubic.graph import parse_graph6
    from hamcubic.matching import PerfectMatching

    for out, res in sweeps.values():
        for miss in res.report["sufficiency_failures"][:3]:
            bundle = json.loads((out / miss["bundle"]).read_text())
            g = parse_graph6(bundle["graph6"])
            run = bundle["runs"][0]
            pm = PerfectMatching.from_pairs(g.n, [tuple(e) for e in run["matching"]])
            again = run_hc(g, CFG, pm)
            assert again.hamiltonian_found == run["hc_found"]
            assert again.termination_reason == run["termination_reason"]


def test_monotonicity(sweeps, corpus):
    runs = accepted = over_cap = bad = 0
    anomalies = Counter()
    unbundled = 0
    for out, res in sweeps.values():
        for v in res.verdicts:
            for r in v.matchings:
                runs += 1
                cc = r.cycle_counts
                accepted += len(cc) - 1
                bad += sum(1 for a, b in zip(cc, cc[1:]) if not b < a)
                over_cap += r.rounds > v.n
        for name, count in res.report["anomalies"].items():
            anomalies[name] += count
        for item in res.report["anomaly_graphs"]:
            if not item["bundle"] or not (out / item["bundle"]).is_file():
                unbundled += 1
    ok = bad == 0 and over_cap == 0 and unbundled == 0
    record(5, ok, f"{accepted} accepted exchanges all decrease c, {over_cap} runs over n rounds, "
                  f"findings {dict(anomalies)} all bundled with traces")
    assert ok


def test_witness(sweeps):
    checked = good = expected = survived = 0
    for _, res in sweeps.values():
        for v in res.verdicts:
            for r in v.matchings:
                if v.oracle_hamiltonian and r.cycle_counts[0] > 1:
                    expected += 1
                if r.witness_ok is not None:
                    checked += 1
                    good += r.witness_ok
                    survived += bool(r.witness_survived)
    ok = checked == expected and good == checked and checked > 0
    record(6, ok, f"witness K'' valid on {good}/{checked} instances ({expected} expected); "
                  f"survived to a DC leaf in {survived}")
    assert ok


def test_runtime_probe():
    verdicts = []
    for n in (20, 40, 60, 80):
        for seed in range(10):
            verdicts.append(verify_instance(random_cubic_bridgeless(n, 1000 + seed), HCConfig(), "random",
                                            use_oracle=False))
    rows = runtime_table(verdicts)
    ok = [r["n"] for r in rows] == [20, 40, 60, 80] and all(r["budget_exhausted_rate"] is not None for r in rows)
    table = ", ".join(
        f"n={r['n']} median {r['median_hc_seconds']:.3f}s nodes {r['median_dc_nodes']}/{r['max_dc_nodes']} "
        f"budget-rate {r['budget_exhausted_rate']:.2f}" for r in rows
    )
    record(7, ok, table)
    assert ok


def test_micro_cases():
    outcomes = {}
    for name, g in [("K4", named.k4()), ("K33", named.k33()), ("prism", named.prism()), ("Petersen", named.petersen())]:
        v = verify_instance(g)
        outcomes[name] = (v.hc_found_first, v.oracle_hamiltonian)
    ok = (
        all(outcomes[k] == (True, True) for k in ("K4", "K33", "prism"))
        and outcomes["Petersen"] == (False, False)
    )
    record(8, ok, f"(hc, oracle) {outcomes}")
    assert ok


def test_oracle_cross_validation(corpus):
    small = [g for graphs in corpus.values() for g in graphs if g.n <= 8]
    disagree = sum(
        is_hamiltonian_bruteforce(g).hamiltonian != is_hamiltonian_permutations(g) for g in small
    )
    assert all(is_connected(g) for g in small)
    ok = disagree == 0 and len(small) > 0
    record(9, ok, f"{disagree} disagreements between backtracking and permutation oracles on {len(small)} graphs")
    assert ok
