from dataclasses import replace

import pytest

from hamcubic import named
from hamcubic.factor import TwoFactor, complement_two_factor
from hamcubic.graph import CycleSet, bridges
from hamcubic.hc import (
    DC_EMPTY,
    HAMILTON,
    HCConfig,
    NotBridgelessCubic,
    run_hc,
    validate_result,
)
from hamcubic.matching import PerfectMatching, enumerate_perfect_matchings
from hamcubic.oracle import cubic_graph_classes, random_cubic_bridgeless, verify_hamilton_cycle

RUNGS = [(0, 3), (1, 4), (2, 5)]


def test_k4_hamilton_without_dc(k4):
    r = run_hc(k4)
    assert r.hamiltonian_found and r.termination_reason == HAMILTON and r.rounds == []


def test_prism_rungs_one_exchange(prism):
    r = run_hc(prism, matching=PerfectMatching.from_pairs(6, RUNGS))
    assert r.hamiltonian_found
    assert len(r.rounds) == 1
    rd = r.rounds[0]
    assert rd.accepted and rd.c_before == 2 and rd.c_after == 1
    assert rd.k_prime_cycles == [(0, 1, 4, 3)]
    assert r.final_factor.cycles.cycles == ((0, 2, 1, 4, 5, 3),)


def test_k33_hamilton(k33):
    assert run_hc(k33).hamiltonian_found


def test_petersen_never_hamilton(petersen):
    for pm in enumerate_perfect_matchings(petersen):
        r = run_hc(petersen, matching=pm)
        assert not r.hamiltonian_found
        assert r.termination_reason in (DC_EMPTY, "iteration_cap")
        assert validate_result(petersen, r)
        assert r.final_factor.cycle_count == 2


def test_rejects_bridged_and_non_cubic():
    with pytest.raises(NotBridgelessCubic, match="bridges"):
        run_hc(named.bridged_cubic())
    with pytest.raises(NotBridgelessCubic, match="cubic"):
        run_hc(named.cycle(6))


def test_validate_result_examples(k4, prism):
    assert validate_result(k4, run_hc(k4))
    r = run_hc(prism, matching=PerfectMatching.from_pairs(6, RUNGS))
    assert validate_result(prism, r)
    two = complement_two_factor(prism, PerfectMatching.from_pairs(6, RUNGS))
    tampered = replace(r, final_factor=two, hamiltonian_found=True)
    assert not validate_result(prism, tampered)
    bogus = replace(r, final_factor=TwoFactor(CycleSet(((0, 1, 2, 3, 4, 5),))))
    assert not validate_result(prism, bogus)


def test_trace_records_rules(prism):
    r = run_hc(prism, HCConfig(trace_level=1), PerfectMatching.from_pairs(6, RUNGS))
    rules = [ev.get("rule") for ev in r.trace if "rule" in ev]
    assert rules == [11, 5, 3, 7, 13]


@pytest.mark.parametrize("n", [10, 12])
def test_round_invariants_on_classes(n):
    for g in cubic_graph_classes(n):
        if bridges(g):
            continue
        for pm in enumerate_perfect_matchings(g, 16):
            r = run_hc(g, matching=pm)
            assert len(r.rounds) <= g.n
            assert r.hamiltonian_found == (r.final_factor.cycle_count == 1)
            for rd in r.rounds:
                if rd.accepted:
                    assert rd.c_after < rd.c_before
                if rd.anomaly == "MonotonicityViolation":
                    assert rd.c_after >= rd.c_before and not rd.accepted
            if r.hamiltonian_found:
                assert verify_hamilton_cycle(g, r.final_factor.cycles.cycles[0])


def test_deterministic(petersen):
    g = random_cubic_bridgeless(30, 11)
    a, b = run_hc(g), run_hc(g)
    assert a.final_factor == b.final_factor
    assert [x.to_json() for x in a.rounds] == [x.to_json() for x in b.rounds]


def test_config_validation():
    with pytest.raises(ValueError):
        HCConfig(matching_strategy="some")
    with pytest.raises(ValueError):
        HCConfig(matching_cap=0)
