"""The outer HC loop: matching, complementary 2-factor, then repeated DC rounds
and exchanges until F is a Hamilton cycle, DC comes back empty, or ``n``
rounds have run."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

from .dc import BudgetExhausted, DCBudget, Objective, Tracer, run_dc
from .factor import (
    ExchangeBrokeRegularity,
    TwoFactor,
    complement_two_factor,
    exchange,
    is_hamilton_cycle,
    partition_matching,
    two_factor_from_edges,
)
from .graph import Edge, Graph, GraphError, bridges, is_connected, is_cubic
from .matching import PerfectMatching, perfect_matching

log = logging.getLogger(__name__)

HAMILTON = "hamilton"
DC_EMPTY = "dc_empty"
ITERATION_CAP = "iteration_cap"
BUDGET = "budget"


class NotBridgelessCubic(GraphError):
    pass


class InternalInvariantViolation(RuntimeError):
    def __init__(self, message: str, trace: list[dict]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class HCConfig:
    matching_strategy: str = "first"  # "first", "all", or a matching index as a string
    matching_cap: int = 64
    dc_budget: DCBudget = DCBudget()
    objective: Objective = Objective.COMPONENTS_FIRST
    trace_level: int = 0  # 0 rounds only, 1 adds rule firings

    def __post_init__(self):
        if self.matching_cap < 1:
            raise ValueError("matching_cap must be positive")
        if self.matching_strategy not in ("first", "all") and not str(self.matching_strategy).isdigit():
            raise ValueError(f"unknown matching strategy {self.matching_strategy!r}")


@dataclass
class RoundRecord:
    round: int
    matching: list[Edge]
    c_before: int
    c_after: int | None
    k_prime_cycles: list[tuple[int, ...]]
    accepted: bool
    dc_nodes: int = 0
    dc_leaves: int = 0
    k_prime_induced: bool | None = None
    witness_survived: bool | None = None
    budget_exhausted: str | None = None
    anomaly: str | None = None

    def to_json(self) -> dict[str, Any]:
        d = dict(self.__dict__)
        d["matching"] = [list(e) for e in self.matching]
        d["k_prime_cycles"] = [list(c) for c in self.k_prime_cycles]
        return d


@dataclass
class HCResult:
    final_factor: TwoFactor
    hamiltonian_found: bool
    rounds: list[RoundRecord]
    termination_reason: str
    initial_matching: PerfectMatching
    anomalies: list[str] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)

    @property
    def dc_nodes(self) -> int:
        return sum(r.dc_nodes for r in self.rounds)


def check_input(g: Graph) -> None:
    if not is_cubic(g):
        raise NotBridgelessCubic("graph is not cubic")
    if not is_connected(g):
        raise NotBridgelessCubic("graph is not connected")
    b = bridges(g)
    if b:
        raise NotBridgelessCubic(f"graph has bridges {sorted(b)}")


def run_hc(
    g: Graph,
    cfg: HCConfig = HCConfig(),
    matching: PerfectMatching | None = None,
    witness: frozenset[Edge] | None = None,
) -> HCResult:
    """Run HC from ``matching`` (default: the lexicographically least one).

    ``witness`` is passed to the first DC call only; see ``run_dc``.
    """
    check_input(g)
    m = matching if matching is not None else perfect_matching(g)
    f = complement_two_factor(g, m)
    trace: list[dict] = []
    tracer: Tracer | None = trace.append if cfg.trace_level >= 1 else None
    rounds: list[RoundRecord] = []
    anomalies: list[str] = []
    initial = m

    def finish(reason: str) -> HCResult:
        return HCResult(f, is_hamilton_cycle(f), rounds, reason, initial, anomalies, trace)

    if is_hamilton_cycle(f):
        return finish(HAMILTON)

    for r in range(g.n):
        p = partition_matching(f, m)
        rec = RoundRecord(r, list(m.pairs), f.cycle_count, None, [], False)
        rounds.append(rec)
        if tracer is not None:
            tracer({"event": "round", "round": r, "c_before": f.cycle_count})
        try:
            res = run_dc(g, f, p, cfg.dc_budget, cfg.objective, tracer, witness if r == 0 else None)
        except BudgetExhausted as exc:
            rec.budget_exhausted = exc.which
            anomalies.append(f"BudgetExhausted:{exc.which}")
            return finish(BUDGET)
        rec.dc_nodes, rec.dc_leaves = res.branch_nodes, res.leaves
        rec.witness_survived = res.witness_survived
        if not res.k_prime:
            return finish(DC_EMPTY)
        rec.k_prime_cycles = list(res.k_prime.cycles)
        rec.k_prime_induced = res.k_prime_induced
        try:
            f_new = exchange(g, f, res.k_prime, m)
        except ExchangeBrokeRegularity as exc:
            raise InternalInvariantViolation(f"round {r}: {exc}", trace) from exc
        rec.c_after = f_new.cycle_count
        if f_new.cycle_count >= f.cycle_count:
            # an exchange that does not merge cycles is rejected and ends the run
            rec.anomaly = "MonotonicityViolation"
            anomalies.append("MonotonicityViolation")
            log.info("monotonicity violation in round %d: %d -> %d cycles", r, f.cycle_count, f_new.cycle_count)
            return finish(DC_EMPTY)
        rec.accepted = True
        f = f_new
        if is_hamilton_cycle(f):
            return finish(HAMILTON)
        m = PerfectMatching.from_pairs(g.n, g.edges - f.edge_set)
    return finish(ITERATION_CAP)


def validate_result(g: Graph, r: HCResult) -> bool:
    """Independent check that ``final_factor`` is a spanning 2-factor of ``g``
    and, when a Hamilton cycle is claimed, a single spanning cycle."""
    try:
        rebuilt = two_factor_from_edges(g, r.final_factor.edge_set)
    except GraphError:
        return False
    if r.final_factor.cycle_count != rebuilt.cycle_count:
        return False
    if r.hamiltonian_found != (rebuilt.cycle_count == 1):
        return False
    if r.hamiltonian_found:
        cyc = rebuilt.cycles.cycles
        if len(cyc) != 1 or len(cyc[0]) != g.n:
            return False
    return True
