"""2-factors, the split of a matching by the cycles of its complement, and
exchanges along M/F-alternating cycles."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import CycleSet, Edge, Graph, GraphError, NotTwoRegular, cycle_decomposition, cycle_edges
from .matching import PerfectMatching


class NotAlternating(GraphError):
    def __init__(self, cycle, pair):
        super().__init__(f"cycle {cycle} does not alternate M/F edges at consecutive edges {pair}")
        self.cycle = cycle
        self.pair = pair


class ExchangeBrokeRegularity(RuntimeError):
    pass


@dataclass(frozen=True)
class TwoFactor:
    cycles: CycleSet

    @property
    def edge_set(self) -> frozenset[Edge]:
        return self.cycles.edge_set

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)

    def cycle_index(self) -> dict[int, int]:
        """Vertex -> index of the cycle through it."""
        return {v: i for i, c in enumerate(self.cycles) for v in c}


@dataclass(frozen=True)
class MatchingPartition:
    m_prime: frozenset[Edge]
    m_double_prime: frozenset[Edge]


def two_factor_from_edges(g: Graph, edges) -> TwoFactor:
    cs = cycle_decomposition(g, edges)
    if len(cs.vertices) != g.n:
        missing = min(set(range(g.n)) - cs.vertices)
        raise NotTwoRegular(missing, 0)
    return TwoFactor(cs)


def complement_two_factor(g: Graph, m: PerfectMatching) -> TwoFactor:
    return two_factor_from_edges(g, g.edges - m.edge_set)


def partition_matching(f: TwoFactor, m: PerfectMatching) -> MatchingPartition:
    # Membership is decided edge by edge, so the maximal such subset is unique.
    cid = f.cycle_index()
    prime = frozenset(p for p in m.pairs if cid[p[0]] != cid[p[1]])
    return MatchingPartition(prime, m.edge_set - prime)


def check_alternating(c: CycleSet, matching_edges: frozenset[Edge]) -> None:
    for cyc in c:
        es = cycle_edges(cyc)
        if len(es) % 2:
            raise NotAlternating(cyc, (es[-1], es[0]))
        for i, e in enumerate(es):
            nxt = es[(i + 1) % len(es)]
            if (e in matching_edges) == (nxt in matching_edges):
                raise NotAlternating(cyc, (e, nxt))


def exchange(g: Graph, f: TwoFactor, c: CycleSet, m: PerfectMatching) -> TwoFactor:
    """Swap the F-edges of every cycle in ``c`` for its M-edges."""
    if not c:
        return f
    if not c.is_in(g):
        raise GraphError("exchange cycle set uses edges outside the host graph")
    check_alternating(c, m.edge_set)
    ce = c.edge_set
    m_part = ce & m.edge_set
    f_part = ce - m_part
    if not f_part <= f.edge_set:
        raise NotAlternating(c.cycles[0], tuple(sorted(f_part - f.edge_set))[:2])
    new_edges = (f.edge_set - f_part) | m_part
    try:
        return two_factor_from_edges(g, new_edges)
    except NotTwoRegular as exc:
        raise ExchangeBrokeRegularity(str(exc)) from exc


def is_hamilton_cycle(f: TwoFactor) -> bool:
    return f.cycle_count == 1
