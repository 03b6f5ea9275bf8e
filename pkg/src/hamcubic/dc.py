"""The DC cycle-detection procedure.

A working copy ``j`` of the graph is pruned by four forcing rules applied to a
fixpoint with strict priority (3, 5, 7, 9; rescan from rule 3 after every
change).  When no rule applies, rule 11 branches on the first unmarked degree-3
endpoint of an M' pair; alternatives are kept on a LIFO stack.  At a leaf where
nothing is left to branch on, a vertex-disjoint set of M/F-alternating cycles of
``j`` is selected (``extract_k_prime``); the first non-empty selection wins.

Scan order everywhere: live matching pairs ascending by smaller endpoint, and
within a pair the smaller endpoint first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

from .factor import MatchingPartition, TwoFactor, check_alternating
from .graph import EMPTY_CYCLES, CycleSet, Edge, Graph, canonical_cycle, edge

DEFAULT_BRANCH_BUDGET = 100_000
DEFAULT_CYCLE_BUDGET = 10_000
DEFAULT_SUBSET_BUDGET = 10_000


class Objective(str, enum.Enum):
    COMPONENTS_FIRST = "components-first"
    CYCLES_FIRST = "cycles-first"


class InconsistentInputs(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, which: str, limit: int):
        super().__init__(f"{which} budget of {limit} exhausted")
        self.which = which
        self.limit = limit


@dataclass(frozen=True)
class DCBudget:
    branch_nodes: int = DEFAULT_BRANCH_BUDGET
    cycles: int = DEFAULT_CYCLE_BUDGET
    subsets: int = DEFAULT_SUBSET_BUDGET

    def __post_init__(self):
        if min(self.branch_nodes, self.cycles, self.subsets) < 1:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class Branch:
    pivot_vertex: int
    kept_edge: Edge
    removed_edge: Edge
    state_snapshot_id: int


@dataclass
class DCState:
    j: dict[int, set[int]]
    marked: set[Edge]
    m_prime: set[Edge]
    m_double_prime: set[Edge]
    partner: tuple[int, ...]
    f_edges: frozenset[Edge]
    decision_stack: list[Branch] = field(default_factory=list)

    def copy(self) -> "DCState":
        return DCState(
            {v: set(nb) for v, nb in self.j.items()},
            set(self.marked),
            set(self.m_prime),
            set(self.m_double_prime),
            self.partner,
            self.f_edges,
            list(self.decision_stack),
        )

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.j.values()) // 2

    def edges(self) -> set[Edge]:
        return {edge(u, w) for u, nb in self.j.items() for w in nb if u < w}

    def live_pairs(self) -> list[Edge]:
        return sorted(self.m_prime | self.m_double_prime)

    def is_marked_at(self, v: int) -> bool:
        return any(edge(v, w) in self.marked for w in self.j[v])

    def delete_edge(self, u: int, w: int) -> None:
        self.j[u].discard(w)
        self.j[w].discard(u)
        self.marked.discard(edge(u, w))

    def delete_vertex(self, v: int) -> None:
        for w in self.j.pop(v):
            self.j[w].discard(v)
            self.marked.discard(edge(v, w))

    def pair_class(self, v: int) -> str | None:
        p = edge(v, self.partner[v])
        if p in self.m_prime:
            return "prime"
        if p in self.m_double_prime:
            return "double_prime"
        return None


Tracer = Callable[[dict], None]


def init_dc_state(g: Graph, f: TwoFactor, p: MatchingPartition) -> DCState:
    matching = p.m_prime | p.m_double_prime
    if p.m_prime & p.m_double_prime:
        raise InconsistentInputs("M' and M'' overlap")
    partner = [-1] * g.n
    for u, v in matching:
        if (u, v) not in g.edges:
            raise InconsistentInputs(f"matching pair {(u, v)} is not an edge of the graph")
        if partner[u] != -1 or partner[v] != -1:
            raise InconsistentInputs(f"matching pair {(u, v)} overlaps another pair")
        partner[u], partner[v] = v, u
    if -1 in partner:
        raise InconsistentInputs(f"vertex {partner.index(-1)} is not covered by the matching")
    if f.edge_set != g.edges - matching:
        raise InconsistentInputs("2-factor is not the complement of the matching")
    cid = f.cycle_index()
    for u, v in matching:
        if (cid[u] != cid[v]) != ((u, v) in p.m_prime):
            raise InconsistentInputs(f"pair {(u, v)} is in the wrong partition class")
    return DCState(
        {v: set(g.adjacency[v]) for v in range(g.n)},
        set(),
        set(p.m_prime),
        set(p.m_double_prime),
        tuple(partner),
        f.edge_set,
    )


def _others(s: DCState, v: int) -> list[int]:
    """Neighbors of ``v`` in ``j`` other than its partner, ascending."""
    pv = s.partner[v]
    return sorted(w for w in s.j[v] if w != pv)


def _rule3(s: DCState, pairs: list[Edge]):
    for a, b in pairs:
        for v1 in (a, b):
            if not _others(s, v1):
                s.m_prime.discard((a, b))
                s.m_double_prime.discard((a, b))
                s.delete_vertex(a)
                s.delete_vertex(b)
                return {"rule": 3, "pair": [a, b], "vertex": v1, "edge": None}
    return None


def _rule5(s: DCState, pairs: list[Edge]):
    for a, b in pairs:
        for v1 in (a, b):
            if len(s.j[v1]) != 3 or not s.is_marked_at(v1):
                continue
            doomed = [w for w in _others(s, v1) if edge(v1, w) not in s.marked]
            if doomed:
                for w in doomed:
                    s.delete_edge(v1, w)
                return {"rule": 5, "pair": [a, b], "vertex": v1, "edge": [list(edge(v1, w)) for w in doomed]}
    return None


def _rule7(s: DCState, pairs: list[Edge]):
    for a, b in pairs:
        for v1 in (a, b):
            if len(s.j[v1]) != 2:
                continue
            (w,) = _others(s, v1)
            e = edge(v1, w)
            if e not in s.marked:
                s.marked.add(e)
                return {"rule": 7, "pair": [a, b], "vertex": v1, "edge": list(e)}
    return None


def _rule9(s: DCState, pairs: list[Edge]):
    for a, b in pairs:
        if (a, b) not in s.m_prime:
            continue
        for v1 in (a, b):
            if len(s.j[v1]) != 3 or s.is_marked_at(v1):
                continue
            x, y = _others(s, v1)
            cx, cy = s.pair_class(x), s.pair_class(y)
            if cx == "prime" and cy == "double_prime":
                keep, drop = x, y
            elif cx == "double_prime" and cy == "prime":
                keep, drop = y, x
            else:
                continue
            s.marked.add(edge(v1, keep))
            s.delete_edge(v1, drop)
            return {"rule": 9, "pair": [a, b], "vertex": v1, "edge": [list(edge(v1, keep)), list(edge(v1, drop))]}
    return None


_RULES = (_rule3, _rule5, _rule7, _rule9)


def apply_forcing_rules(s: DCState, tracer: Tracer | None = None) -> DCState:
    """Run rules 3, 5, 7, 9 in place to their strict-priority fixpoint."""
    while True:
        pairs = s.live_pairs()
        for rule in _RULES:
            event = rule(s, pairs)
            if event is not None:
                if tracer is not None:
                    event["edges_left"] = s.edge_count
                    tracer(event)
                break
        else:
            return s


def find_branch_vertex(s: DCState) -> tuple[int, int, int] | None:
    """First M' endpoint of degree 3 with no marked edge, as (v1, w1, w2)."""
    for a, b in s.live_pairs():
        if (a, b) not in s.m_prime:
            continue
        for v1 in (a, b):
            if len(s.j[v1]) == 3 and not s.is_marked_at(v1):
                w1, w2 = _others(s, v1)
                return v1, w1, w2
    return None


def _child(s: DCState, v1: int, keep: int, drop: int, snapshot_id: int) -> DCState:
    c = s.copy()
    c.marked.add(edge(v1, keep))
    c.delete_edge(v1, drop)
    c.decision_stack.append(Branch(v1, edge(v1, keep), edge(v1, drop), snapshot_id))
    return c


def branch_choices(s: DCState, snapshot_id: int = 0) -> tuple[DCState, DCState] | None:
    """The two rule-11 children (keep the lower neighbor first), or None."""
    found = find_branch_vertex(s)
    if found is None:
        return None
    v1, w1, w2 = found
    return _child(s, v1, w1, w2, snapshot_id), _child(s, v1, w2, w1, snapshot_id)


# -- step 13 -------------------------------------------------------------------


def alternating_cycles(s: DCState, limit: int = DEFAULT_CYCLE_BUDGET) -> list[tuple[int, ...]]:
    """Simple cycles of ``j`` alternating matching / non-matching edges.

    Each cycle is found once, from its minimum vertex ``s0`` leaving along the
    matching edge; the result is in canonical form and sorted.
    """
    partner = s.partner
    j = s.j
    found: list[tuple[int, ...]] = []
    for s0 in sorted(j):
        p0 = partner[s0]
        if p0 not in j or p0 < s0:
            continue
        path = [s0, p0]
        on_path = {s0, p0}

        def extend(tail: int) -> None:
            # tail was reached by a matching edge; leave by a non-matching one
            for w in sorted(j[tail]):
                if w == partner[tail]:
                    continue
                if w == s0:
                    if len(path) >= 4:
                        found.append(tuple(path))
                        if len(found) > limit:
                            raise BudgetExhausted("cycles", limit)
                    continue
                if w < s0 or w in on_path:
                    continue
                pw = partner[w]
                if pw not in j or pw < s0 or pw in on_path:
                    continue
                path.extend((w, pw))
                on_path.update((w, pw))
                extend(pw)
                path.pop()
                path.pop()
                on_path.discard(w)
                on_path.discard(pw)

        extend(p0)
    return sorted(canonical_cycle(c) for c in found)


class _UnionFind:
    __slots__ = ("parent", "count")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def copy(self) -> "_UnionFind":
        u = _UnionFind.__new__(_UnionFind)
        u.parent = list(self.parent)
        u.count = self.count
        return u

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            self.count -= 1


def _links(cyc: tuple[int, ...], partner, cid) -> list[tuple[int, int]]:
    """F-cycle id pairs joined by the cross matching edges of ``cyc``."""
    out = []
    for v in cyc:
        w = partner[v]
        if v < w and cid[v] != cid[w]:
            out.append((cid[v], cid[w]))
    return out


def select_cycle_set(
    cycles: list[tuple[int, ...]],
    f: TwoFactor,
    partner,
    objective: Objective = Objective.COMPONENTS_FIRST,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> tuple[tuple[int, ...], ...]:
    """Best vertex-disjoint subset of ``cycles`` for the union with ``f``.

    Components of F + K' are counted on the quotient graph whose nodes are the
    cycles of F.  Cycles without a cross matching edge never merge anything, so
    they are dropped up front: they cannot lower the component count and only
    add to the cycle count.
    """
    cid = f.cycle_index()
    c0 = f.cycle_count
    cands = [(c, _links(c, partner, cid)) for c in cycles]
    cands = [(c, ln) for c, ln in cands if ln]
    if not cands:
        return ()
    if objective is Objective.CYCLES_FIRST:
        # one cycle always suffices to reduce components; pick the best single one
        best = None
        for c, ln in cands:
            uf = _UnionFind(c0)
            for a, b in ln:
                uf.union(a, b)
            key = (uf.count, c)
            if best is None or key < best:
                best = key
        return (best[1],)

    k = len(cands)
    vsets = [frozenset(c) for c, _ in cands]
    best_key: tuple[int, int] | None = None
    best_set: tuple[int, ...] = ()
    visited = 0

    def lower_bound(uf: _UnionFind, start: int, used: frozenset) -> int:
        lb = uf.copy()
        for i in range(start, k):
            if not (vsets[i] & used):
                for a, b in cands[i][1]:
                    lb.union(a, b)
        return lb.count

    def rec(start: int, chosen: list[int], used: frozenset, uf: _UnionFind) -> None:
        nonlocal best_key, best_set, visited
        visited += 1
        if visited > subset_budget:
            raise BudgetExhausted("subsets", subset_budget)
        if chosen:
            key = (uf.count, len(chosen))
            if best_key is None or key < best_key:
                best_key, best_set = key, tuple(chosen)
        if best_key is not None:
            if best_key == (1, 1):
                return
            lb = lower_bound(uf, start, used)
            if lb > best_key[0] or (lb == best_key[0] and len(chosen) >= best_key[1]):
                return
        for i in range(start, k):
            if vsets[i] & used:
                continue
            nxt = uf.copy()
            for a, b in cands[i][1]:
                nxt.union(a, b)
            chosen.append(i)
            rec(i + 1, chosen, used | vsets[i], nxt)
            chosen.pop()

    rec(0, [], frozenset(), _UnionFind(c0))
    return tuple(cands[i][0] for i in best_set)


def extract_k_prime(
    s: DCState,
    f: TwoFactor,
    objective: Objective = Objective.COMPONENTS_FIRST,
    budget: DCBudget = DCBudget(),
) -> CycleSet:
    cycles = alternating_cycles(s, budget.cycles)
    chosen = select_cycle_set(cycles, f, s.partner, objective, budget.subsets)
    return CycleSet(tuple(sorted(chosen))) if chosen else EMPTY_CYCLES


# -- driver ----------------------------------------------------------------------


@dataclass
class DCResult:
    k_prime: CycleSet
    branch_nodes: int
    leaves: int
    max_depth: int
    k_prime_induced: bool | None = None
    witness_survived: bool | None = None


def _is_induced(k: CycleSet, s: DCState) -> bool:
    vs = k.vertices
    chords = {edge(u, w) for u in vs for w in s.j[u] if w in vs}
    return chords == set(k.edge_set)


def run_dc(
    g: Graph,
    f: TwoFactor,
    p: MatchingPartition,
    budget: DCBudget = DCBudget(),
    objective: Objective = Objective.COMPONENTS_FIRST,
    tracer: Tracer | None = None,
    witness: frozenset[Edge] | None = None,
) -> DCResult:
    """Depth-first search over rule-11 choices; first non-empty K' wins.

    ``witness`` is an optional edge set; the result records whether it was
    still wholly present in ``j`` at any terminal state visited.
    """
    root = init_dc_state(g, f, p)
    matching = frozenset(p.m_prime | p.m_double_prime)
    stack = [root]
    nodes = leaves = max_depth = 0
    witness_seen = False if witness is not None else None
    while stack:
        s = stack.pop()
        nodes += 1
        if nodes > budget.branch_nodes:
            raise BudgetExhausted("branch_nodes", budget.branch_nodes)
        node_id = nodes
        apply_forcing_rules(s, tracer)
        max_depth = max(max_depth, len(s.decision_stack))
        kids = branch_choices(s, node_id)
        if kids is not None:
            if tracer is not None:
                b = kids[0].decision_stack[-1]
                tracer({"rule": 11, "pair": list(edge(b.pivot_vertex, s.partner[b.pivot_vertex])),
                        "vertex": b.pivot_vertex, "edge": [list(b.kept_edge), list(b.removed_edge)],
                        "node": node_id, "depth": len(s.decision_stack)})
            stack.append(kids[1])
            stack.append(kids[0])
            continue
        leaves += 1
        if witness is not None and not witness_seen:
            witness_seen = witness <= s.edges()
        k = extract_k_prime(s, f, objective, budget)
        if tracer is not None:
            tracer({"rule": 13, "node": node_id, "depth": len(s.decision_stack),
                    "edges_left": s.edge_count, "k_prime": [list(c) for c in k]})
        if k:
            check_alternating(k, matching)
            return DCResult(k, nodes, leaves, max_depth, _is_induced(k, s), witness_seen)
    return DCResult(EMPTY_CYCLES, nodes, leaves, max_depth, None, witness_seen)
