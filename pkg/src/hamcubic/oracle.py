"""Ground truth for the experiments: exact Hamiltonicity and graph corpora."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, bridges, edge, from_edge_list, is_connected, is_cubic

ORACLE_CAP = 32


class TooLarge(ValueError):
    pass


class RetriesExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleVerdict:
    hamiltonian: bool
    certificate: tuple[int, ...] | None
    nodes_explored: int


def verify_hamilton_cycle(g: Graph, seq: Sequence[int]) -> bool:
    """True iff ``seq`` visits every vertex once and closes along edges of ``g``."""
    if len(seq) != g.n or sorted(seq) != list(range(g.n)) or g.n < 3:
        return False
    return all(g.has_edge(seq[i], seq[(i + 1) % g.n]) for i in range(g.n))


def is_hamiltonian_bruteforce(g: Graph, cap: int = ORACLE_CAP) -> OracleVerdict:
    """Backtracking search for a Hamilton cycle through vertex 0.

    Pruning: every unvisited vertex needs two usable neighbors, and the
    unvisited vertices plus the path ends must stay connected.
    """
    n = g.n
    if n > cap:
        raise TooLarge(f"n={n} exceeds oracle cap {cap}")
    if n < 3:
        return OracleVerdict(False, None, 0)
    adj = g.adjacency
    on_path = [False] * n
    path = [0]
    on_path[0] = True
    nodes = 0

    def feasible(tail: int) -> bool:
        for v in range(n):
            if on_path[v]:
                continue
            usable = sum(1 for w in adj[v] if not on_path[w] or w == tail or w == 0)
            if usable < 2:
                return False
        # connectivity of unvisited vertices together with the two path ends
        allowed = [not on_path[v] or v == tail or v == 0 for v in range(n)]
        seen = [False] * n
        seen[tail] = True
        stack = [tail]
        count = 1
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if allowed[w] and not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == sum(allowed)

    def rec(tail: int) -> bool:
        nonlocal nodes
        nodes += 1
        if len(path) == n:
            return 0 in adj[tail]
        for w in adj[tail]:
            if on_path[w]:
                continue
            on_path[w] = True
            path.append(w)
            if feasible(w) and rec(w):
                return True
            path.pop()
            on_path[w] = False
        return False

    if rec(0):
        return OracleVerdict(True, tuple(path), nodes)
    return OracleVerdict(False, None, nodes)


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    """Closed tours 0 -> p -> 0 over permutations of 1..n-1, one per direction pair."""
    rows = [p for p in itertools.permutations(range(1, n)) if p[0] < p[-1]]
    body = np.array(rows, dtype=np.int64).reshape(len(rows), n - 1)
    zeros = np.zeros((len(rows), 1), dtype=np.int64)
    return np.hstack([zeros, body, zeros])


def is_hamiltonian_permutations(g: Graph) -> bool:
    """Exhaustive check over every vertex ordering; only sensible for n <= 9."""
    n = g.n
    if n < 3:
        return False
    if n > 10:
        raise TooLarge(f"permutation oracle limited to n <= 10, got {n}")
    a = np.zeros((n, n), dtype=bool)
    for u, v in g.edges:
        a[u, v] = a[v, u] = True
    tours = _perms(n)
    ok = np.ones(len(tours), dtype=bool)
    for i in range(n):
        ok &= a[tours[:, i], tours[:, i + 1]]
    return bool(ok.any())


# -- corpora -------------------------------------------------------------------


def enumerate_labeled_cubic(n: int) -> Iterator[Graph]:
    """Every cubic graph on labeled vertices 0..n-1, each exactly once.

    The smallest vertex still short of degree 3 picks its missing neighbors as a
    set among larger vertices, so each edge set is produced once.
    """
    deg = [0] * n
    edges: list[tuple[int, int]] = []

    def rec(u: int) -> Iterator[Graph]:
        while u < n and deg[u] == 3:
            u += 1
        if u == n:
            yield from_edge_list(n, edges)
            return
        need = 3 - deg[u]
        cands = [w for w in range(u + 1, n) if deg[w] < 3]
        for combo in itertools.combinations(cands, need):
            deg[u] = 3
            for w in combo:
                deg[w] += 1
                edges.append((u, w))
            yield from rec(u + 1)
            for w in combo:
                deg[w] -= 1
                edges.pop()
            deg[u] = 3 - need

    yield from rec(0)


def _check_even(n: int, lo: int, hi: int | None = None) -> None:
    if n % 2 or n < lo or (hi is not None and n > hi):
        rng = f"{lo}..{hi}" if hi is not None else f">= {lo}"
        raise ValueError(f"n must be even and {rng}, got {n}")


def enumerate_cubic_graphs(n: int) -> Iterator[Graph]:
    """Connected labeled cubic graphs on n vertices (isomorphic copies included)."""
    _check_even(n, 4, 14)
    for g in enumerate_labeled_cubic(n):
        if is_connected(g):
            yield g


def _vertex_invariant(g: Graph, v: int) -> tuple:
    dist = {v: 0}
    frontier = [v]
    layers = [1]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        if nxt:
            layers.append(len(nxt))
        frontier = nxt
    tri = sum(1 for a, b in itertools.combinations(g.adjacency[v], 2) if g.has_edge(a, b))
    inner = sum(1 for a, b in g.edges if dist[a] == dist[b])
    return (tuple(layers), tri, inner)


def graph_invariant(g: Graph) -> tuple:
    return (g.n, tuple(sorted(_vertex_invariant(g, v) for v in range(g.n))))


def _bfs_labeled_cubic(n: int) -> Iterator[list[tuple[int, int]]]:
    """Connected cubic graphs whose labeling is a breadth-first order from 0.

    Vertices are processed in label order.  Vertex ``u`` completes its degree
    with some discovered-but-unprocessed vertices and some fresh vertices, which
    take the next free labels.  Every connected cubic graph has such a labeling,
    so every isomorphism class is reached, with far fewer copies than the
    labeled enumeration.
    """
    deg = [0] * n
    edges: list[tuple[int, int]] = []

    def rec(u: int, nxt: int) -> Iterator[list[tuple[int, int]]]:
        if u == n:
            yield list(edges)
            return
        if u >= nxt:
            return
        need = 3 - deg[u]
        waiting = [w for w in range(u + 1, nxt) if deg[w] < 3]
        for fresh in range(min(need, n - nxt) + 1):
            for combo in itertools.combinations(waiting, need - fresh):
                ws = list(combo) + list(range(nxt, nxt + fresh))
                for w in ws:
                    deg[w] += 1
                    edges.append((u, w))
                deg[u] = 3
                yield from rec(u + 1, nxt + fresh)
                deg[u] = 3 - need
                for w in ws:
                    deg[w] -= 1
                    edges.pop()

    yield from rec(0, 1)


@lru_cache(maxsize=None)
def cubic_graph_classes(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of connected cubic graphs.

    Duplicates from the breadth-first enumeration are removed with an invariant
    bucket followed by an exact isomorphism test.  Representatives keep their
    breadth-first labeling and are returned in edge-list order.
    """
    import networkx as nx

    _check_even(n, 4, 14)
    buckets: dict[tuple, list[object]] = {}
    out: list[Graph] = []
    for es in _bfs_labeled_cubic(n):
        g = from_edge_list(n, es)
        bucket = buckets.setdefault(graph_invariant(g), [])
        nxg = nx.Graph(es)
        if not any(nx.is_isomorphic(nxg, h) for h in bucket):
            bucket.append(nxg)
            out.append(g)
    return tuple(sorted(out, key=lambda h: h.sorted_edges()))


def random_cubic_bridgeless(n: int, seed: int, max_retries: int = 10_000) -> Graph:
    """Pairing-model sample conditioned on simple, connected and bridgeless."""
    _check_even(n, 4)
    rng = random.Random(seed)
    points = [v for v in range(n) for _ in range(3)]
    for _ in range(max_retries):
        rng.shuffle(points)
        pairs = [edge(points[i], points[i + 1]) for i in range(0, 3 * n, 2)]
        if any(u == v for u, v in pairs) or len(set(pairs)) != len(pairs):
            continue
        g = from_edge_list(n, pairs)
        if is_connected(g) and not bridges(g):
            return g
    raise RetriesExhausted(f"no simple bridgeless cubic graph on {n} vertices after {max_retries} tries")


def is_valid_corpus_graph(g: Graph) -> bool:
    return is_cubic(g) and is_connected(g) and not bridges(g)
