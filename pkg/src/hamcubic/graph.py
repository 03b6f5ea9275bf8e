"""Immutable simple undirected graphs on vertices ``0..n-1``.

Also hosts graph6 and edge-list I/O, connectivity and bridge detection, and
cycle bookkeeping shared by the rest of the package.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]

GRAPH6_HEADER = ">>graph6<<"


class GraphError(ValueError):
    """Base class for malformed graph input."""


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class IndexOutOfRange(GraphError):
    pass


class MalformedGraph6(GraphError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class NotTwoRegular(GraphError):
    def __init__(self, vertex: int, degree: int):
        super().__init__(f"vertex {vertex} has degree {degree} in the edge subset, expected 2")
        self.vertex = vertex
        self.degree = degree


def edge(u: int, v: int) -> Edge:
    """Canonical (min, max) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    edges: frozenset[Edge]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def graph_id(self) -> str:
        """Stable short hash of ``n`` and the canonical edge list."""
        payload = f"{self.n}:" + ",".join(f"{u}-{v}" for u, v in self.sorted_edges())
        return hashlib.sha1(payload.encode("ascii")).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    if n < 1:
        raise GraphError(f"vertex count must be >= 1, got {n}")
    adj: list[set[int]] = [set() for _ in range(n)]
    seen: set[Edge] = set()
    for raw in edges:
        u, v = int(raw[0]), int(raw[1])
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRange(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"edge ({u}, {v}) is a self-loop")
        e = edge(u, v)
        if e in seen:
            raise DuplicateEdge(f"edge {e} appears more than once")
        seen.add(e)
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n, tuple(tuple(sorted(a)) for a in adj), frozenset(seen))


# -- graph6 -----------------------------------------------------------------


def _decode_n(data: bytes) -> tuple[int, int]:
    """Return (n, number of bytes consumed) for the graph6 size prefix."""
    if not data:
        raise MalformedGraph6("empty graph6 string", 0)
    for i, b in enumerate(data):
        if not 63 <= b <= 126:
            raise MalformedGraph6(f"byte {b!r} outside printable range 63..126", i)
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise MalformedGraph6("truncated 36-bit size field", len(data))
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        return n, 8
    if len(data) < 4:
        raise MalformedGraph6("truncated 18-bit size field", len(data))
    n = 0
    for b in data[1:4]:
        n = (n << 6) | (b - 63)
    return n, 4


def parse_graph6(line: str) -> Graph:
    """Decode one graph6 line (the ``>>graph6<<`` header is optional)."""
    s = line.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    try:
        data = s.encode("ascii")
    except UnicodeEncodeError as exc:
        raise MalformedGraph6("non-ASCII character", exc.start) from None
    n, pos = _decode_n(data)
    if n < 1:
        raise MalformedGraph6("graph has no vertices", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise MalformedGraph6(
            f"expected {nbytes} data bytes for n={n}, found {len(body)}", pos + min(len(body), nbytes)
        )
    edges = []
    k = 0
    # upper triangle in column order: (0,1), (0,2), (1,2), (0,3), ...
    for v in range(1, n):
        for u in range(v):
            byte = body[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((u, v))
            k += 1
    return from_edge_list(n, edges)


def encode_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        out = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    bits = [1 if (u, v) in g.edges else 0 for v in range(1, n) for u in range(v)]
    bits += [0] * (-len(bits) % 6)
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = (val << 1) | b
        out.append(val + 63)
    return bytes(out).decode("ascii")


def read_graph6_file(path) -> Iterator[Graph]:
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line == GRAPH6_HEADER:
                continue
            yield parse_graph6(line)


def parse_edge_list_text(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines of ``u v``; ``#`` starts a comment."""
    rows = []
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].split()
        if body:
            rows.append(body)
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge-list text must start with an 'n m' header")
    n, m = int(rows[0][0]), int(rows[0][1])
    pairs = rows[1:]
    if len(pairs) != m:
        raise GraphError(f"header declares {m} edges, found {len(pairs)}")
    for p in pairs:
        if len(p) != 2:
            raise GraphError(f"bad edge line: {' '.join(p)!r}")
    return from_edge_list(n, [(int(a), int(b)) for a, b in pairs])


def format_edge_list_text(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


# -- structural predicates ----------------------------------------------------


def is_cubic(g: Graph) -> bool:
    return all(len(a) == 3 for a in g.adjacency)


def components(n: int, edges: Iterable[Edge]) -> int:
    """Number of connected components of the graph ``(range(n), edges)``."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


def is_connected(g: Graph) -> bool:
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    reached = 1
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if not seen[w]:
                seen[w] = True
                reached += 1
                stack.append(w)
    return reached == g.n


def bridges(g: Graph) -> set[Edge]:
    """Cut-edges via one iterative DFS low-link pass over every component."""
    disc = [-1] * g.n
    low = [0] * g.n
    found: set[Edge] = set()
    timer = 0
    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        # frames of (vertex, parent, neighbor iterator)
        stack = [(root, -1, iter(g.adjacency[root]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, u, iter(g.adjacency[w])))
                    advanced = True
                    break
                low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    found.add(edge(parent, u))
    return found


def is_bridgeless_cubic(g: Graph) -> bool:
    return is_cubic(g) and is_connected(g) and not bridges(g)


# -- cycles -------------------------------------------------------------------


def canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the minimum vertex, heading toward the smaller neighbor."""
    k = len(seq)
    i = min(range(k), key=seq.__getitem__)
    fwd = tuple(seq[(i + j) % k] for j in range(k))
    bwd = tuple(seq[(i - j) % k] for j in range(k))
    return min(fwd, bwd)


def cycle_edges(seq: Sequence[int]) -> list[Edge]:
    return [edge(seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq))]


@dataclass(frozen=True)
class CycleSet:
    cycles: tuple[tuple[int, ...], ...]

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(e for c in self.cycles for e in cycle_edges(c))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for c in self.cycles for v in c)

    def __len__(self) -> int:
        return len(self.cycles)

    def __bool__(self) -> bool:
        return bool(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> "CycleSet":
        canon = sorted(canonical_cycle(c) for c in cycles)
        seen: set[int] = set()
        for c in canon:
            if len(c) < 3:
                raise GraphError(f"cycle {c} is shorter than 3")
            if seen.intersection(c) or len(set(c)) != len(c):
                raise GraphError(f"cycle {c} is not vertex-disjoint from the others")
            seen.update(c)
        return cls(tuple(canon))

    def is_in(self, g: Graph) -> bool:
        return all(e in g.edges for e in self.edge_set)


EMPTY_CYCLES = CycleSet(())


def cycle_decomposition(g: Graph, edge_subset: Iterable[Edge]) -> CycleSet:
    """Split a 2-regular edge subset of ``g`` into canonical vertex-disjoint cycles."""
    adj: dict[int, list[int]] = {}
    for e in edge_subset:
        u, v = edge(*e)
        if (u, v) not in g.edges:
            raise GraphError(f"edge {(u, v)} is not an edge of the host graph")
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for v in sorted(adj):
        if len(adj[v]) != 2:
            raise NotTwoRegular(v, len(adj[v]))
    cycles = []
    done: set[int] = set()
    for start in sorted(adj):
        if start in done:
            continue
        seq = [start]
        done.add(start)
        prev, cur = start, min(adj[start])
        while cur != start:
            seq.append(cur)
            done.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(seq)
    return CycleSet.from_cycles(cycles)
