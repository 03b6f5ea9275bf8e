"""Perfect matchings by deterministic backtracking.

Matchings are ordered by their sorted pair list.  The search always matches
the smallest uncovered vertex next and tries partners in ascending order, so
the first matching found is the lexicographically least one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import Edge, Graph, edge


class NoPerfectMatching(ValueError):
    pass


@dataclass(frozen=True)
class PerfectMatching:
    pairs: tuple[Edge, ...]
    partner: tuple[int, ...]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Edge]) -> "PerfectMatching":
        canon = tuple(sorted(edge(u, v) for u, v in pairs))
        partner = [-1] * n
        for u, v in canon:
            if partner[u] != -1 or partner[v] != -1:
                raise ValueError(f"pair {(u, v)} overlaps another pair")
            partner[u], partner[v] = v, u
        if -1 in partner:
            raise ValueError(f"vertex {partner.index(-1)} is not covered")
        return cls(canon, tuple(partner))

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def verify_matching(g: Graph, pairs: PerfectMatching | Iterable[Edge]) -> bool:
    items = pairs.pairs if isinstance(pairs, PerfectMatching) else list(pairs)
    covered: set[int] = set()
    for u, v in items:
        if not g.has_edge(u, v) or u in covered or v in covered:
            return False
        covered.update((u, v))
    return len(covered) == g.n


def _even_components(g: Graph, free: list[bool]) -> bool:
    """Every component of the still-unmatched vertices must have even size."""
    seen = [False] * g.n
    for s in range(g.n):
        if not free[s] or seen[s]:
            continue
        seen[s] = True
        stack, size = [s], 0
        while stack:
            u = stack.pop()
            size += 1
            for w in g.adjacency[u]:
                if free[w] and not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if size % 2:
            return False
    return True


def iter_perfect_matchings(g: Graph) -> Iterator[PerfectMatching]:
    """All perfect matchings of ``g`` in lexicographic order of sorted pair lists."""
    n = g.n
    if n % 2:
        return
    free = [True] * n
    chosen: list[Edge] = []

    def rec(start: int) -> Iterator[PerfectMatching]:
        u = start
        while u < n and not free[u]:
            u += 1
        if u == n:
            yield PerfectMatching.from_pairs(n, chosen)
            return
        free[u] = False
        for w in g.adjacency[u]:
            if not free[w]:
                continue
            free[w] = False
            chosen.append((u, w))
            if _even_components(g, free):
                yield from rec(u + 1)
            chosen.pop()
            free[w] = True
        free[u] = True

    yield from rec(0)


def perfect_matching(g: Graph) -> PerfectMatching:
    for pm in iter_perfect_matchings(g):
        return pm
    raise NoPerfectMatching(f"graph with n={g.n}, m={g.m} has no perfect matching")


def enumerate_perfect_matchings(g: Graph, cap: int | None = None) -> list[PerfectMatching]:
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    out = []
    for pm in iter_perfect_matchings(g):
        out.append(pm)
        if cap is not None and len(out) >= cap:
            break
    return out
