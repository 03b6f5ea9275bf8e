"""Small named graphs used as fixtures and micro-cases."""

from __future__ import annotations

from .graph import Graph, from_edge_list


def k4() -> Graph:
    return from_edge_list(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def prism() -> Graph:
    """Triangular prism: triangles 012 and 345 joined by rungs 03, 14, 25."""
    return from_edge_list(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])


def k33() -> Graph:
    return from_edge_list(6, [(a, b) for a in range(3) for b in range(3, 6)])


def petersen() -> Graph:
    """Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram on 5..9."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def cycle(n: int) -> Graph:
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def two_triangles_bridged() -> Graph:
    return from_edge_list(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])


def bridged_cubic() -> Graph:
    """Smallest cubic graph with a bridge (n=10).

    Each side is K4 minus the edge ``ab`` with ``a`` and ``b`` joined to a hub;
    the hubs 8 and 9 are joined by the bridge.
    """
    edges = []
    for base, hub in ((0, 8), (4, 9)):
        a, b, c, d = base, base + 1, base + 2, base + 3
        edges += [(a, c), (a, d), (b, c), (b, d), (c, d), (a, hub), (b, hub)]
    edges.append((8, 9))
    return from_edge_list(10, edges)
