"""Small graphs that recur in tests, demos and the CLI."""

from __future__ import annotations

from .digraph import Digraph

__all__ = ["mutual_star_graph", "six_vertex_graph", "cycle_graph", "MUTUAL_STAR_EDGES", "SIX_VERTEX_EDGES"]

# x1/x3 + x2/x3 + x3/min(x1, x2)
MUTUAL_STAR_EDGES = (("1", "3"), ("2", "3"), ("3", "1"), ("3", "2"))

# x1/x2 + x2/max(x3,x4) + x3/max(x4,x5) + x4/max(x1,x6) + x5/max(x1,x2,x4) + x6/max(x3,x5)
SIX_VERTEX_EDGES = (
    ("1", "2"),
    ("2", "3"), ("2", "4"),
    ("3", "4"), ("3", "5"),
    ("4", "1"), ("4", "6"),
    ("5", "1"), ("5", "2"), ("5", "4"),
    ("6", "3"), ("6", "5"),
)


def _ordered(edges, n):
    return Digraph(tuple(str(i) for i in range(1, n + 1)), tuple(edges))


def mutual_star_graph() -> Digraph:
    return _ordered(MUTUAL_STAR_EDGES, 3)


def six_vertex_graph() -> Digraph:
    return _ordered(SIX_VERTEX_EDGES, 6)


def cycle_graph(n: int) -> Digraph:
    """Directed cycle 1 -> 2 -> ... -> n -> 1."""
    return Digraph.from_edges([(str(i), str(i % n + 1)) for i in range(1, n + 1)])
