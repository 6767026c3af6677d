"""Infima of graphic max-sums: the sum of girths of the final strong components."""

from __future__ import annotations

import math

import numpy as np

from .digraph import Digraph, bfs_distances_to, girth, induced_subgraph, scc, shortest_cycle
from .errors import DomainError, StructureError
from .sums import graphic_p_sum

__all__ = [
    "maxsum_infimum",
    "maxsum_witness",
    "witness_value",
    "maxsum_attained",
    "game_bound",
    "mutual_pair_game",
]


def _final_components(g):
    g = g.base
    for v, s in zip(g.vertices, g.succ):
        if not s:
            raise StructureError(f"vertex {v!r} has an empty out-neighborhood")
    if any(a == b for a, b in g.edges):
        raise StructureError("graphic min/max-sums do not admit self-loops")
    comps = scc(g).final_components()
    subs = []
    for comp in comps:
        sub = induced_subgraph(g, comp)
        if girth(sub) is None:
            # a final singleton would need a self-loop to have an out-neighbor
            raise StructureError(f"final component {comp} has no cycle")
        subs.append(sub)
    return g, subs


def maxsum_infimum(g) -> int:
    """``inf_x S_max(x|g)``: the sum of girths of the final strong components."""
    _, subs = _final_components(g)
    return sum(girth(s) for s in subs)


def maxsum_attained(g) -> bool:
    """Whether the infimum is a minimum: exactly for disjoint unions of cycles.

    Follow each vertex to an out-neighbor of largest value. The cycles of
    that map each contribute at least their length (AM-GM), one lies in
    every final component, and every other vertex adds a positive term. So
    equality forces every vertex onto a shortest cycle of a final component
    with no other edges.
    """
    g = g.base
    indeg = [0] * g.n
    for _, b in g.edge_index_pairs():
        indeg[b] += 1
    return all(len(s) == 1 for s in g.succ) and all(d == 1 for d in indeg)


def maxsum_witness(g, epsilon: float) -> np.ndarray:
    """A positive x with ``S_max(x|g) <= maxsum_infimum(g) + epsilon``.

    Each final component contributes its lexicographically first shortest
    cycle, valued 1. Every other vertex v gets ``delta**d(v)`` where d(v) is
    its distance to those cycles, so each off-cycle term is at most delta.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    g, subs = _final_components(g)
    cycle_vertices = []
    for sub in subs:
        cycle_vertices.extend(shortest_cycle(sub))
    dist = bfs_distances_to(g, cycle_vertices)
    delta = min(epsilon / (2 * g.n), 0.5)
    logd = math.log(delta)
    x = np.array([math.exp(dist[v] * logd) for v in g.vertices])
    if not np.all(x > 0):
        # underflow for very deep graphs; fall back to the largest admissible delta
        raise DomainError("witness underflows; epsilon too small for this graph depth")
    return x


def game_bound(n: int, k: int) -> int:
    """``ceil(n/k)``: the girth bound valid only if the Caccetta-Haggkvist conjecture holds."""
    if not 1 <= k < n:
        raise DomainError("need 1 <= k < n")
    return -(-n // k)


def mutual_pair_game(n: int = 40, k: int = 12):
    """A friendship digraph with n people, k friends each, containing a mutual pair.

    Person i befriends i+1..i+k (mod n), except person 2 swaps its farthest
    friend for person 1, so 1 and 2 are friends of each other.
    """
    if not 2 <= k < n:
        raise DomainError("need 2 <= k < n")
    edges = []
    for i in range(n):
        outs = [(i + r) % n for r in range(1, k + 1)]
        if i == 1:
            outs[-1] = 0
        edges.extend((str(i + 1), str(j + 1)) for j in outs)
    return Digraph(tuple(str(i + 1) for i in range(n)), tuple(edges))


def witness_value(g, epsilon: float) -> float:
    return graphic_p_sum(g, maxsum_witness(g, epsilon), math.inf)
