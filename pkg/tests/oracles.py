"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from qcsums.digraph import Digraph


def simple_cycles_min_length(g) -> int | None:
    """Shortest directed cycle by DFS over simple paths (exponential; small graphs)."""
    n = g.n
    best = None
    for s in range(n):
        stack = [(s, (s,))]
        while stack:
            v, path = stack.pop()
            for w in g.succ[v]:
                if w == s:
                    L = len(path)
                    best = L if best is None else min(best, L)
                elif w > s and w not in path and (best is None or len(path) + 1 < best):
                    stack.append((w, path + (w,)))
    return best


def reachability(g) -> np.ndarray:
    """Boolean reflexive-transitive closure by Warshall's algorithm."""
    n = g.n
    R = np.eye(n, dtype=bool)
    for v, s in enumerate(g.succ):
        R[v, list(s)] = True
    for k in range(n):
        R |= R[:, [k]] & R[[k], :]
    return R


def components_by_reachability(g) -> set[frozenset]:
    R = reachability(g)
    mutual = R & R.T
    return {frozenset(g.vertices[j] for j in np.nonzero(mutual[i])[0]) for i in range(g.n)}


def random_digraph(rng, n, p, require_strong=False, max_tries=200):
    """Erdos-Renyi digraph on '0'..'n-1' without loops, every out-degree >= 1."""
    from qcsums.digraph import is_strongly_connected

    for _ in range(max_tries):
        A = rng.random((n, n)) < p
        np.fill_diagonal(A, False)
        for v in range(n):
            if not A[v].any():
                choices = [w for w in range(n) if w != v]
                A[v, rng.choice(choices)] = True
        edges = [(str(a), str(b)) for a in range(n) for b in range(n) if A[a, b]]
        g = Digraph(tuple(str(i) for i in range(n)), tuple(edges))
        if not require_strong or is_strongly_connected(g):
            return g
    raise RuntimeError("could not draw a strongly connected graph")


def staircase_nested(x: float, n: int, grid: int = 400) -> float:
    """F_n(x) through the 1-D recursion F_n(x) = inf_t (F_{n-1}(t) + x/(t+1)).

    Each inner minimization is a dense log-grid scan followed by bounded
    Brent polishing; the recursion is evaluated naively (no memoization
    across different x), which is fine for n <= 4.
    """
    if n == 1:
        return x

    def obj(t):
        return staircase_nested(t, n - 1, grid) + x / (t + 1.0)

    ts = np.concatenate([[0.0], np.geomspace(1e-6, max(x, 1.0), grid)])
    vals = [obj(t) for t in ts]
    i = int(np.argmin(vals))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]
    if hi > lo:
        res = minimize_scalar(obj, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        return min(vals[i], float(res.fun))
    return vals[i]


def f_direct(x: float, nmax: int = 400) -> float:
    return min(n * x ** (1.0 / n) for n in range(1, nmax + 1))


def direct_log_minimize(fun, n, rng, starts=8, spread=1.0):
    """Multi-start BFGS on a function of log-coordinates (first fixed at 0)."""
    best = math.inf
    for _ in range(starts):
        z0 = rng.uniform(-spread, spread, n - 1)
        res = minimize(lambda z: fun(np.concatenate([[0.0], z])), z0, method="BFGS",
                       options={"gtol": 1e-12, "maxiter": 10_000})
        best = min(best, float(res.fun))
    return best


def all_digraphs_strong(n):
    """Every strongly connected labelled digraph on n vertices (n <= 3)."""
    from qcsums.digraph import is_strongly_connected

    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for mask in itertools.product((0, 1), repeat=len(pairs)):
        edges = [(str(a), str(b)) for (a, b), m in zip(pairs, mask) if m]
        if not edges:
            continue
        g = Digraph(tuple(str(i) for i in range(n)), tuple(edges))
        if all(g.succ) and is_strongly_connected(g):
            yield g
