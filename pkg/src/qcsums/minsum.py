"""Exact minimization of graphic min-sums over preferential arrangements.

A candidate minimizer x induces an ordered partition of V into blocks of
equal values, ranked by value. Inside the open cone of vectors inducing a
fixed arrangement, every term ``x_v / min_{w in out(v)} x_w`` is the monomial
quotient ``y_{rank(v)} / y_{nu(v)}`` with ``nu(v)`` the lowest rank among the
out-neighbors of v. So the min-sum restricted to that cone is a quotient sum
over blocks, and the global minimum is the least minimum over arrangements
whose optimal block values respect the strict rank order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.optimize import minimize as sp_minimize
from scipy.optimize import minimize_scalar

from .digraph import Digraph, WeightedDigraph, _tarjan, is_strongly_connected
from .errors import CapacityError, DomainError, StructureError
from .gp import OptReport, QuotientSumSpec, _newton
from .sums import graphic_p_sum

__all__ = [
    "OrderedPartition",
    "MinSumCertificate",
    "fubini",
    "enumerate_ordered_partitions",
    "block_reduction",
    "minsum_exact",
    "minsum_oracle",
    "extremal_minsum_value",
    "extremal_minsum_k",
    "extremal_lower_bound",
    "ks_gap",
]

DEFAULT_CAP = 8
ORDER_RTOL = 1e-9  # consecutive block values must differ by this factor
_RECESSION_DEPTH = 60.0  # log-gap used to realize a vanishing crossing term


@dataclass(frozen=True)
class OrderedPartition:
    """Blocks in rank order (rank 0 holds the smallest value)."""

    blocks: tuple[tuple[str, ...], ...]
    block_of: dict
    nu: dict

    @classmethod
    def for_graph(cls, g, blocks) -> "OrderedPartition":
        blocks = tuple(tuple(str(v) for v in b) for b in blocks)
        block_of = {v: r for r, b in enumerate(blocks) for v in b}
        if sorted(block_of) != sorted(g.vertices) or sum(map(len, blocks)) != g.n:
            raise DomainError("blocks must partition the vertex set")
        nu = {}
        for v in g.vertices:
            outs = g.out_neighbors(v)
            if not outs:
                raise StructureError(f"vertex {v!r} has an empty out-neighborhood")
            nu[v] = min(block_of[w] for w in outs)
        return cls(blocks, block_of, nu)

    def encoding(self, g) -> tuple[int, ...]:
        return tuple(self.block_of[v] for v in g.vertices)


@dataclass(frozen=True)
class MinSumCertificate:
    partition: OrderedPartition
    block_values: tuple[float, ...]  # by rank, strictly increasing, smallest = 1
    value: float


def fubini(n: int) -> int:
    """Number of ordered set partitions of an n-set."""
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(math.comb(m, j) * a[m - j] for j in range(1, m + 1)))
    return a[n]


def enumerate_ordered_partitions(n: int, cap: int = DEFAULT_CAP) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every ordered partition of ``range(n)`` once, as a tuple of blocks."""
    if n > cap:
        raise CapacityError(f"n = {n} exceeds enumeration cap {cap} (Fubini({n}) = {fubini(n)})")
    if n < 0:
        raise DomainError("n must be nonnegative")
    full = (1 << n) - 1

    def rec(remaining):
        if remaining == 0:
            yield ()
            return
        sub = remaining
        while sub:
            block = tuple(i for i in range(n) if sub >> i & 1)
            for rest in rec(remaining & ~sub):
                yield (block,) + rest
            sub = (sub - 1) & remaining

    if n == 0:
        yield ()
        return
    yield from rec(full)


def _check_graph(g):
    g = g.base
    for v, s in zip(g.vertices, g.succ):
        if not s:
            raise StructureError(f"vertex {v!r} has an empty out-neighborhood")
    if any(a == b for a, b in g.edges):
        raise StructureError("graphic min/max-sums do not admit self-loops")
    return g


def block_reduction(g, part: OrderedPartition) -> tuple[QuotientSumSpec, int]:
    """Quotient sum over blocks plus the constant contributed by same-block terms.

    Vertex v contributes the edge ``rank(v) -> nu(v)``; parallel contributions
    are merged into one weighted edge.
    """
    g = _check_graph(g)
    weights = {}
    offset = 0
    for v in g.vertices:
        a, b = part.block_of[v], part.nu[v]
        if a == b:
            offset += 1
        else:
            weights[(a, b)] = weights.get((a, b), 0) + 1
    ids = [f"B{r}" for r in range(len(part.blocks))]
    triples = [(ids[a], ids[b], float(w)) for (a, b), w in sorted(weights.items())]
    base = Digraph(tuple(ids), tuple((a, b) for a, b, _ in triples))
    wg = WeightedDigraph(base, tuple(w for _, _, w in triples))
    return QuotientSumSpec(wg), offset


# ---------------------------------------------------------------------------
# candidate evaluation


@dataclass
class _Candidate:
    value: float
    attained: bool
    feasible: bool
    logvals: np.ndarray | None


def _bellman_ford(m, constraints):
    """Solve ``x_i - x_j <= c`` constraints; returns x or None if infeasible."""
    dist = np.zeros(m)
    for _ in range(m + 1):
        changed = False
        for i, j, c in constraints:
            if dist[j] + c < dist[i] - 1e-15:
                dist[i] = dist[j] + c
                changed = True
        if not changed:
            return dist
    return None


def _solve_candidate(m, edges, weights, tol):
    """Minimize a block quotient sum and test the strict rank order."""
    a = np.array([e[0] for e in edges], dtype=int)
    b = np.array([e[1] for e in edges], dtype=int)
    w = np.array(weights, dtype=float)
    succ = [[] for _ in range(m)]
    for i, j in edges:
        succ[i].append(j)
    label, ncomp = _tarjan(m, succ)
    label = np.array(label)
    internal = label[a] == label[b] if len(edges) else np.zeros(0, dtype=bool)
    s = np.zeros(m)
    total = 0.0
    for c in range(ncomp):
        members = np.flatnonzero(label == c)
        sel = internal & (label[a] == c) if len(edges) else internal
        if not sel.any():
            continue
        local = {int(v): i for i, v in enumerate(members)}
        la = np.array([local[int(v)] for v in a[sel]])
        lb = np.array([local[int(v)] for v in b[sel]])
        t, fval, _, _, st = _newton(la, lb, w[sel], len(members), 0, np.zeros(len(members)), tol, 500)
        s[members] = t - t[0]
        total += fval
    attained = bool(internal.all())
    delta = math.log1p(ORDER_RTOL)
    cons = []
    for r in range(m - 1):
        cr, cn = label[r], label[r + 1]
        gap = s[r + 1] - s[r]
        if cr == cn:
            if gap < delta:
                return _Candidate(total, attained, False, None)
        else:
            # lambda_cr - lambda_cn <= gap - delta
            cons.append((cr, cn, gap - delta))
    for e in np.flatnonzero(~internal):
        ca, cb = label[a[e]], label[b[e]]
        # t_a - t_b <= -depth
        cons.append((ca, cb, s[b[e]] - s[a[e]] - _RECESSION_DEPTH))
    lam = _bellman_ford(ncomp, cons)
    if lam is None:
        return _Candidate(total, attained, False, None)
    logvals = s + lam[label]
    return _Candidate(total, attained, True, logvals - logvals.min())


def minsum_exact(g, cap: int = DEFAULT_CAP, tol: float = 1e-12) -> OptReport:
    """Global minimum (or infimum) of ``S_min(x|g)`` by arrangement enumeration.

    Candidates whose reduced quotient sum is not attained contribute their
    infimum; the report is ``attained`` when an attained candidate achieves
    the least value. Ties go to the lexicographically smallest rank vector.
    """
    g = _check_graph(g)
    n = g.n
    if n > cap:
        raise CapacityError(f"|V| = {n} exceeds cap {cap}")
    succ = g.succ
    cache = {}
    best_att = None  # (value, encoding, blocks, candidate)
    best_rec = None
    for blocks in enumerate_ordered_partitions(n, cap):
        m = len(blocks)
        rank = [0] * n
        for r, blk in enumerate(blocks):
            for v in blk:
                rank[v] = r
        agg = {}
        offset = 0
        for v in range(n):
            nu = min(rank[w] for w in succ[v])
            if nu == rank[v]:
                offset += 1
            else:
                agg[(rank[v], nu)] = agg.get((rank[v], nu), 0) + 1
        key = (m, offset, tuple(sorted(agg.items())))
        cand = cache.get(key)
        if cand is None:
            edges = [e for e, _ in key[2]]
            cand = _solve_candidate(m, edges, [c for _, c in key[2]], tol)
            cache[key] = cand
        if not cand.feasible:
            continue
        value = offset + cand.value
        enc = tuple(rank)
        entry = (value, enc, blocks, cand)
        if cand.attained:
            if best_att is None or (value, enc) < best_att[:2]:
                best_att = entry
        elif best_rec is None or (value, enc) < best_rec[:2]:
            best_rec = entry

    strongly = is_strongly_connected(g)
    notes = []
    if best_att is not None and (best_rec is None or best_att[0] <= best_rec[0] + 1e-12):
        chosen, attained, status = best_att, True, "converged"
    elif best_rec is not None:
        chosen, attained, status = best_rec, False, "recession-detected"
        if strongly:
            status = "inconsistent"
            notes.append("strongly connected graph without an attained candidate")
    else:  # pragma: no cover - the all-equal arrangement is always feasible
        raise RuntimeError("no feasible arrangement")
    value, _, blocks, cand = chosen
    part = OrderedPartition.for_graph(g, [[g.vertices[v] for v in b] for b in blocks])
    yb = np.exp(cand.logvals)
    x = np.array([yb[part.block_of[v]] for v in g.vertices])
    x = x / x[0]
    cert = MinSumCertificate(part, tuple(float(v) for v in yb / yb[0]), float(value))
    if attained:
        direct = graphic_p_sum(g, x, -math.inf)
        notes.append(f"reconstruction error {abs(direct - value):.3e}")
    return OptReport(
        value=float(value),
        minimizer=x,
        attained=attained,
        status=status,
        vertices=g.vertices,
        certificate=cert,
        iterations=len(cache),
        notes=notes,
    )


# ---------------------------------------------------------------------------
# numeric oracle


def minsum_oracle(g, restarts: int = 16, seed: int = 0, polish: int = 3) -> float:
    """Best value of a direct Nelder-Mead search on ``log x`` (an upper bound).

    The first coordinate is fixed at 0; each restart is re-polished from its
    own endpoint to get past kinks where the minimum switches.
    """
    g = _check_graph(g)
    n = g.n
    if n == 1:  # pragma: no cover - a single vertex needs a self-loop
        return 1.0
    rng = np.random.default_rng(seed)
    cols = [list(s) for s in g.succ]

    def f(z):
        x = np.exp(np.concatenate(([0.0], z)))
        return float(sum(x[v] / x[c].min() for v, c in enumerate(cols)))

    best = math.inf
    opts = {"xatol": 1e-11, "fatol": 1e-14, "maxfev": 20000 * n, "adaptive": True}
    for _ in range(restarts):
        z = rng.uniform(-2.0, 2.0, n - 1)
        for _ in range(polish):
            res = sp_minimize(f, z, method="Nelder-Mead", options=opts)
            z = res.x
        best = min(best, res.fun)
    return best


# ---------------------------------------------------------------------------
# extremal-graph formulas


def _check_n3(n):
    if n < 3:
        raise DomainError("n must be >= 3")


def extremal_minsum_k(n: int) -> int:
    _check_n3(n)
    ks = np.arange(1, n - 1)
    return int(ks[np.argmin((ks + 1) * (n - ks) ** (1.0 / (ks + 1)))])


def extremal_minsum_value(n: int) -> float:
    """``min_{1<=k<=n-2} (k+1) (n-k)^(1/(k+1))``, the minimal min-sum of the extremal graph."""
    _check_n3(n)
    ks = np.arange(1, n - 1, dtype=float)
    return float(np.min((ks + 1) * (n - ks) ** (1.0 / (ks + 1))))


def extremal_lower_bound(n: int) -> float:
    """``e * ln(n + 1 - ln(n + 1))``; strict lower bound for strongly connected graphs."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return math.e * math.log(n + 1 - math.log(n + 1))


def _ks_objective(x, r):
    return math.log(x) + math.log(r - x) / x


def ks_gap(r: float, grid: int = 2000, sharp: bool = False) -> float:
    """``min_{0<x<=r-1} (ln x + ln(r-x)/x) - ln ln(r - ln r)``.

    With ``sharp=True`` the subtracted bound is ``1 + ln ln(r - ln r)``, the
    form equivalent to ``e ln(r - ln r)`` bounding the extremal min-sum; that
    gap tends to 0 as r grows while the plain gap tends to 1.

    The minimum is bracketed on a log grid and refined by golden section.
    """
    if r < 2:
        raise DomainError("r must be >= 2")
    xs = np.geomspace(1e-6, r - 1, grid)
    vals = np.log(xs) + np.log(r - xs) / xs
    i = int(np.argmin(vals))
    best = float(vals[i])
    if 0 < i < grid - 1:
        res = minimize_scalar(
            _ks_objective, bracket=(xs[i - 1], xs[i], xs[i + 1]), args=(r,),
            method="golden", tol=1e-12,
        )
        best = min(best, float(res.fun))
    bound = math.log(math.log(r - math.log(r)))
    return best - bound - (1.0 if sharp else 0.0)
