"""Monomial-quotient sums ``sum_u w_u y_alpha(u) / y_beta(u)`` over weighted digraphs.

In log coordinates ``t = log y`` the objective is a positive combination of
exponentials of differences, hence convex. The solver pins one coordinate per
strong component of the support (removing the scale direction) and runs a
damped Newton iteration with an Armijo line search.

The minimum is attained iff every edge lies inside a strong component. Edges
between components can be driven to zero along a recession direction, so the
infimum is then the sum of the minima over the components' internal edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .digraph import Digraph, WeightedDigraph, check_automorphism, scc
from .errors import DomainError, PreconditionError, ValidationError

__all__ = [
    "QuotientSumSpec",
    "OptReport",
    "Attainment",
    "CycleConstraint",
    "build_quotient_sum",
    "evaluate",
    "log_gradient",
    "minimize",
    "attainment_check",
    "verify_uniqueness",
    "verify_symmetry",
    "cycle_constraints",
    "constraint_residual",
    "shallit_graph",
    "mavlo_graph",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 500


@dataclass(frozen=True)
class QuotientSumSpec:
    graph: WeightedDigraph
    pin: tuple[str, float] | None = None
    alpha: np.ndarray = field(init=False, repr=False, compare=False)
    beta: np.ndarray = field(init=False, repr=False, compare=False)
    w: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.pin is not None:
            v, val = self.pin
            v = str(v)
            if v not in self.graph.index:
                raise ValidationError(f"pinned vertex {v!r} not in graph")
            if not val > 0:
                raise ValidationError("pinned value must be positive")
            object.__setattr__(self, "pin", (v, float(val)))
        for a, b in self.graph.edges:
            if a == b:
                raise ValidationError("self-loops are constant terms, not quotient edges")
        pairs = self.graph.edge_index_pairs()
        object.__setattr__(self, "alpha", np.array([a for a, _ in pairs], dtype=int))
        object.__setattr__(self, "beta", np.array([b for _, b in pairs], dtype=int))
        object.__setattr__(self, "w", np.array(self.graph.weights, dtype=float))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def vertices(self):
        return self.graph.vertices


@dataclass
class OptReport:
    value: float
    minimizer: np.ndarray | None
    attained: bool | None
    status: str  # converged | recession-detected | iteration-limit | upper-bound-only | exact
    vertices: tuple = ()
    certificate: Any = None
    iterations: int = 0
    grad_norm: float = 0.0
    notes: list = field(default_factory=list)

    def minimizer_dict(self) -> dict | None:
        if self.minimizer is None:
            return None
        return {v: float(y) for v, y in zip(self.vertices, self.minimizer)}


@dataclass(frozen=True)
class Attainment:
    attained: bool
    crossing_edges: tuple[tuple[str, str], ...] = ()
    direction: dict | None = None  # log-space direction along which the objective decreases


@dataclass(frozen=True)
class CycleConstraint:
    """A basis cycle; ``edges`` holds (edge index, +1 forward / -1 backward)."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]


def build_quotient_sum(g, pin: tuple[str, float] | None = None) -> QuotientSumSpec:
    if isinstance(g, Digraph):
        g = WeightedDigraph.unit(g)
    return QuotientSumSpec(g, pin)


def _as_array(spec, y) -> np.ndarray:
    if isinstance(y, Mapping):
        y = [y[v] for v in spec.vertices]
    arr = np.asarray(y, dtype=float)
    if arr.shape != (spec.n,):
        raise DomainError(f"expected {spec.n} values")
    if not np.all(arr > 0):
        raise DomainError("y must be strictly positive")
    return arr


def evaluate(spec: QuotientSumSpec, y) -> float:
    yv = _as_array(spec, y)
    return float(np.sum(spec.w * yv[spec.alpha] / yv[spec.beta]))


def log_gradient(spec: QuotientSumSpec, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    terms = spec.w * np.exp(t[spec.alpha] - t[spec.beta])
    grad = np.zeros(spec.n)
    np.add.at(grad, spec.alpha, terms)
    np.subtract.at(grad, spec.beta, terms)
    return grad


# ---------------------------------------------------------------------------
# attainment


def _support_components(spec):
    dec = scc(spec.graph.base)
    comp = np.array([dec.component_of[v] for v in spec.vertices], dtype=int)
    internal = comp[spec.alpha] == comp[spec.beta]
    return dec, comp, internal


def attainment_check(spec: QuotientSumSpec) -> Attainment:
    dec, comp, internal = _support_components(spec)
    if internal.all():
        return Attainment(True)
    crossing = tuple(spec.graph.edges[i] for i in np.flatnonzero(~internal))
    # condensation positions are topological: crossing edges go low -> high,
    # so t_v += s * position makes each crossing term decay like exp(-s)
    direction = {v: float(comp[i]) for i, v in enumerate(spec.vertices)}
    return Attainment(False, crossing, direction)


# ---------------------------------------------------------------------------
# Newton solver


def _newton(alpha, beta, w, n, anchor, t0, tol, max_iter):
    """Minimize sum w exp(t_a - t_b) over t with t[anchor] held fixed.

    Requires a strongly connected support on ``range(n)``.
    """
    t = np.array(t0, dtype=float)
    free = np.ones(n, dtype=bool)
    free[anchor] = False

    def f_g_h(t, hess=True):
        terms = w * np.exp(t[alpha] - t[beta])
        g = np.zeros(n)
        np.add.at(g, alpha, terms)
        np.subtract.at(g, beta, terms)
        if not hess:
            return terms.sum(), g, None
        H = np.zeros((n, n))
        np.add.at(H, (alpha, alpha), terms)
        np.add.at(H, (beta, beta), terms)
        np.subtract.at(H, (alpha, beta), terms)
        np.subtract.at(H, (beta, alpha), terms)
        return terms.sum(), g, H

    fval, g, H = f_g_h(t)
    it = 0
    status = "converged"
    while True:
        gf = g[free]
        gnorm = float(np.max(np.abs(gf))) if gf.size else 0.0
        if gnorm <= tol:
            break
        if it >= max_iter:
            status = "iteration-limit"
            break
        it += 1
        Hf = H[np.ix_(free, free)]
        try:
            step = -np.linalg.solve(Hf, gf)
            if not np.all(np.isfinite(step)) or step @ gf >= 0:
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            step = -gf
        slope = float(step @ gf)
        lam = 1.0
        noise = 16 * np.finfo(float).eps * abs(fval)
        while True:
            trial = t.copy()
            trial[free] += lam * step
            fnew, gnew, Hnew = f_g_h(trial)
            if fnew <= fval + 1e-4 * lam * slope:
                break
            # near the optimum f is flat below rounding; judge by the gradient
            if fnew <= fval + noise and np.max(np.abs(gnew[free])) < gnorm:
                break
            lam *= 0.5
            if lam < 1e-12:
                break
        if lam < 1e-12:
            status = "converged" if gnorm <= 1e3 * tol else "iteration-limit"
            break
        t, fval, g, H = trial, fnew, gnew, Hnew
    fval, g, _ = f_g_h(t, hess=False)
    gf = g[free]
    gnorm = float(np.max(np.abs(gf))) if gf.size else 0.0
    return t, float(fval), it, gnorm, status


def minimize(
    spec: QuotientSumSpec,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int | None = 0,
    start=None,
) -> OptReport:
    """Minimize the quotient sum; reports the infimum when it is not attained.

    The minimizer is normalized so that, in every strong component of the
    support, the first vertex (or the pinned vertex) equals 1 (or its pinned
    value). Vertices touched by no internal edge are set to 1.
    """
    dec, comp, internal = _support_components(spec)
    n = spec.n
    if start is not None:
        t0 = np.log(_as_array(spec, start))
    else:
        t0 = np.random.default_rng(seed).uniform(-1.0, 1.0, n)
    t = np.zeros(n)
    total = 0.0
    iters = 0
    gmax = 0.0
    status = "converged"
    pin_idx = spec.graph.index[spec.pin[0]] if spec.pin else None
    for c in range(len(dec.components)):
        members = np.flatnonzero(comp == c)
        sel = internal & (comp[spec.alpha] == c)
        if not sel.any():
            continue
        local = {int(v): i for i, v in enumerate(members)}
        a = np.array([local[int(v)] for v in spec.alpha[sel]])
        b = np.array([local[int(v)] for v in spec.beta[sel]])
        anchor = local[pin_idx] if pin_idx is not None and pin_idx in local else 0
        t_loc, fval, it, gnorm, st = _newton(
            a, b, spec.w[sel], len(members), anchor, t0[members], tol, max_iter
        )
        t_loc = t_loc - t_loc[anchor]
        if pin_idx is not None and pin_idx in local:
            t_loc = t_loc + math.log(spec.pin[1])
        t[members] = t_loc
        total += fval
        iters += it
        gmax = max(gmax, gnorm)
        if st != "converged":
            status = st
    if pin_idx is not None and not internal[(spec.alpha == pin_idx) | (spec.beta == pin_idx)].any():
        t[pin_idx] = math.log(spec.pin[1])
    attained = bool(internal.all())
    cert = None
    if not attained:
        att = attainment_check(spec)
        cert = {"crossing_edges": list(att.crossing_edges), "direction": att.direction}
        if status == "converged":
            status = "recession-detected"
    return OptReport(
        value=total,
        minimizer=np.exp(t),
        attained=attained and status == "converged",
        status=status,
        vertices=spec.vertices,
        certificate=cert,
        iterations=iters,
        grad_norm=gmax,
    )


def _rel_discrepancy(y1, y2) -> float:
    return float(np.max(np.abs(y1 - y2) / np.maximum(np.abs(y2), 1e-300)))


def verify_uniqueness(spec: QuotientSumSpec, trials: int = 10, seed: int = 0, tol: float = 1e-6):
    """Solve from ``trials`` independent random starts; compare normalized minimizers.

    Returns ``(all_agree, max_relative_discrepancy)``.
    """
    if not attainment_check(spec).attained:
        raise PreconditionError("minimum not attained; uniqueness is undefined")
    seeds = np.random.SeedSequence(seed).generate_state(trials)
    reports = [minimize(spec, seed=int(s)) for s in seeds]
    for r in reports:
        if r.status != "converged":
            raise RuntimeError(f"solver did not converge: {r.status}")
    ref = reports[0].minimizer
    disc = max((_rel_discrepancy(r.minimizer, ref) for r in reports[1:]), default=0.0)
    return disc <= tol, disc


def verify_symmetry(spec: QuotientSumSpec, perm, tol: float = 1e-6, seed: int = 0) -> bool:
    """True iff the minimizer is invariant under the automorphism ``perm``."""
    if not check_automorphism(spec.graph, perm):
        raise PreconditionError("permutation is not a weight-preserving automorphism")
    dec = scc(spec.graph.base)
    if len(dec.components) != 1:
        raise PreconditionError("symmetry check needs a strongly connected graph")
    if not isinstance(perm, Mapping):
        perm = dict(zip(spec.vertices, perm))
    rep = minimize(spec, seed=seed)
    y = rep.minimizer
    idx = spec.graph.index
    image = np.array([y[idx[str(perm[v])]] for v in spec.vertices])
    return _rel_discrepancy(image, y) <= tol


# ---------------------------------------------------------------------------
# cycle basis


def cycle_constraints(spec: QuotientSumSpec) -> list[CycleConstraint]:
    """Fundamental cycles of the underlying undirected multigraph.

    Each cycle L yields the constraint ``prod z_u^(+-1) = 1`` on the edge
    ratios ``z_u = y_alpha / y_beta``; the basis has ``|E| - |V| + #components``
    elements.
    """
    n = spec.n
    adj = [[] for _ in range(n)]
    for e, (a, b) in enumerate(zip(spec.alpha, spec.beta)):
        adj[a].append((b, e, +1))
        adj[b].append((a, e, -1))
    parent = [None] * n  # (parent vertex, edge index, sign when walking parent -> child)
    depth = [-1] * n
    tree_edges = set()
    for root in range(n):
        if depth[root] != -1:
            continue
        depth[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v, e, s in adj[u]:
                if depth[v] == -1:
                    depth[v] = depth[u] + 1
                    parent[v] = (u, e, s)
                    tree_edges.add(e)
                    stack.append(v)

    def up_path(v):
        """Vertices from v up to its tree root, inclusive."""
        out = [v]
        while parent[v] is not None:
            v = parent[v][0]
            out.append(v)
        return out

    basis = []
    for e, (a, b) in enumerate(zip(spec.alpha, spec.beta)):
        if e in tree_edges:
            continue
        a, b = int(a), int(b)
        pa, pb = up_path(a), up_path(b)
        on_a = set(pa)
        lca = next(v for v in pb if v in on_a)
        # a -> b along e, b up to lca (child -> parent flips orientation), lca down to a
        edges = [(e, +1)]
        edges += [(parent[v][1], -parent[v][2]) for v in pb[: pb.index(lca)]]
        edges += [(parent[v][1], parent[v][2]) for v in reversed(pa[: pa.index(lca)])]
        verts = [a]
        for ed, sgn in edges[:-1]:
            verts.append(int(spec.beta[ed]) if sgn > 0 else int(spec.alpha[ed]))
        basis.append(CycleConstraint(tuple(spec.vertices[v] for v in verts), tuple(edges)))
    return basis


def constraint_residual(spec: QuotientSumSpec, y, basis=None) -> float:
    """Max over basis cycles of ``|log prod z_u^(+-1)|`` at ``z_u = y_alpha / y_beta``."""
    yv = _as_array(spec, y)
    logz = np.log(yv[spec.alpha]) - np.log(yv[spec.beta])
    basis = cycle_constraints(spec) if basis is None else basis
    worst = 0.0
    for cyc in basis:
        s = sum(sign * logz[e] for e, sign in cyc.edges)
        worst = max(worst, abs(s))
    return worst


# ---------------------------------------------------------------------------
# named instances


def shallit_graph(n: int) -> WeightedDigraph:
    """Vertices 0..n; edges j->0, 0->j (j = 1..n) and j->j+1 (j < n); unit weights."""
    if n < 1:
        raise DomainError("n must be >= 1")
    edges = []
    for j in range(1, n + 1):
        edges.append((str(j), "0"))
        edges.append(("0", str(j)))
    for j in range(1, n):
        edges.append((str(j), str(j + 1)))
    g = Digraph.from_edges(edges, vertices=[str(i) for i in range(n + 1)])
    return WeightedDigraph.unit(g)


def mavlo_graph(x: float) -> WeightedDigraph:
    """Complete digraph on A, B, C: weight x^2 on B->A, C->B, A->C and 1 otherwise."""
    if not x > 0:
        raise DomainError("x must be positive")
    x2 = float(x) * float(x)
    triples = [
        ("A", "B", 1.0), ("B", "C", 1.0), ("C", "A", 1.0),
        ("B", "A", x2), ("C", "B", x2), ("A", "C", x2),
    ]
    return WeightedDigraph.from_weighted_edges(triples, vertices=["A", "B", "C"])
