"""The functional equation ``F(x) = min_{0<y<x-1} (F(y) + x/(y+1))`` with
``F(x) = x`` on [0, 1], its finite staircase versions ``F_n``, the AM-GM curve
``f(x) = min_n n x^(1/n)``, Shallit's ``g_n`` and the variable-window minimum
``A_{n,*}``.

Staircases are solved by shooting on the stationarity recurrence
``t_{j+1} = (t_j + 1)^2 / (t_{j-1} + 1)``, ``t_0 = 0``. The last link
``t_n`` is not monotone in ``t_1``, so every root of ``t_n(t_1) = x`` is
found and the cheapest chain is kept.
"""

from __future__ import annotations

import csv
import functools
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize as sp_minimize, minimize_scalar

from .cyclic_bounds import BOUNDS
from .errors import CapacityError, DomainError
from .gp import OptReport, build_quotient_sum, minimize, shallit_graph
from .sums import WindowSum, cyclic_windows

__all__ = [
    "FuncEqTable",
    "StaircaseResult",
    "build_F_table",
    "refinement_error",
    "staircase_min",
    "staircase_value",
    "optimal_staircase",
    "F_exact",
    "F_residual",
    "nearest_int_distance",
    "amgm_f",
    "amgm_f_residual",
    "shallit_min",
    "shallit_direct",
    "a_n_star",
    "a_n_star_bruteforce",
]

X_MAX_CAP = 1e5
UNIT_POINTS = 1024
POINTS_PER_DECADE = 4096


# ---------------------------------------------------------------------------
# table


@dataclass(frozen=True)
class FuncEqTable:
    grid: np.ndarray
    values: np.ndarray
    tolerance: float
    provenance: dict = field(default_factory=dict)

    @property
    def x_max(self) -> float:
        return float(self.grid[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0) or np.any(x > self.x_max * (1 + 1e-12)):
            raise DomainError(f"x outside table range [0, {self.x_max}]")
        out = np.interp(x, self.grid, self.values)
        return float(out) if out.ndim == 0 else out

    def spacing_at(self, x: float) -> float:
        """Relative grid spacing around x."""
        i = int(np.clip(np.searchsorted(self.grid, x), 1, len(self.grid) - 1))
        return float((self.grid[i] - self.grid[i - 1]) / max(x, 1.0))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "F"])
            for x, v in zip(self.grid, self.values):
                w.writerow([repr(float(x)), repr(float(v))])


def _grid(x_max: float, ppd: int) -> np.ndarray:
    unit = np.linspace(0.0, 1.0, UNIT_POINTS)
    if x_max <= 1:
        return unit
    m = max(int(math.ceil(math.log10(x_max) * ppd)), 1)
    return np.concatenate([unit, np.geomspace(1.0, x_max, m + 1)[1:]])


def build_F_table(x_max: float, tol: float = 1e-6, points_per_decade: int = POINTS_PER_DECADE) -> FuncEqTable:
    """Tabulate F on ``[0, x_max]`` by dynamic programming.

    Each x > 1 takes the best grid candidate y and then polishes y by a
    bounded scalar search over three cells of the piecewise-linear F.
    """
    if not x_max >= 1:
        raise DomainError("x_max must be >= 1")
    if not tol > 0:
        raise DomainError("tol must be positive")
    if x_max > X_MAX_CAP:
        raise CapacityError(f"x_max above the grid cap {X_MAX_CAP:g}")
    if points_per_decade < 16:
        raise DomainError("points_per_decade too small")
    grid = _grid(x_max, points_per_decade)
    F = grid.copy()
    shift = 1.0 / (grid + 1.0)
    first = UNIT_POINTS
    for i in range(first, len(grid)):
        x = grid[i]
        hi = x - 1.0
        J = int(np.searchsorted(grid, hi, side="left"))  # grid[1:J] lie in (0, x-1)
        best_val, best_y = x, 0.0  # closure point y -> 0
        if J > 1:
            cand = F[1:J] + x * shift[1:J]
            j = int(np.argmin(cand)) + 1
            if cand[j - 1] < best_val:
                a = grid[j - 1]
                b = min(grid[j + 1], hi) if j + 1 < J else hi
                gx, fx = grid[:i], F[:i]
                res = minimize_scalar(
                    lambda y: np.interp(y, gx, fx) + x / (y + 1.0),
                    bounds=(a, b), method="bounded", options={"xatol": 1e-12 * max(1.0, b)},
                )
                best_val, best_y = min((cand[j - 1], grid[j]), (float(res.fun), float(res.x)))
        else:
            # no grid point inside (0, x-1): use the exact piece y + x/(y+1)
            y = math.sqrt(x) - 1.0
            if 0 < y < hi:
                best_val, best_y = 2.0 * math.sqrt(x) - 1.0, y
        F[i] = best_val
    return FuncEqTable(
        grid=grid, values=F, tolerance=tol,
        provenance={"x_max": float(x_max), "unit_points": UNIT_POINTS,
                    "points_per_decade": points_per_decade, "refine_cells": 3},
    )


def refinement_error(table: FuncEqTable) -> float:
    """Max change of F at the table's points when the log grid is doubled."""
    fine = build_F_table(table.x_max, table.tolerance, 2 * table.provenance["points_per_decade"])
    return float(np.max(np.abs(fine(table.grid) - table.values)))


# ---------------------------------------------------------------------------
# staircases


@dataclass(frozen=True)
class StaircaseResult:
    n: int
    x: float
    value: float
    chain: tuple[float, ...]
    boundary: bool = False

    @property
    def full_chain(self) -> tuple[float, ...]:
        """The chain with the end point x appended."""
        return self.chain + (self.x,)


def staircase_value(chain, x: float) -> float:
    """``t_1 + t_2/(t_1+1) + ... + x/(t_{n-1}+1)``."""
    t = [0.0, *[float(v) for v in chain], float(x)]
    return float(sum(t[j] / (t[j - 1] + 1.0) for j in range(1, len(t))))


def _shoot(t1, n: int):
    """t_0..t_n from the stationarity recurrence (t1 may be an array)."""
    t1 = np.asarray(t1, dtype=float)
    t = [np.zeros_like(t1), t1]
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n - 1):
            nxt = (t[-1] + 1.0) ** 2 / (t[-2] + 1.0)
            t.append(np.where(np.isnan(nxt), np.inf, nxt))  # inf/inf after overflow
    return t


SHOOT_SCAN = 4096


def _interior(x: float, n: int) -> list[tuple[float, tuple[float, ...]]]:
    """Every stationary chain of F_n ending at x, with its value.

    ``t_n(t_1)`` is not monotone for n >= 5 or so (it dips below its value at
    t_1 = 0), so all sign changes on a scan of ``0 <= t_1 <= sqrt(x)`` are
    refined. The chain is increasing, so ``t_n >= (t_1 + 1)^2`` bounds t_1.
    """
    hi = math.sqrt(x)
    scan = np.concatenate([[0.0], np.geomspace(1e-14 * min(1.0, hi), hi, SHOOT_SCAN)])
    r = _shoot(scan, n)[n] - x
    out, roots = [], []
    for i in np.nonzero(np.sign(r[:-1]) * np.sign(r[1:]) < 0)[0]:
        roots.append(brentq(lambda s: float(_shoot(s, n)[n]) - x, scan[i], scan[i + 1],
                            xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500))
    for t1 in roots:
        chain = tuple(float(v) for v in _shoot(t1, n)[1:n])
        out.append((staircase_value(chain, x), chain))
    return out


@functools.lru_cache(maxsize=None)
def _min_reach(n: int) -> float:
    """Smallest x that admits an interior stationary chain of length n."""
    scan = np.concatenate([[0.0], np.geomspace(1e-14, 1e3, SHOOT_SCAN)])
    return float(np.min(_shoot(scan, n)[n]))


def staircase_min(x: float, n: int) -> StaircaseResult:
    """``F_n(x) = inf_{t >= 0} (t_1 + t_2/(t_1+1) + ... + x/(t_{n-1}+1))``.

    When the infimum sits on ``t_1 = 0`` the problem collapses to
    ``F_{n-1}(x)``; the chain then starts with 0 and ``boundary`` is set.
    """
    if n < 1 or int(n) != n:
        raise DomainError("n must be a positive integer")
    if not x > 0:
        raise DomainError("x must be positive")
    n, x = int(n), float(x)
    if n == 1:
        return StaircaseResult(1, x, x, ())
    prev = staircase_min(x, n - 1)
    best = StaircaseResult(n, x, prev.value, (0.0,) + prev.chain, True)
    for val, chain in _interior(x, n):
        if val < best.value:
            best = StaircaseResult(n, x, val, chain)
    return best


def _best_staircase(x: float) -> StaircaseResult:
    """The staircase realizing ``inf_n F_n(x)``."""
    best = StaircaseResult(1, x, x, ())
    n = 2
    while _min_reach(n) < x:
        for val, chain in _interior(x, n):
            if val < best.value:
                best = StaircaseResult(n, x, val, chain)
        n += 1
    return best


def optimal_staircase(x: float) -> StaircaseResult:
    """Shortest staircase attaining F(x), without boundary padding."""
    if not x > 0:
        raise DomainError("x must be positive")
    return _best_staircase(float(x))


def F_exact(x) -> float:
    """F(x) as the least staircase value; exact up to root-finding accuracy."""
    x = float(x)
    if x < 0:
        raise DomainError("x must be nonnegative")
    if x <= 1:
        return x
    return _best_staircase(x).value


def nearest_int_distance(y):
    y = np.asarray(y, dtype=float)
    out = np.abs(y - np.round(y))
    return float(out) if out.ndim == 0 else out


def F_residual(x, table: FuncEqTable | None = None, correction: bool = True) -> float:
    """``F(x) - [e ln x - A + e ||b + ln x||^2 / (2 ln x)]``.

    Uses the table when given (warning when its grid is coarse at x), else
    the staircase solution. ``correction=False`` drops the oscillating term.
    """
    x = float(x)
    if not x > math.e**2:
        raise DomainError("need x > e^2")
    if table is None:
        Fx = F_exact(x)
    else:
        if table.spacing_at(x) > 10 * table.tolerance ** 0.5:
            warnings.warn("F table too coarse near x; residual may be inaccurate", RuntimeWarning, stacklevel=2)
        Fx = table(x)
    L = math.log(x)
    approx = math.e * L - BOUNDS["variable_k_A"].value
    if correction:
        approx += math.e * nearest_int_distance(BOUNDS["phase_b"].value + L) ** 2 / (2 * L)
    return Fx - approx


# ---------------------------------------------------------------------------
# AM-GM curve


def amgm_f(x: float) -> tuple[float, int]:
    """``f(x) = min_n n x^(1/n)`` by an exact scan over ``1 <= n <= ceil(3 ln x) + 2``."""
    x = float(x)
    if not x > 0:
        raise DomainError("x must be positive")
    if x <= 1:
        return x, 1
    top = int(math.ceil(3 * math.log(x))) + 2
    ns = np.arange(1, top + 1)
    vals = ns * np.exp(math.log(x) / ns)
    i = int(np.argmin(vals))
    return float(vals[i]), int(ns[i])


def amgm_f_residual(x: float) -> float:
    """``f(x) - e ln x - e ||ln x||^2 / (2 ln x)``."""
    L = math.log(x)
    return amgm_f(x)[0] - math.e * L - math.e * nearest_int_distance(L) ** 2 / (2 * L)


# ---------------------------------------------------------------------------
# Shallit


def shallit_min(n: int, tol: float = 1e-12) -> tuple[OptReport, float]:
    """Minimize ``g_n(x) = sum (x_j + 1/x_j) + sum x_j/x_{j+1}``; returns (report, C_n).

    Solved as the quotient sum on the hub graph with the hub pinned to 1,
    so ``x_j = y_j``. The problem is convex in log coordinates.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    spec = build_quotient_sum(shallit_graph(n), pin=("0", 1.0))
    rep = minimize(spec, tol=tol)
    return rep, 3 * n - rep.value


def _g(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(x + 1 / x) + np.sum(x[:-1] / x[1:]))


def shallit_direct(n: int, sweeps: int = 2000, tol: float = 1e-14) -> float:
    """Coordinate descent on ``g_n`` itself; every 1-D step is closed form.

    With the other coordinates fixed, ``g`` in ``x_j`` is ``a x_j + c/x_j`` so
    the exact minimizer is ``sqrt(c/a)``.
    """
    x = np.ones(n)
    prev = _g(x)
    for _ in range(sweeps):
        for j in range(n):
            a = 1.0 + (1.0 / x[j + 1] if j + 1 < n else 0.0)
            c = 1.0 + (x[j - 1] if j > 0 else 0.0)
            x[j] = math.sqrt(c / a)
        cur = _g(x)
        if prev - cur < tol:
            break
        prev = cur
    return _g(x)


# ---------------------------------------------------------------------------
# variable windows


def a_n_star(n: int, table: FuncEqTable | None = None) -> float:
    """``A_{n,*} = F(n)``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return table(float(n)) if table is not None else F_exact(n)


def _canonical_rotation(k: tuple[int, ...]) -> tuple[int, ...]:
    return min(k[i:] + k[:i] for i in range(len(k)))


def a_n_star_bruteforce(n: int, seed: int = 0, starts: int = 16) -> tuple[float, tuple[int, ...]]:
    """``min_k inf_x S_{n,k}(x)`` over every window vector k, by multi-start search.

    Window vectors equal up to rotation give the same infimum, so only one
    representative per rotation class is solved. Returns (value, best k).
    """
    if not 1 <= n <= 5:
        raise CapacityError("brute force is limited to n <= 5")
    reps = sorted({_canonical_rotation(k) for k in itertools.product(range(1, n + 1), repeat=n)})
    rng = np.random.default_rng(seed)
    bounds = [(-20.0, 20.0)] * n
    best, best_k = math.inf, None
    for k in reps:
        ws = WindowSum(cyclic_windows(n, k), 1.0)
        for s in range(starts):
            t0 = np.zeros(n) if s == 0 else rng.uniform(-2.0, 2.0, n)
            res = sp_minimize(ws.value_grad_log, t0, jac=True, method="L-BFGS-B", bounds=bounds,
                              options={"maxiter": 1000, "gtol": 1e-12, "ftol": 1e-15})
            if res.fun < best:
                best, best_k = float(res.fun), k
    return best, best_k
