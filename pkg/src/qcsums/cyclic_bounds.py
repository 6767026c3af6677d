"""Shapiro-Diananda minima, closed-form bounds, reference constants and the
Mavlo-Georgiev inequality family."""

from __future__ import annotations

import math
from types import MappingProxyType
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize as sp_minimize

from .errors import DomainError
from .gp import OptReport
from .sums import WindowSum, cyclic_windows, parse_power

__all__ = [
    "Bound",
    "BOUNDS",
    "bound",
    "minimize_diananda",
    "diananda_inf_search",
    "diananda_lb",
    "bkp_factor",
    "bkp_lower_bound",
    "mavlo_lhs",
    "mavlo_bounds",
    "georgiev_identity_residual",
    "mavlo_substitution",
    "mavlo_property_run",
]


class Bound(NamedTuple):
    value: float
    citation: str


BOUNDS = MappingProxyType(
    {
        "gamma_2": Bound(0.98913, "Drinfeld's constant for Shapiro's sum: A_{n,2}/n <= gamma_2, sharp"),
        "gamma_3": Bound(0.97793, "gamma_3 upper bound for inf_n A_{n,3}/n"),
        "gamma_inf": Bound(0.930498, "lim_{k->inf} gamma_k"),
        "boarder_daykin_k3": Bound(0.97794, "Boarder-Daykin (1973) numerical bound for k = 3"),
        "ln2": Bound(math.log(2.0), "lim_{k->inf} k(2^{1/k} - 1) = ln 2"),
        "nu_2_lower": Bound((math.sqrt(5.0) - 1.0) / 2.0, "Diananda (1974): nu_2 >= (sqrt 5 - 1)/2"),
        "shallit_C": Bound(1.3694514, "Shallit (1994): min g_n = 3n - C + o(1)"),
        "variable_k_A": Bound(1.704656, "A_{n,*} = e ln n - A + O(1/ln n)"),
        "phase_b": Bound(0.69739, "phase constant b in the asymptotics of F(x)"),
    }
)


def bound(name: str) -> Bound:
    return BOUNDS[name]


CITE_P_NONPOS = "B_{k,p} = 1 for p <= 0 (AM-GM on cyclic shifts; geometric-mean remark)"
CITE_P_INF = "Diananda (1973): A_{n,k,+inf} = floor((n+k-1)/k)"


def _check_nk(n, k):
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise DomainError("n and k must be integers")
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")


def _local_min(ws: WindowSum, t0, maxiter=2000):
    res = sp_minimize(
        ws.value_grad_log, t0, jac=True, method="L-BFGS-B",
        options={"maxiter": maxiter, "gtol": 1e-12, "ftol": 1e-15},
    )
    return res.x, float(res.fun)


def minimize_diananda(n: int, k: int, p=1.0, starts: int = 64, seed: int = 0) -> OptReport:
    """Estimate ``A_{n,k,p} = inf_x S_{n,k,p}(x)``.

    p <= 0 and p = +inf are exact closed forms. For 0 < p < inf the result
    is the best local minimum over seeded random starts (the first start is
    the all-ones vector), hence only an upper bound on the infimum.
    """
    _check_nk(n, k)
    p = parse_power(p)
    verts = tuple(str(i + 1) for i in range(n))
    if p <= 0:
        return OptReport(
            value=float(n), minimizer=np.ones(n), attained=True, status="exact",
            vertices=verts, certificate={"citation": CITE_P_NONPOS},
        )
    if p == math.inf:
        return OptReport(
            value=float((n + k - 1) // k), minimizer=None, attained=(k == 1), status="exact",
            vertices=verts, certificate={"citation": CITE_P_INF},
        )
    ws = WindowSum(cyclic_windows(n, k), p)
    rng = np.random.default_rng(seed)
    best_t, best = None, math.inf
    for s in range(starts):
        t0 = np.zeros(n) if s == 0 else rng.uniform(-1.0, 1.0, n)
        t, val = _local_min(ws, t0)
        if val < best:
            best_t, best = t, val
    x = np.exp(best_t - best_t[0])
    return OptReport(
        value=best, minimizer=x, attained=None, status="upper-bound-only", vertices=verts,
        iterations=starts,
        certificate={"citation": "local search; no certified lower-bound method is known for finite p >= 1"},
    )


def diananda_inf_search(
    n: int, k: int, starts: int = 16, seed: int = 0, spread: float = 4.0,
    schedule=(64, 128, 256, 512, 1024, 2048, 4096, 8192),
) -> float:
    """Numeric search for ``A_{n,k,+inf}`` independent of the closed form.

    Each random start is minimized for a finite p, then warm-started at
    successively larger p (shrinking the smoothing of max). The exact
    max-sum is evaluated at every endpoint; the least value is returned.
    """
    _check_nk(n, k)
    windows = cyclic_windows(n, k)
    exact = WindowSum(windows, math.inf)
    stages = [WindowSum(windows, p) for p in schedule]
    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(starts):
        t = rng.uniform(-spread, spread, n)
        for ws in stages:
            t, _ = _local_min(ws, t)
        best = min(best, float(exact.value_log(t)))
    return best


def diananda_lb(k: int) -> float:
    """``k (2^{1/k} - 1)``, the lower bound on ``A_{n,k}/n``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return k * math.expm1(math.log(2.0) / k)


def _U(t, k):
    return (k**t - 1.0) ** t * t ** (-t)


def bkp_factor(k: int, p: float) -> float:
    """``k^{-1/q^2} / (k-1) * U_{1/p}(k) * U_{1/q}(k)`` with ``1/p + 1/q = 1``."""
    if k < 2:
        raise DomainError("k must be >= 2")
    if not p > 1 or math.isinf(p):
        raise DomainError("need 1 < p < inf")
    q = p / (p - 1.0)
    return k ** (-1.0 / q**2) / (k - 1) * _U(1.0 / p, k) * _U(1.0 / q, k)


def bkp_lower_bound(k: int, p: float, bk1_lb: float) -> float:
    """Lower bound for ``B_{k,p}`` (1 < p < inf) from a lower bound on ``B_{k,1}``."""
    if not 0 < bk1_lb <= 1:
        raise DomainError("bk1_lb must lie in (0, 1]")
    return bk1_lb ** (1.0 / p) * bkp_factor(k, p)


# ---------------------------------------------------------------------------
# Mavlo-Georgiev


def mavlo_lhs(a, b, c, x):
    """``a/(b+cx) + b/(c+ax) + c/(a+bx)``; broadcasts over arrays."""
    a, b, c, x = (np.asarray(v, dtype=float) for v in (a, b, c, x))
    A, B, C = b + c * x, c + a * x, a + b * x
    if np.any(A <= 0) or np.any(B <= 0) or np.any(C <= 0):
        raise DomainError("denominators must be positive")
    out = a / A + b / B + c / C
    return float(out) if out.ndim == 0 else out


def mavlo_bounds(x):
    """``(3x/(1+x^3), 3/(1+x))``: the original bound and the sharp one."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("x must be positive")
    orig, sharp = 3 * x / (1 + x**3), 3 / (1 + x)
    if orig.ndim == 0:
        return float(orig), float(sharp)
    return orig, sharp


def georgiev_identity_residual(a, b, c, x):
    """Relative residual of ``(1+x^3) L = (B/A)x^2 + A/B + (C/B)x^2 + B/C + (A/C)x^2 + C/A - 3x``."""
    a, b, c, x = (np.asarray(v, dtype=float) for v in (a, b, c, x))
    A, B, C = b + c * x, c + a * x, a + b * x
    left = (1 + x**3) * mavlo_lhs(a, b, c, x)
    x2 = x * x
    right = (B / A) * x2 + A / B + (C / B) * x2 + B / C + (A / C) * x2 + C / A - 3 * x
    scale = np.maximum.reduce([np.abs(left), (B / A) * x2, A / B, (C / B) * x2, B / C, (A / C) * x2, C / A])
    out = np.abs(left - right) / np.maximum(scale, 1.0)
    return float(out) if out.ndim == 0 else out


def mavlo_substitution(u, v, w):
    """Return ``(a, b, c, x)`` with a = 1 and ``u = xb/a, v = xc/b, w = xa/c``."""
    if not (u > 0 and v > 0 and w > 0):
        raise DomainError("u, v, w must be positive")
    x = (u * v * w) ** (1.0 / 3.0)
    b = u / x
    c = v * b / x
    return 1.0, b, c, x


def mavlo_property_run(samples: int = 100_000, seed: int = 0, log_range: float = 3.0) -> dict:
    """Seeded random check of the sharp bound and the Georgiev identity.

    Draws a, b, c, x log-uniformly from ``[10^-r, 10^r]`` and reports the
    worst slack ``lhs - 3/(1+x)``, the worst identity residual and the worst
    ``sharp - original`` gap.
    """
    rng = np.random.default_rng(seed)
    a, b, c, x = 10.0 ** rng.uniform(-log_range, log_range, size=(4, samples))
    lhs = mavlo_lhs(a, b, c, x)
    orig, sharp = mavlo_bounds(x)
    slack = lhs - sharp
    return {
        "samples": samples,
        "min_slack_sharp": float(np.min(slack)),
        "min_relative_slack_sharp": float(np.min(slack / sharp)),
        "max_identity_residual": float(np.max(georgiev_identity_residual(a, b, c, x))),
        "min_sharp_minus_original": float(np.min(sharp - orig)),
    }
