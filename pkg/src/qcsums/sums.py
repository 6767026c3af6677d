"""Power means and the quasi-cyclic sum families.

Two normalizations coexist and are never mixed:

* cyclic (Shapiro-Diananda) sums divide by the power *mean*
  ``M_{k,p} = ((x_1^p + ... + x_k^p) / k)^(1/p)``;
* graphic p-sums divide by the unnormalized power *sum*
  ``M_p(x|W) = (sum_{w in W} x_w^p)^(1/p)``.

For a window of size k they differ by the factor ``k^(1/p)``; see
:func:`graphic_to_cyclic`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

from .digraph import Digraph
from .errors import DomainError, StructureError, ValidationError

__all__ = [
    "parse_power",
    "power_mean",
    "graphic_p_sum",
    "graphic_p_sum_batch",
    "graphic_to_cyclic",
    "circulant",
    "cyclic_windows",
    "CyclicSumSpec",
    "diananda_sum",
    "WindowSum",
    "permutation_quotient_sum",
]


def parse_power(p) -> float:
    """Accept floats and the strings 'inf', '+inf', '-inf'."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity", "max"):
            return math.inf
        if s in ("-inf", "-infinity", "min"):
            return -math.inf
        p = float(s)
    p = float(p)
    if math.isnan(p):
        raise DomainError("power order must not be NaN")
    return p


def _positive(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise DomainError("empty value list")
    if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
        raise DomainError("values must be finite and strictly positive")
    return arr


_SMALL_P = 1e-7


def _near_zero(p, logs) -> bool:
    """True when |p| is so small that (logsumexp - log k)/p cancels badly."""
    return p != 0 and abs(p) * float(np.max(np.abs(logs), initial=0.0)) < _SMALL_P


def _log_mean_small_p(logs, p, axis=-1, mask=None):
    """Second-order expansion ``log M_p = mean(l) + p var(l) / 2 + O(p^2)``."""
    if mask is None:
        return logs.mean(axis=axis) + 0.5 * p * logs.var(axis=axis)
    k = mask.sum(axis=axis)
    lm = np.where(mask, logs, 0.0)
    mean = lm.sum(axis=axis) / k
    var = (np.where(mask, logs - np.expand_dims(mean, axis), 0.0) ** 2).sum(axis=axis) / k
    return mean + 0.5 * p * var


def power_mean(p, values) -> float:
    """Normalized power mean; p = 0, -inf, +inf give geometric mean, min, max."""
    p = parse_power(p)
    x = _positive(values)
    if p == math.inf:
        return float(x.max())
    if p == -math.inf:
        return float(x.min())
    logs = np.log(x)
    if p == 0:
        return float(math.exp(logs.mean()))
    if _near_zero(p, logs):
        return float(math.exp(_log_mean_small_p(logs, p)))
    return float(math.exp((logsumexp(p * logs) - math.log(x.size)) / p))


def _vector_over(g, x) -> np.ndarray:
    if isinstance(x, Mapping):
        try:
            x = [x[v] for v in g.vertices]
        except KeyError as exc:
            raise DomainError(f"missing value for vertex {exc.args[0]!r}") from None
    arr = np.asarray(x, dtype=float)
    if arr.shape != (g.n,):
        raise DomainError(f"expected {g.n} values, got shape {arr.shape}")
    if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
        raise DomainError("x must be finite and strictly positive")
    return arr


def _check_outdegrees(g):
    for v, s in zip(g.vertices, g.succ):
        if not s:
            raise StructureError(f"vertex {v!r} has an empty out-neighborhood")


def graphic_p_sum(g: Digraph, x, p, normalized: bool = False) -> float:
    """``sum_v x_v / M_p(x | out(v))`` with the unnormalized power sum.

    ``p = -inf`` is the min-sum, ``p = +inf`` the max-sum. With
    ``normalized=True`` the denominator is the power mean instead, which is
    the only sensible choice at ``p = 0``.
    """
    p = parse_power(p)
    _check_outdegrees(g)
    xv = _vector_over(g, x)
    return float(graphic_p_sum_batch(g, xv[None, :], p, normalized)[0])


def graphic_p_sum_batch(g, X, p, normalized: bool = False) -> np.ndarray:
    """Vectorized graphic p-sum over the rows of ``X`` (shape ``(m, n)``)."""
    p = parse_power(p)
    X = np.asarray(X, dtype=float)
    if p == 0 and not normalized:
        raise DomainError("p = 0 has no unnormalized power sum; use normalized=True")
    total = np.zeros(X.shape[0])
    logX = None
    for v, s in enumerate(g.succ):
        if not s:
            raise StructureError(f"vertex {g.vertices[v]!r} has an empty out-neighborhood")
        cols = X[:, list(s)]
        if p == math.inf:
            denom = cols.max(axis=1)
        elif p == -math.inf:
            denom = cols.min(axis=1)
        else:
            if logX is None:
                logX = np.log(X)
            lc = logX[:, list(s)]
            if p == 0:
                denom = np.exp(lc.mean(axis=1))
            elif normalized and _near_zero(p, lc):
                denom = np.exp(_log_mean_small_p(lc, p, axis=1))
            else:
                lse = logsumexp(p * lc, axis=1)
                if normalized:
                    lse = lse - math.log(len(s))
                denom = np.exp(lse / p)
        total += X[:, v] / denom
    return total


def graphic_to_cyclic(value: float, k: int, p) -> float:
    """Convert an unnormalized graphic p-sum on a k-regular graph to mean form.

    Every denominator ``M_p`` equals ``k^(1/p) M_{k,p}``, so the cyclic
    (mean-normalized) sum is ``value * k^(1/p)``; for ``p = +-inf`` the two
    coincide.
    """
    p = parse_power(p)
    if math.isinf(p):
        return value
    if p == 0:
        raise DomainError("no conversion at p = 0")
    return value * k ** (1.0 / p)


def _k_vector(n: int, k) -> tuple[int, ...]:
    if n < 1:
        raise ValidationError("n must be positive")
    if isinstance(k, (int, np.integer)):
        ks = (int(k),) * n
    else:
        ks = tuple(int(v) for v in k)
        if len(ks) != n:
            raise ValidationError(f"k-vector must have length {n}")
    for kj in ks:
        if not 1 <= kj <= n:
            raise ValidationError(f"window length {kj} outside [1, {n}]")
    return ks


def circulant(n: int, k) -> Digraph:
    """Digraph on '1'..'n' with edges ``i -> i+1, ..., i+k_i`` (indices mod n).

    A window of length n wraps onto its own start, producing a self-loop.
    """
    ks = _k_vector(n, k)
    edges = []
    for i in range(n):
        for r in range(1, ks[i] + 1):
            edges.append((str(i + 1), str((i + r) % n + 1)))
    loops = any(kj == n for kj in ks)
    return Digraph(tuple(str(i + 1) for i in range(n)), tuple(edges), allow_loops=loops)


def cyclic_windows(n: int, k) -> list[np.ndarray]:
    ks = _k_vector(n, k)
    return [(j + np.arange(1, kj + 1)) % n for j, kj in enumerate(ks)]


@dataclass(frozen=True)
class CyclicSumSpec:
    """Shapiro-Diananda sum S_{n,k,p}; a k-vector selects variable windows (p = 1)."""

    n: int
    k: int | tuple[int, ...]
    p: float = 1.0

    def __post_init__(self):
        k = self.k
        if not isinstance(k, (int, np.integer)):
            k = tuple(int(v) for v in k)
            object.__setattr__(self, "k", k)
        object.__setattr__(self, "p", parse_power(self.p))
        _k_vector(self.n, k)
        if isinstance(k, tuple) and self.p != 1.0:
            raise ValidationError("variable window lengths are defined for p = 1 only")

    @property
    def windows(self) -> list[np.ndarray]:
        return cyclic_windows(self.n, self.k)


def diananda_sum(spec: CyclicSumSpec, x) -> float:
    """``sum_j x_j / M_{k_j,p}(x_{j+1}, ..., x_{j+k_j})``, indices mod n."""
    xv = np.asarray(x, dtype=float)
    if xv.shape != (spec.n,):
        raise DomainError(f"expected {spec.n} values")
    _positive(xv)
    return float(WindowSum(spec.windows, spec.p).value(xv))


class WindowSum:
    """``sum_j x_j / M_{|W_j|,p}(x[W_j])`` for arbitrary index windows.

    Works for every p (including +-inf) on x, and supplies value and gradient
    in log coordinates ``t = log x`` for finite p. Windows of equal length are
    evaluated with one padded fancy-index.
    """

    def __init__(self, windows: Sequence[np.ndarray], p):
        self.p = parse_power(p)
        self.n = len(windows)
        lengths = [len(w) for w in windows]
        kmax = max(lengths)
        self.idx = np.zeros((self.n, kmax), dtype=int)
        self.mask = np.zeros((self.n, kmax), dtype=bool)
        for j, w in enumerate(windows):
            self.idx[j, : len(w)] = w
            self.mask[j, : len(w)] = True
        self.logk = np.log(np.asarray(lengths, dtype=float))
        self.uniform = all(L == kmax for L in lengths)

    def _log_denoms(self, t):
        """log M_{k,p} per window, with softmax weights over each window."""
        lt = t[..., self.idx]
        p = self.p
        if p == math.inf or p == -math.inf:
            fill = -np.inf if p == math.inf else np.inf
            lt = np.where(self.mask, lt, fill)
            return (lt.max(axis=-1) if p == math.inf else lt.min(axis=-1)), None
        if p == 0:
            lt = np.where(self.mask, lt, 0.0)
            k = np.exp(self.logk)
            w = self.mask / k[:, None]
            return lt.sum(axis=-1) / k, w
        z = np.where(self.mask, p * lt, -np.inf)
        lse = logsumexp(z, axis=-1, keepdims=True)
        w = np.exp(z - lse)
        if _near_zero(p, np.where(self.mask, lt, 0.0)):
            return _log_mean_small_p(lt, p, mask=self.mask), w
        return (lse[..., 0] - self.logk) / p, w

    def value(self, x) -> np.ndarray | float:
        t = np.log(np.asarray(x, dtype=float))
        return self.value_log(t)

    def value_log(self, t):
        ld, _ = self._log_denoms(t)
        return np.exp(t - ld).sum(axis=-1)

    def value_grad_log(self, t):
        """Value and gradient with respect to log x (single point)."""
        ld, w = self._log_denoms(t)
        if w is None:
            raise DomainError("gradient undefined for p = +-inf")
        terms = np.exp(t - ld)
        grad = terms.copy()
        np.subtract.at(grad, self.idx[self.mask], (terms[:, None] * w)[self.mask])
        return float(terms.sum()), grad


def permutation_quotient_sum(x, sigma: Sequence[int]) -> float:
    """``sum_i x_i / x_sigma(i)`` with ``sigma`` given as 0-based images."""
    xv = _positive(x)
    n = xv.size
    sig = [int(s) for s in sigma]
    if sorted(sig) != list(range(n)):
        raise ValidationError("sigma is not a permutation of range(n)")
    return float(np.sum(xv / xv[sig]))
