"""Closed-form quantities for the supercritical Erdos-Renyi giant component.

Everything here is deterministic: the conjugate parameter, the pmfs of the
Borel and geometric laws, and the limiting first moments of the giant's
2-core, kernel and attached trees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

_LOG_FACT_TABLE_SIZE = 10_000
_LOG_FACT = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, _LOG_FACT_TABLE_SIZE + 1)))))


def conjugate(lam: float) -> float:
    """Return the unique ``mu`` in (0, 1) with ``mu*exp(-mu) == lam*exp(-lam)``.

    Bisection on (1e-12, 1 - 1e-12) followed by a few Newton steps. The map
    ``m -> m*exp(-m)`` is increasing on (0, 1), so the bracket never breaks.

    Raises
    ------
    ValueError
        If ``lam <= 1 + 1e-9``; the conjugate is only meaningful above 1.
    """
    lam = float(lam)
    if not lam > 1.0 + 1e-9:
        raise ValueError(f"conjugate requires lambda > 1, got {lam!r}")
    target = lam * math.exp(-lam)

    lo, hi = 1e-12, 1.0 - 1e-12
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if mid * math.exp(-mid) < target:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    for _ in range(3):
        f = mu * math.exp(-mu) - target
        df = (1.0 - mu) * math.exp(-mu)
        step = f / df
        if not math.isfinite(step):
            break
        cand = mu - step
        if 0.0 < cand < 1.0:
            mu = cand
    return mu


@dataclass(frozen=True)
class ModelParams:
    """Size ``n`` and density ``lam`` of G(n, lam/n) plus derived constants."""

    n: int
    lam: float
    mu: float = field(init=False)
    lambda0: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        mu = conjugate(self.lam)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "lambda0", self.lam - mu)


@dataclass(frozen=True)
class MomentVector:
    b1: float
    b2: float
    b3: float
    core_vertices: float
    core_edges: float
    kernel_vertices: float
    kernel_edges: float


def p2_plus(x):
    """P(Poisson(x) >= 2), i.e. ``1 - exp(-x) - x*exp(-x)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("p2_plus requires x >= 0")
    out = -np.expm1(-x) - x * np.exp(-x)
    return float(out) if out.ndim == 0 else out


def moments(params: ModelParams) -> MomentVector:
    """Expected giant-component anatomy counts at size ``params.n``.

    ``b1, b2, b3`` are the per-vertex limits of the core size, the number of
    tree (non-core) vertices, and the core excess ``|E(core)| - |core|``.
    """
    lam, mu, l0, n = params.lam, params.mu, params.lambda0, params.n
    giant_frac = 1.0 - mu / lam
    b1 = (1.0 - mu) * giant_frac
    b2 = mu * giant_frac
    b3 = 0.5 * giant_frac * (lam + mu - 2.0)
    e = math.exp(-l0)
    return MomentVector(
        b1=b1,
        b2=b2,
        b3=b3,
        core_vertices=b1 * n,
        core_edges=0.5 * n * l0 * (1.0 - e),
        kernel_vertices=n * (1.0 - e * (1.0 + l0 + 0.5 * l0 * l0)),
        kernel_edges=0.5 * n * l0 * (1.0 - e * (1.0 + l0)),
    )


def log_factorial(t):
    t = np.asarray(t, dtype=np.int64)
    small = t <= _LOG_FACT_TABLE_SIZE
    out = np.empty(t.shape, dtype=float)
    out[small] = _LOG_FACT[t[small]]
    if not np.all(small):
        out[~small] = gammaln(t[~small] + 1.0)
    return out


def borel_pmf(mu: float, t):
    """Borel(mu) probability of total progeny ``t``, evaluated in log space.

    P(T = t) = t**(t-1) / t! * (mu*exp(-mu))**t / mu
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu!r}")
    t_arr = np.asarray(t, dtype=np.int64)
    if np.any(t_arr < 1):
        raise ValueError("t must be >= 1")
    tf = t_arr.astype(float)
    logp = (tf - 1.0) * np.log(tf) - log_factorial(t_arr) + tf * (math.log(mu) - mu) - math.log(mu)
    out = np.exp(logp)
    return float(out) if out.ndim == 0 else out


def geom_pmf(mu: float, k):
    """P(L = k) = mu**(k-1) * (1-mu) on k = 1, 2, ..."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu!r}")
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 1):
        raise ValueError("k must be >= 1")
    out = np.exp((k_arr - 1.0) * math.log(mu)) * (1.0 - mu)
    return float(out) if out.ndim == 0 else out


def longest_path_prediction(params: ModelParams) -> float:
    """log base 1/mu of n: the leading order of the longest degree-2 path."""
    return math.log(params.n) / -math.log(params.mu)
