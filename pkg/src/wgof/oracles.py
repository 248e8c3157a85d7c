"""Brute-force oracles used by the test suite.

These evaluate the *defining* form of each statistic -- a pointwise scan of
sqrt(n) |F_hat(t) - t| / w(t) on a dense grid, or direct quadrature of the
integral statistic -- without using the jump-point reduction of
`wgof.statistics`.  They are intentionally slower and independent.

Accuracy of the grid supremum: the scan never overshoots (it evaluates the
true function pointwise), and with the default jump-refined grid the
undershoot is O(1e-12) relative, because the supremum is always a one-sided
limit at an order statistic and the grid places points within relative
distance 1e-12 on both sides of every jump.  A conservative documented
bound of 1e-6 relative is asserted by the tests.  With a plain uniform grid
of G points the undershoot is bounded by the grid pitch times the local
slope, which for the weighted statistics gives roughly n / (G * w(t)^2);
tests using uniform grids therefore only claim 1e-4 relative at G = 1e6.
"""

from __future__ import annotations

from math import sqrt

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .samples import NullSample

__all__ = [
    "grid_sup_oracle",
    "ad_integral_quadrature",
    "kolmogorov_sf",
    "kolmogorov_quantile",
]


def _as_sorted_values(sample: NullSample | np.ndarray) -> np.ndarray:
    if isinstance(sample, NullSample):
        return sample.values
    return np.sort(np.asarray(sample, dtype=np.float64))


def _scan_grid(
    u: np.ndarray,
    lo: float,
    hi: float,
    base_points: int,
    per_jump: int,
) -> np.ndarray:
    """Evaluation grid on [lo, hi]: uniform fill, endpoint clusters, and
    (optionally) clusters straddling every jump point."""
    parts = [np.linspace(lo, hi, base_points)]
    span = hi - lo
    cluster = np.geomspace(1e-12, 0.49, 60) * span
    parts.append(lo + cluster)
    parts.append(hi - cluster)
    if per_jump > 0:
        offs = np.geomspace(1e-12, 1e-2, per_jump)
        below = u[:, None] * (1.0 - offs[None, :])
        above = u[:, None] * (1.0 + offs[None, :])
        near_one = 1.0 - (1.0 - u[:, None]) * (1.0 - offs[None, :])
        parts += [below.ravel(), above.ravel(), near_one.ravel(), u]
    t = np.concatenate(parts)
    t = t[(t >= lo) & (t <= hi)]
    # keep strictly inside (0,1) so weights stay finite
    return np.clip(t, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))


def grid_sup_oracle(
    sample: NullSample | np.ndarray,
    weight_exponent: float,
    domain: tuple[float, float] = (0.0, 1.0),
    base_points: int = 2001,
    per_jump: int = 24,
) -> float:
    """Grid supremum of sqrt(n) |F_hat(t) - t| / [t(1-t)]^exponent over domain.

    weight_exponent = 0 is the unweighted special case.  The grid never
    overshoots the true supremum; see the module docstring for the
    undershoot bound.  Pass per_jump=0 and a large base_points for the
    plain uniform-grid variant.
    """
    if not 0.0 <= weight_exponent <= 0.5:
        raise ValueError("weight_exponent must lie in [0, 1/2]")
    lo, hi = domain
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("domain must be a nonempty subinterval of [0, 1]")
    u = _as_sorted_values(sample)
    n = u.size
    t = _scan_grid(u, lo, hi, base_points, per_jump)
    fhat = np.searchsorted(u, t, side="right") / n
    d = np.abs(fhat - t)
    if weight_exponent > 0.0:
        d = d / (t * (1.0 - t)) ** weight_exponent
    return sqrt(n) * float(d.max())


def ad_integral_quadrature(
    sample: NullSample | np.ndarray, tol: float = 1e-12
) -> float:
    """Adaptive quadrature of the defining integral of the quadratic statistic.

    Integrates n * (F_hat(t) - t)^2 / (t(1-t)) piecewise between jumps, where
    the integrand is smooth (on the first and last pieces the apparent
    endpoint singularity cancels exactly), and returns the square root.
    """
    u = _as_sorted_values(sample)
    n = u.size
    edges = np.concatenate(([0.0], u, [1.0]))
    total = 0.0
    for i in range(n + 1):
        a, b = edges[i], edges[i + 1]
        if b - a <= 1e-15:
            continue
        c = i / n
        val, _ = quad(
            lambda t, c=c: (c - t) ** 2 / (t * (1.0 - t)),
            a,
            b,
            epsabs=tol,
            epsrel=tol,
            limit=200,
        )
        total += val
    return sqrt(n * total)


def kolmogorov_sf(x: float) -> float:
    """Limiting survival function 2 * sum_j (-1)^(j-1) exp(-2 j^2 x^2)."""
    if x <= 0.0:
        return 1.0
    total = 0.0
    for j in range(1, 200):
        term = (-1.0) ** (j - 1) * np.exp(-2.0 * j * j * x * x)
        total += term
        if abs(term) < 1e-18:
            break
    return float(min(1.0, max(0.0, 2.0 * total)))


def kolmogorov_quantile(alpha: float) -> float:
    """Upper-alpha quantile of the limiting distribution, by series inversion."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return float(brentq(lambda x: kolmogorov_sf(x) - alpha, 0.2, 5.0, xtol=1e-12))
