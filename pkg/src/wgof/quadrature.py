"""Integration helpers on the unit interval with endpoint substitution.

The substitution t = expit(x) maps (0, 1) to the whole real line with
Jacobian dt = t(1-t) dx, which tames the integrable endpoint singularities
that the density perturbations and weighted norms produce (they diverge at
worst like a power of t or 1-t times a slowly varying factor).
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.special import expit

__all__ = ["unit_integral", "gauss_legendre", "nested_lower_integral"]

# expit(-40) ~ 4e-18 is representable below 1/2, but expit(x) saturates to
# exactly 1.0 beyond x ~ 36.7; evaluation stays on the open interval by
# clamping t while keeping the exact Jacobian expit(x)*expit(-x).
_CUTOFF = 40.0
_T_MIN = float(np.nextafter(0.0, 1.0))
_T_MAX = float(np.nextafter(1.0, 0.0))


def unit_integral(
    f: Callable[[np.ndarray], np.ndarray],
    epsabs: float = 1e-12,
    epsrel: float = 1e-12,
) -> float:
    """Adaptive quadrature of f over (0, 1) with the logistic substitution."""

    def g(x: float) -> float:
        jac = expit(x) * expit(-x)
        t = min(max(expit(x), _T_MIN), _T_MAX)
        return float(f(np.asarray(t))) * jac

    val, _ = quad(g, -_CUTOFF, _CUTOFF, epsabs=epsabs, epsrel=epsrel, limit=400)
    return val


def gauss_legendre(m: int, a: float = -_CUTOFF, b: float = _CUTOFF):
    """Gauss-Legendre nodes/weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(m)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def nested_lower_integral(
    outer: Callable[[np.ndarray], np.ndarray],
    inner: Callable[[np.ndarray], np.ndarray],
    m: int,
) -> float:
    """Compute  int_R outer(y) * [ int_{-inf}^{y} inner(x) dx ] dy  by
    Gauss-Legendre in the substituted coordinate, re-deriving the inner rule
    for every outer node so no integrand kink is ever crossed."""
    y, wy = gauss_legendre(m)
    gx, gw = np.polynomial.legendre.leggauss(m)
    # inner nodes for all outer nodes at once: x_jk on [-CUTOFF, y_j]
    half = 0.5 * (y + _CUTOFF)  # (m,)
    x = -_CUTOFF + half[:, None] * (gx[None, :] + 1.0)  # (m, m)
    inner_vals = inner(x.ravel()).reshape(x.shape)
    g = (inner_vals * gw[None, :]).sum(axis=1) * half
    return float((outer(y) * g * wy).sum())
