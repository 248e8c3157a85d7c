"""Departure shapes and their tail diagnostics.

A local departure from uniformity is t + theta * A(t) with a continuous
amplitude A vanishing at both endpoints.  For a model with distribution
function H, the normalised amplitude is A(t) = [H(t) - t] / theta_norm with
theta_norm the L1 norm of the raw density perturbation h - 1, so the
normalised perturbation a = (h - 1)/theta_norm always has unit L1 norm.
The weighted form A*(t) = A(t)/sqrt(t(1-t)) drives every efficiency
functional.

Three tail properties of A decide which asymptotic formulas apply:

* endpoint vanishing: A*(t) -> 0 at both endpoints;
* power envelope: |A(t)| <= C [t(1-t)]^(1-w) for some w in [0, 1/2)
  (strictly stronger than endpoint vanishing);
* weighted square integrability: |A|^(2l) / (t(1-t)) integrable for some
  l in (0, 1/2) (implied by either of the above; gives a finite weighted
  L2 norm of A*).

`tail_conditions` reports these from a fixed per-family catalog of decay
rates, cross-checked against a numeric endpoint probe; on disagreement the
catalog wins and a warning is emitted, since numerics next to a
non-integrable singularity are not trustworthy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .models import (
    AlternativeModel,
    LehmannMixture,
    NormalContamination,
    NormalScale,
    NormalShift,
    ParetoMixture,
    SubbotinMixture,
    TailMass,
)
from .quadrature import unit_integral
from .samples import clip_open_unit

__all__ = [
    "ShapeFunction",
    "shape",
    "theta_by_quadrature",
    "TailConditionReport",
    "tail_conditions",
    "LocalPath",
]

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ShapeFunction:
    """Normalised departure amplitude with optional density perturbation.

    amplitude(t) = A(t); perturbation(t) = a(t) = A'(t) where available in
    closed form (None otherwise); theta_norm is the L1 normaliser that was
    divided out.  weighted(t) returns A(t)/sqrt(t(1-t)).
    """

    amplitude: Callable[[np.ndarray], np.ndarray]
    perturbation: Callable[[np.ndarray], np.ndarray] | None
    theta_norm: float
    label: str = "shape"

    def weighted(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return self.amplitude(t) / np.sqrt(t * (1.0 - t))

    @staticmethod
    def from_callable(
        amplitude: Callable[[np.ndarray], np.ndarray],
        perturbation: Callable[[np.ndarray], np.ndarray] | None = None,
        label: str = "custom",
    ) -> "ShapeFunction":
        """Wrap a raw amplitude (no normalisation; the efficiency functionals
        are scale invariant, so none is needed)."""
        return ShapeFunction(amplitude, perturbation, theta_norm=1.0, label=label)


def shape(model: AlternativeModel) -> ShapeFunction:
    """Normalised shape of a model: A = (H(t) - t)/theta, a = (h - 1)/theta.

    theta is the exact L1 norm of h - 1 (each family computes it in the
    coordinate where its far tails are representable; see
    `AlternativeModel.theta_raw`).  Mixture families factor the mixing
    weight out of the norm, so contaminations sharing a component share the
    exact same shape.  Raises for parameter values that make the model
    coincide with the null (the shape is undefined there).
    """
    if model.is_null():
        raise ValueError(f"{model.label}: model equals the null; shape undefined")
    theta = model.theta_raw()
    if not np.isfinite(theta) or theta <= 0.0:
        raise ValueError(f"{model.label}: degenerate perturbation norm {theta!r}")

    def amplitude(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return (model.cdf(t) - t) / theta

    def perturbation(t: np.ndarray) -> np.ndarray:
        return model.raw_perturbation(np.asarray(t, dtype=np.float64)) / theta

    return ShapeFunction(amplitude, perturbation, theta_norm=theta, label=model.label)


def theta_by_quadrature(model: AlternativeModel) -> float:
    """Adaptive-quadrature evaluation of the perturbation norm in t-space.

    Test oracle for `theta_raw`.  Only sound when the departure's far tails
    are representable on the float64 unit interval: the Pareto mixture (and
    the Subbotin mixture with very small shape exponent) carries component
    mass at quantile levels below the smallest positive double, which this
    integral cannot see, so for those it strictly undershoots.
    """
    return unit_integral(lambda t: np.abs(model.raw_perturbation(t)))


@dataclass(frozen=True)
class LocalPath:
    """Mixture path toward the null: distribution t + theta * A(t).

    theta is the mixing weight of the departure; construction verifies
    numerically that the path stays a distribution function.
    """

    model: AlternativeModel
    theta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        t = np.linspace(0.0, 1.0, 2001)[1:-1]
        f = self.cdf(t)
        if np.any(np.diff(f) < -1e-12) or f[0] < -1e-12 or f[-1] > 1.0 + 1e-12:
            raise ValueError("path distribution function is not monotone on [0, 1]")

    def cdf(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return (1.0 - self.theta) * t + self.theta * self.model.cdf(t)

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        """Two-component draw: the base model with probability theta.

        The selector lane is rescaled before it reaches the base model so
        that a mixture model sees a uniform selector conditionally on the
        departure branch being taken.
        """
        sel = np.asarray(sel, dtype=np.float64)
        comp = self.model.map_uniforms(sel / self.theta, v, aux)
        out = np.where(sel < self.theta, comp, np.asarray(v, dtype=np.float64))
        return clip_open_unit(out)


@dataclass(frozen=True)
class TailConditionReport:
    """Which tail conditions the model's shape satisfies.

    envelope_exponent_min is the smallest valid envelope exponent (None if
    the envelope fails for every exponent); min_is_open marks whether that
    minimum itself is excluded.  l2_order_range is the interval of valid
    integrability orders l within (0, 1/2), or None.
    """

    astar_vanishes: bool
    envelope_exponent_min: float | None
    envelope_min_is_open: bool
    weighted_l2_ok: bool
    l2_order_range: tuple[float, float] | None
    notes: str = ""

    @property
    def flags(self) -> str:
        env = "none"
        if self.envelope_exponent_min is not None:
            bracket = "(" if self.envelope_min_is_open else "["
            env = f"{bracket}{self.envelope_exponent_min:g},0.5)"
        rng = "none"
        if self.l2_order_range is not None:
            rng = f"({self.l2_order_range[0]:g},{self.l2_order_range[1]:g})"
        return (
            f"astar_vanishes={'yes' if self.astar_vanishes else 'no'};"
            f"envelope={env};weighted_l2={'yes' if self.weighted_l2_ok else 'no'};"
            f"l2_orders={rng}"
        )


def _numeric_endpoint_vanish(shape_fn: ShapeFunction) -> bool:
    """Crude probe: does |A*| shrink while approaching both endpoints?"""
    lo = np.array([1e-4, 1e-6, 1e-8, 1e-10])
    vals_lo = np.abs(shape_fn.weighted(lo))
    vals_hi = np.abs(shape_fn.weighted(1.0 - lo))
    going_down = vals_lo[-1] <= max(vals_lo[0], 1e-3) and vals_hi[-1] <= max(
        vals_hi[0], 1e-3
    )
    return bool(going_down)


def tail_conditions(
    model: AlternativeModel, check_numeric: bool = True
) -> TailConditionReport:
    """Catalogued tail behaviour of a family, with numeric cross-check."""
    if isinstance(model, (NormalShift, NormalContamination)):
        report = TailConditionReport(
            astar_vanishes=True,
            envelope_exponent_min=0.0,
            envelope_min_is_open=True,
            weighted_l2_ok=True,
            l2_order_range=(0.0, 0.5),
            notes="Gaussian shift tails: envelope holds for every positive exponent",
        )
    elif isinstance(model, NormalScale):
        s = model.sigma
        if s < 1.0:
            report = TailConditionReport(True, 0.0, False, True, (0.0, 0.5))
        elif s < _SQRT2:
            report = TailConditionReport(True, 1.0 - s**-2, False, True, (0.0, 0.5))
        elif s == _SQRT2:
            report = TailConditionReport(
                True, None, False, True, (0.0, 0.5),
                notes="endpoint vanishing holds but no power envelope",
            )
        else:
            report = TailConditionReport(
                False, None, False, True, (0.0, 0.5),
                notes="scale above sqrt(2): weighted amplitude diverges at the ends",
            )
    elif isinstance(model, TailMass):
        heavy = model.beta >= 2.0
        env = None if heavy else max(0.0, 1.0 - 1.0 / model.beta)
        report = TailConditionReport(
            astar_vanishes=not heavy,
            envelope_exponent_min=env,
            envelope_min_is_open=False,
            weighted_l2_ok=True,
            l2_order_range=(0.0, 0.5),
            notes="tail exponent 1/beta - 1/2 decides endpoint vanishing",
        )
    elif isinstance(model, LehmannMixture):
        report = TailConditionReport(
            astar_vanishes=False,
            envelope_exponent_min=None,
            envelope_min_is_open=False,
            weighted_l2_ok=True,
            l2_order_range=(0.0, 0.5),
            notes="lower-tail amplitude ~ t^delta; weighted form diverges or "
            "stays positive at 0 for delta <= 1/2",
        )
    elif isinstance(model, SubbotinMixture):
        heavy = model.gamma_ < 2.0
        report = TailConditionReport(
            astar_vanishes=not heavy,
            envelope_exponent_min=None if heavy else 0.0,
            envelope_min_is_open=False,
            weighted_l2_ok=True,
            l2_order_range=(0.0, 0.5),
            notes="component tails heavier than Gaussian iff gamma < 2",
        )
    elif isinstance(model, ParetoMixture):
        ok = model.zeta > 4.0
        report = TailConditionReport(
            astar_vanishes=False,
            envelope_exponent_min=None,
            envelope_min_is_open=False,
            weighted_l2_ok=ok,
            l2_order_range=(2.0 / model.zeta, 0.5) if ok else None,
            notes="polynomial component tails; weighted L2 needs zeta > 4",
        )
    else:
        raise TypeError(f"no tail catalog for {type(model).__name__}")

    if check_numeric and not model.is_null():
        try:
            numeric = _numeric_endpoint_vanish(shape(model))
        except ValueError:
            numeric = report.astar_vanishes
        if numeric != report.astar_vanishes:
            warnings.warn(
                f"{model.label}: numeric endpoint probe ({numeric}) disagrees with "
                f"the tail catalog ({report.astar_vanishes}); trusting the catalog",
                RuntimeWarning,
                stacklevel=2,
            )
    return report
