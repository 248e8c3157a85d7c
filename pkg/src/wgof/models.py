"""Alternative families on the unit interval.

Each family describes a fixed departure from uniformity after the null
probability integral transform: its distribution function H(t) on (0, 1),
the raw density perturbation h(t) - 1, and an exact sampler.  Families m1-m3
are departures from a standard Gaussian null (location shift, scale change,
location-shift contamination); m4 reallocates mass directly onto the tails
of the unit interval; m5-m7 contaminate the Gaussian null with components of
increasingly heavy tails (Lehmann, Subbotin, symmetric Pareto).

Samplers consume pre-drawn uniform "lanes" (selector, main, auxiliary) so
that every replicate's draws occupy fixed positions of a counter-based
stream; they are pure inverse-CDF maps with no rejection steps.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from math import gamma as gamma_fn
from math import log, pi, sqrt

import numpy as np
from scipy.integrate import quad
from scipy.special import gammainc, gammaincc, gammaincinv, ndtr, ndtri

from .samples import clip_open_unit

__all__ = [
    "AlternativeModel",
    "NormalShift",
    "NormalScale",
    "NormalContamination",
    "TailMass",
    "LehmannMixture",
    "SubbotinMixture",
    "ParetoMixture",
    "FAMILIES",
    "parse_model",
    "subbotin_norm_const",
    "subbotin_cdf",
    "pareto_cdf",
]

_SQRT_2PI = sqrt(2.0 * pi)


def _phi(x: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * x * x) / _SQRT_2PI


def subbotin_norm_const(gamma_: float) -> float:
    """Normaliser C of the density C * exp(-|x|^gamma / gamma)."""
    return gamma_ ** (1.0 - 1.0 / gamma_) / (2.0 * gamma_fn(1.0 / gamma_))


def subbotin_cdf(x: np.ndarray, gamma_: float) -> np.ndarray:
    """Distribution function of the symmetric Subbotin law.

    Uses |X|^gamma / gamma ~ Gamma(1/gamma, 1), i.e. the regularised lower
    incomplete gamma function of |x|^gamma / gamma.
    """
    x = np.asarray(x, dtype=np.float64)
    half = 0.5 * gammainc(1.0 / gamma_, np.abs(x) ** gamma_ / gamma_)
    return 0.5 + np.sign(x) * half


def pareto_cdf(x: np.ndarray, zeta: float) -> np.ndarray:
    """Symmetric Pareto distribution function: |x|^-zeta/2 below -1, flat 1/2
    on [-1, 1], 1 - x^-zeta/2 above 1."""
    x = np.asarray(x, dtype=np.float64)
    out = np.full(x.shape, 0.5)
    lo = x < -1.0
    hi = x > 1.0
    out[lo] = 0.5 * np.abs(x[lo]) ** (-zeta)
    out[hi] = 1.0 - 0.5 * x[hi] ** (-zeta)
    return out


class AlternativeModel:
    """Shared behaviour of the concrete families (all frozen dataclasses).

    Subclasses provide:
      cdf(t)               -- H(t), vectorised on (0, 1)
      raw_perturbation(t)  -- h(t) - 1, vectorised on (0, 1)
      map_uniforms(sel, v, aux) -- inverse-CDF sampler from uniform lanes
    """

    family: str = "?"

    def params(self) -> dict[str, float]:
        out = {}
        for f in fields(self):
            name = _FIELD_DISPLAY.get(f.name, f.name)
            out[name] = getattr(self, f.name)
        return out

    @property
    def label(self) -> str:
        inner = " ".join(f"{k}={v:g}" for k, v in self.params().items())
        return f"{self.family} {inner}"

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n sorted draws with distribution function cdf(), for ad-hoc use.

        The Monte Carlo engine calls map_uniforms directly on its own
        counter-based lanes; this convenience wrapper just feeds it three
        lanes from the supplied generator.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        lanes = rng.random((3, n))
        u = self.map_uniforms(lanes[0], lanes[1], lanes[2])
        return np.sort(u)

    def is_null(self) -> bool:
        """True when the parameters make H(t) = t identically."""
        return False

    def theta_raw(self) -> float:
        """Exact L1 norm of the raw density perturbation h - 1 on (0, 1).

        Families override this with a closed form or a quadrature in the
        coordinate where their tails are representable; the t-space
        quadrature in `wgof.shapes.theta_by_quadrature` is the test oracle.
        """
        raise NotImplementedError


def _open(v: np.ndarray) -> np.ndarray:
    # keep inverse-CDF arguments away from exact 0/1
    return np.clip(v, 1e-300, 1.0 - 1e-16)


@dataclass(frozen=True)
class NormalShift(AlternativeModel):
    """Gaussian location shift: H(t) = Phi(Phi^-1(t) - mu)."""

    mu: float
    family = "m1"

    def __post_init__(self) -> None:
        if self.mu == 0.0:
            raise ValueError("mu must be nonzero")

    def cdf(self, t: np.ndarray) -> np.ndarray:
        return ndtr(ndtri(t) - self.mu)

    def raw_perturbation(self, t: np.ndarray) -> np.ndarray:
        x = ndtri(t)
        return np.exp(self.mu * x - 0.5 * self.mu**2) - 1.0

    def theta_raw(self) -> float:
        # integral of |phi(x - mu) - phi(x)|; the densities cross at mu/2
        return 2.0 * (2.0 * float(ndtr(abs(self.mu) / 2.0)) - 1.0)

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        return clip_open_unit(ndtr(ndtri(_open(v)) + self.mu))


@dataclass(frozen=True)
class NormalScale(AlternativeModel):
    """Gaussian scale change: H(t) = Phi(Phi^-1(t) / sigma)."""

    sigma: float
    family = "m2"

    def __post_init__(self) -> None:
        if self.sigma <= 0.0 or self.sigma == 1.0:
            raise ValueError("sigma must be positive and != 1")

    def cdf(self, t: np.ndarray) -> np.ndarray:
        return ndtr(ndtri(t) / self.sigma)

    def raw_perturbation(self, t: np.ndarray) -> np.ndarray:
        x = ndtri(t)
        return np.exp(0.5 * x * x * (1.0 - self.sigma**-2)) / self.sigma - 1.0

    def theta_raw(self) -> float:
        # densities phi(x/sigma)/sigma and phi(x) cross at +-x_star
        s = self.sigma
        x_star = s * sqrt(2.0 * log(s) / (s * s - 1.0))
        return 4.0 * abs(float(ndtr(x_star / s)) - float(ndtr(x_star)))

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        return clip_open_unit(ndtr(self.sigma * ndtri(_open(v))))


@dataclass(frozen=True)
class NormalContamination(AlternativeModel):
    """Location-shift contamination: H(t) = (1-p) t + p Phi(Phi^-1(t) - mu)."""

    p: float
    mu: float
    family = "m3"

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie in (0, 1)")
        if self.mu == 0.0:
            raise ValueError("mu must be nonzero")

    def cdf(self, t: np.ndarray) -> np.ndarray:
        return (1.0 - self.p) * t + self.p * ndtr(ndtri(t) - self.mu)

    def raw_perturbation(self, t: np.ndarray) -> np.ndarray:
        x = ndtri(t)
        return self.p * (np.exp(self.mu * x - 0.5 * self.mu**2) - 1.0)

    def theta_raw(self) -> float:
        # the perturbation is p times the pure-shift one, so the normalised
        # shapes of m1 and m3 agree exactly
        return self.p * NormalShift(self.mu).theta_raw()

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        shifted = ndtr(ndtri(_open(v)) + self.mu)
        return clip_open_unit(np.where(sel < self.p, shifted, v))


@dataclass(frozen=True)
class TailMass(AlternativeModel):
    """Mass reallocated onto both tails of the unit interval.

    H(t) = pi^((beta-1)/beta) t^(1/beta) on [0, pi), t on [pi, 1-pi],
    and the mirrored form on (1-pi, 1].  beta > 1 makes both tails heavier
    than uniform, beta < 1 lighter; pi bounds the affected mass.
    """

    beta: float
    pi_mass: float
    family = "m4"

    def __post_init__(self) -> None:
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if not 0.0 <= self.pi_mass <= 0.5:
            raise ValueError("pi_mass must lie in [0, 0.5]")

    def is_null(self) -> bool:
        return self.pi_mass == 0.0 or self.beta == 1.0

    def _edge_coef(self) -> float:
        return self.pi_mass ** ((self.beta - 1.0) / self.beta)

    def cdf(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.is_null():
            return t.copy()
        c = self._edge_coef()
        b = self.beta
        pm = self.pi_mass
        out = t.copy()
        lo = t < pm
        hi = t > 1.0 - pm
        out[lo] = c * t[lo] ** (1.0 / b)
        out[hi] = 1.0 - c * (1.0 - t[hi]) ** (1.0 / b)
        return out

    def raw_perturbation(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.is_null():
            return np.zeros_like(t)
        c = self._edge_coef() / self.beta
        b = self.beta
        pm = self.pi_mass
        out = np.zeros_like(t)
        lo = t < pm
        hi = t > 1.0 - pm
        out[lo] = c * t[lo] ** (1.0 / b - 1.0) - 1.0
        out[hi] = c * (1.0 - t[hi]) ** (1.0 / b - 1.0) - 1.0
        return out

    def theta_raw(self) -> float:
        # per tail the density crosses 1 at t = beta^(beta/(1-beta)) * pi
        b = self.beta
        t_cross = b ** (b / (1.0 - b)) * self.pi_mass
        h_cross = self._edge_coef() * t_cross ** (1.0 / b)
        return 4.0 * abs(h_cross - t_cross)

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        if self.is_null():
            return clip_open_unit(np.asarray(v, dtype=np.float64).copy())
        b = self.beta
        pm = self.pi_mass
        scale = pm ** (1.0 - b)
        out = np.asarray(v, dtype=np.float64).copy()
        lo = out < pm
        hi = out > 1.0 - pm
        out[lo] = out[lo] ** b * scale
        out[hi] = 1.0 - (1.0 - out[hi]) ** b * scale
        return clip_open_unit(out)


@dataclass(frozen=True)
class LehmannMixture(AlternativeModel):
    """Lehmann contamination: H(t) = (1-p) t + p t^delta."""

    delta: float
    p: float
    family = "m5"

    def __post_init__(self) -> None:
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    def is_null(self) -> bool:
        return self.p == 0.0 or self.delta == 1.0

    def cdf(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return (1.0 - self.p) * t + self.p * t**self.delta

    def raw_perturbation(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return self.p * (self.delta * t ** (self.delta - 1.0) - 1.0)

    def theta_raw(self) -> float:
        # the component density delta * t^(delta-1) crosses 1 at
        # t = delta^(1/(1-delta))
        d = self.delta
        t_cross = d ** (1.0 / (1.0 - d))
        return 2.0 * self.p * abs(t_cross**d - t_cross)

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        comp = _open(v) ** (1.0 / self.delta)
        return clip_open_unit(np.where(sel < self.p, comp, v))


@dataclass(frozen=True)
class SubbotinMixture(AlternativeModel):
    """Subbotin contamination of the Gaussian null.

    The component has density C exp(-|x|^gamma / gamma); gamma = 2 is the
    null itself, gamma < 2 has heavier-than-Gaussian tails.
    """

    gamma_: float
    p: float
    family = "m6"

    def __post_init__(self) -> None:
        if self.gamma_ <= 0.0:
            raise ValueError("gamma must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    def is_null(self) -> bool:
        return self.p == 0.0 or self.gamma_ == 2.0

    def cdf(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return (1.0 - self.p) * t + self.p * subbotin_cdf(ndtri(t), self.gamma_)

    def raw_perturbation(self, t: np.ndarray) -> np.ndarray:
        x = ndtri(np.asarray(t, dtype=np.float64))
        c = subbotin_norm_const(self.gamma_)
        dens_ratio = c * np.exp(0.5 * x * x - np.abs(x) ** self.gamma_ / self.gamma_)
        return self.p * (_SQRT_2PI * dens_ratio - 1.0)

    def theta_raw(self) -> float:
        # |component density - phi| integrated in x-space: quadrature on
        # [0, X] plus the exact tail difference beyond X, where the heavier
        # density dominates pointwise; doubled by symmetry
        g = self.gamma_
        c = subbotin_norm_const(g)
        x_cut = 40.0
        body, _ = quad(
            lambda x: abs(c * np.exp(-(x**g) / g) - _phi(np.asarray(x))),
            0.0,
            x_cut,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=300,
        )
        comp_tail = 0.5 * float(gammaincc(1.0 / g, x_cut**g / g))
        gauss_tail = float(ndtr(-x_cut))
        return 2.0 * self.p * (body + abs(comp_tail - gauss_tail))

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        out = np.asarray(v, dtype=np.float64).copy()
        pick = np.asarray(sel) < self.p
        if np.any(pick):
            g = gammaincinv(1.0 / self.gamma_, _open(np.asarray(v)[pick]))
            x = (self.gamma_ * g) ** (1.0 / self.gamma_)
            x = np.where(np.asarray(aux)[pick] < 0.5, -x, x)
            out[pick] = ndtr(x)
        return clip_open_unit(out)


@dataclass(frozen=True)
class ParetoMixture(AlternativeModel):
    """Symmetric-Pareto contamination of the Gaussian null."""

    zeta: float
    p: float
    family = "m7"

    def __post_init__(self) -> None:
        if self.zeta <= 0.0:
            raise ValueError("zeta must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    def is_null(self) -> bool:
        return self.p == 0.0

    def cdf(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return (1.0 - self.p) * t + self.p * pareto_cdf(ndtri(t), self.zeta)

    def raw_perturbation(self, t: np.ndarray) -> np.ndarray:
        x = ndtri(np.asarray(t, dtype=np.float64))
        out = np.full(x.shape, -self.p)
        far = np.abs(x) > 1.0
        xf = np.abs(x[far])
        dens = 0.5 * self.zeta * xf ** (-self.zeta - 1.0)
        out[far] = self.p * (dens / _phi(xf) - 1.0)
        return out

    def theta_raw(self) -> float:
        # component has no mass on [-1, 1] and dominates phi far out; the
        # quantile levels of its far tail are not representable in t-space,
        # which is why this is evaluated in x-space
        z = self.zeta
        x_cut = 40.0
        inner = float(ndtr(1.0)) - 0.5  # integral of phi over [0, 1]
        body, _ = quad(
            lambda x: abs(0.5 * z * x ** (-z - 1.0) - _phi(np.asarray(x))),
            1.0,
            x_cut,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=300,
        )
        comp_tail = 0.5 * x_cut ** (-z)
        gauss_tail = float(ndtr(-x_cut))
        return 2.0 * self.p * (inner + body + comp_tail - gauss_tail)

    def map_uniforms(self, sel, v, aux) -> np.ndarray:
        out = np.asarray(v, dtype=np.float64).copy()
        pick = np.asarray(sel) < self.p
        if np.any(pick):
            w = _open(np.asarray(v)[pick])
            x = np.where(
                w < 0.5,
                -((2.0 * w) ** (-1.0 / self.zeta)),
                (2.0 * (1.0 - w)) ** (-1.0 / self.zeta),
            )
            out[pick] = ndtr(x)
        return clip_open_unit(out)


FAMILIES: dict[str, tuple[type, tuple[str, ...]]] = {
    "m1": (NormalShift, ("mu",)),
    "m2": (NormalScale, ("sigma",)),
    "m3": (NormalContamination, ("p", "mu")),
    "m4": (TailMass, ("beta", "pi")),
    "m5": (LehmannMixture, ("delta", "p")),
    "m6": (SubbotinMixture, ("gamma", "p")),
    "m7": (ParetoMixture, ("zeta", "p")),
}

# CLI spelling of constructor fields that shadow builtins
_FIELD_ALIASES = {"pi": "pi_mass", "gamma": "gamma_"}
_FIELD_DISPLAY = {v: k for k, v in _FIELD_ALIASES.items()}


def parse_model(text: str) -> AlternativeModel:
    """Parse a model spec like "m3 p=0.05 mu=2.0" or "m5 delta=0.3 p=0.1"."""
    parts = text.split()
    if not parts:
        raise ValueError("empty model spec")
    family = parts[0].lower()
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    cls, names = FAMILIES[family]
    kwargs: dict[str, float] = {}
    for item in parts[1:]:
        if "=" not in item:
            raise ValueError(f"malformed parameter {item!r}; expected name=value")
        key, _, raw = item.partition("=")
        key = key.strip().lower()
        if key not in names:
            raise ValueError(f"family {family} takes parameters {names}, not {key!r}")
        kwargs[_FIELD_ALIASES.get(key, key)] = float(raw)
    expected = {_FIELD_ALIASES.get(k, k) for k in names}
    if set(kwargs) != expected:
        raise ValueError(f"family {family} requires parameters {names}")
    return cls(**kwargs)
