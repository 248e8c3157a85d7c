"""Exact order-statistic evaluation of weighted empirical-process statistics.

Each supremum-type statistic here is  sqrt(n) * sup |F_hat(t) - t| / w(t)
over (a subinterval of) (0, 1), with weight w(t) = [t(1-t)]^tau for some
tau in [0, 1/2].  Between consecutive jump points of F_hat the discrepancy
is (c - t) / w(t) with c = F_hat held constant, and for every tau in
(0, 1/2] and c in [0, 1]:

* (c - t)/w(t) is strictly decreasing on {t < c}.  Its log-derivative is
  -1/(c-t) + tau*(2t-1)/(t(1-t)), and tau*(2t-1)/(t(1-t)) <= 1/(1-t)
  <= 1/(c-t) because tau <= 1/2 and c <= 1.
* (t - c)/w(t) is strictly increasing on {t > c}.  Its log-derivative is
  1/(t-c) - tau*(1-2t)/(t(1-t)) and tau*(1-2t)/(t(1-t)) <= 1/t <= 1/(t-c)
  because tau <= 1/2 and c >= 0.

Hence on every inter-jump interval the supremum of |F_hat - t|/w(t) is
attained at the left endpoint (as the value at the jump) or at the right
endpoint (as a left limit), so the full supremum is an O(n) max-scan over
the order statistics.  tau = 0 is the same argument with a linear
discrepancy.  The truncated statistics additionally pick up the two domain
boundary points, which enter through the count terms below.

The integral statistic has the classical closed form
   -n - (1/n) * sum_i (2i-1) * [log U_(i) + log(1 - U_(n+1-i))]
for its square; `wgof.oracles` validates it against direct quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log, sqrt
from typing import Callable

import numpy as np

from .samples import NullSample

__all__ = [
    "KINDS",
    "KAPPA_RULES",
    "PowerLaw",
    "StatisticSpec",
    "StatisticValue",
    "SortedBatch",
    "evaluate_batch",
    "ks_statistic",
    "s_statistic",
    "m_statistic",
    "bs_statistic",
    "ej_statistic",
    "c_statistic",
    "i_statistic",
]

KINDS = ("KS", "BS", "EJ", "AD_SUP", "AD_LOG", "WEIGHTED_TAU", "AD_INT")


@dataclass(frozen=True)
class PowerLaw:
    """Sequence rule  n -> coef * n^(-exponent) * (log n)^log_exponent.

    Used both for truncation sequences kappa_n and for deviation levels w_n;
    keeping the exponents explicit lets regime checks compare growth rates
    exactly instead of fitting finite grids.
    """

    coef: float
    exponent: float
    log_exponent: float = 0.0

    def __call__(self, n: int | np.ndarray) -> float | np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        out = self.coef * n ** (-self.exponent)
        if self.log_exponent != 0.0:
            out = out * np.log(n) ** self.log_exponent
        return float(out) if out.ndim == 0 else out

    @property
    def name(self) -> str:
        s = f"{self.coef:g}*n^-{self.exponent:g}"
        if self.log_exponent != 0.0:
            s += f"*log(n)^{self.log_exponent:g}"
        return s


# Named truncation rules for the shrinking-window statistic: a slow rule
# kappa_n = 0.5/sqrt(n) and a fast rule kappa_n = n^(-9/10).
KAPPA_RULES: dict[str, PowerLaw] = {
    "half_inv_sqrt": PowerLaw(0.5, 0.5),
    "inv_n_09": PowerLaw(1.0, 0.9),
}


@dataclass(frozen=True)
class StatisticSpec:
    """Which statistic to evaluate, plus its parameters.

    kind:        one of KINDS
    kappa:       fixed truncation in (0, 1/2)        (BS only)
    kappa_rule:  key into KAPPA_RULES                (EJ only)
    tau:         weight exponent in (0, 1/2)         (WEIGHTED_TAU only)
    """

    kind: str
    kappa: float | None = None
    kappa_rule: str | None = None
    tau: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown statistic kind {self.kind!r}")
        if self.kind == "BS":
            if self.kappa is None or not 0.0 < self.kappa < 0.5:
                raise ValueError("BS requires kappa in (0, 1/2)")
        elif self.kappa is not None:
            raise ValueError("kappa is only valid for kind='BS'")
        if self.kind == "EJ":
            if self.kappa_rule not in KAPPA_RULES:
                raise ValueError(
                    f"EJ requires kappa_rule in {sorted(KAPPA_RULES)}; "
                    f"got {self.kappa_rule!r}"
                )
        elif self.kappa_rule is not None:
            raise ValueError("kappa_rule is only valid for kind='EJ'")
        if self.kind == "WEIGHTED_TAU":
            if self.tau is None or not 0.0 < self.tau < 0.5:
                raise ValueError("WEIGHTED_TAU requires tau in (0, 1/2)")
        elif self.tau is not None:
            raise ValueError("tau is only valid for kind='WEIGHTED_TAU'")

    def kappa_at(self, n: int) -> float | None:
        """Effective truncation for sample size n, validated at use time.

        The fast rule n^(-9/10) only drops below 1/2 from n = 3 on, so the
        (0, 1/2) requirement is enforced here rather than at construction.
        """
        if self.kind == "BS":
            return float(self.kappa)
        if self.kind == "EJ":
            k = float(KAPPA_RULES[self.kappa_rule](n))
            if not 0.0 < k < 0.5:
                raise ValueError(
                    f"kappa rule {self.kappa_rule!r} gives {k:g} at n={n}, "
                    "outside (0, 1/2)"
                )
            return k
        return None

    def params(self) -> str:
        """Canonical parameter string for CSV output."""
        if self.kind == "BS":
            return f"kappa={self.kappa:g}"
        if self.kind == "EJ":
            return f"rule={self.kappa_rule}"
        if self.kind == "WEIGHTED_TAU":
            return f"tau={self.tau:g}"
        return ""

    @property
    def label(self) -> str:
        p = self.params()
        return self.kind if not p else f"{self.kind}[{p}]"


@dataclass(frozen=True)
class StatisticValue:
    value: float
    spec: StatisticSpec
    n: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.value) or self.value < 0.0:
            raise ValueError(f"statistic value must be finite and >= 0, got {self.value}")


class SortedBatch:
    """A (reps, n) block of sorted samples with lazily cached shared arrays.

    The Monte Carlo engine evaluates several statistics on the same
    replicates; the one-sided discrepancies and the t(1-t) product are
    shared across all supremum statistics, so they are computed once.
    """

    def __init__(self, u_sorted: np.ndarray):
        self.u = u_sorted
        self.n = u_sorted.shape[1]
        self._hi = None  # i/n - U_(i)
        self._lo = None  # U_(i) - (i-1)/n
        self._t1mt = None  # U_(i) * (1 - U_(i))

    @property
    def d_hi(self) -> np.ndarray:
        if self._hi is None:
            grid = np.arange(1, self.n + 1, dtype=np.float64) / self.n
            self._hi = grid - self.u
        return self._hi

    @property
    def d_lo(self) -> np.ndarray:
        if self._lo is None:
            grid = np.arange(0, self.n, dtype=np.float64) / self.n
            self._lo = self.u - grid
        return self._lo

    @property
    def t1mt(self) -> np.ndarray:
        if self._t1mt is None:
            self._t1mt = self.u * (1.0 - self.u)
        return self._t1mt


def _sup_unweighted(batch: SortedBatch) -> np.ndarray:
    n = batch.n
    d = np.maximum(batch.d_hi.max(axis=1), batch.d_lo.max(axis=1))
    return sqrt(n) * d


def _sup_weighted(batch: SortedBatch, tau: float) -> np.ndarray:
    n = batch.n
    w = np.sqrt(batch.t1mt) if tau == 0.5 else batch.t1mt**tau
    d = np.maximum(batch.d_hi / w, batch.d_lo / w).max(axis=1)
    return sqrt(n) * d


def _sup_truncated(batch: SortedBatch, kappa: float) -> np.ndarray:
    """Uniform-weight supremum over [kappa, 1-kappa], exactly.

    Interior part: order statistics inside the window contribute
    max(|U-i/n|, |U-(i-1)/n|) / sqrt(U(1-U)).  Boundary part: with
    I1 = first index whose order statistic exceeds kappa and I2 = number
    of order statistics below 1-kappa (sentinels U_(0)=0, U_(n+1)=1),
    the window endpoints contribute
    max(|I1/n - 1/n - kappa|, |I2/n - 1 + kappa|) / sqrt(kappa(1-kappa)).
    """
    u = batch.u
    n = batch.n
    inside = (u >= kappa) & (u <= 1.0 - kappa)
    interior_terms = np.maximum(np.abs(batch.d_hi), np.abs(batch.d_lo))
    interior_terms = interior_terms / np.sqrt(batch.t1mt)
    interior = np.where(inside, interior_terms, -np.inf).max(axis=1)

    i1 = (u <= kappa).sum(axis=1) + 1.0
    i2 = (u < 1.0 - kappa).sum(axis=1).astype(np.float64)
    t_bound = np.maximum(
        np.abs(i1 / n - 1.0 / n - kappa), np.abs(i2 / n - 1.0 + kappa)
    )
    boundary = t_bound / sqrt(kappa * (1.0 - kappa))
    return sqrt(n) * np.maximum(interior, boundary)


def _ad_integral(batch: SortedBatch) -> np.ndarray:
    n = batch.n
    coeff = np.arange(1, 2 * n + 1, 2, dtype=np.float64)
    # log(1-U) via log1p for order statistics near 1
    s = coeff * (np.log(batch.u) + np.log1p(-batch.u[:, ::-1]))
    isq = -n - s.sum(axis=1) / n
    return np.sqrt(np.maximum(isq, 0.0))


def evaluate_batch(spec: StatisticSpec, batch: SortedBatch) -> np.ndarray:
    """Evaluate one statistic on every row of a sorted batch."""
    if spec.kind == "KS":
        return _sup_unweighted(batch)
    if spec.kind == "AD_SUP":
        return _sup_weighted(batch, 0.5)
    if spec.kind == "AD_LOG":
        return np.sqrt(np.log1p(_sup_weighted(batch, 0.5)))
    if spec.kind == "WEIGHTED_TAU":
        return _sup_weighted(batch, spec.tau)
    if spec.kind in ("BS", "EJ"):
        return _sup_truncated(batch, spec.kappa_at(batch.n))
    if spec.kind == "AD_INT":
        return _ad_integral(batch)
    raise AssertionError(f"unhandled kind {spec.kind}")


def _single(sample: NullSample, spec: StatisticSpec) -> StatisticValue:
    value = float(evaluate_batch(spec, SortedBatch(sample.as_row()))[0])
    return StatisticValue(value=value, spec=spec, n=sample.n)


def ks_statistic(sample: NullSample) -> StatisticValue:
    """sqrt(n) * sup |F_hat(t) - t| over (0, 1)."""
    return _single(sample, StatisticSpec("KS"))


def s_statistic(sample: NullSample) -> StatisticValue:
    """sqrt(n) * sup |F_hat(t) - t| / sqrt(t(1-t)) over (0, 1)."""
    return _single(sample, StatisticSpec("AD_SUP"))


def m_statistic(sample: NullSample) -> StatisticValue:
    """sqrt(log(1 + S_n)): the deviation-stabilising transform of s_statistic."""
    return _single(sample, StatisticSpec("AD_LOG"))


def bs_statistic(sample: NullSample, kappa: float) -> StatisticValue:
    """Uniform-weight supremum over the fixed window [kappa, 1-kappa]."""
    return _single(sample, StatisticSpec("BS", kappa=kappa))


def ej_statistic(sample: NullSample, kappa_n: float) -> StatisticValue:
    """Uniform-weight supremum over [kappa_n, 1-kappa_n] for an externally
    supplied truncation value (the shrinking-window statistic at this n)."""
    if not 0.0 < kappa_n < 0.5:
        raise ValueError("kappa_n must lie in (0, 1/2)")
    value = float(_sup_truncated(SortedBatch(sample.as_row()), kappa_n)[0])
    # EJ specs are rule-based; a loose spec records the window as fixed.
    return StatisticValue(value=value, spec=StatisticSpec("BS", kappa=kappa_n), n=sample.n)


def c_statistic(sample: NullSample, tau: float) -> StatisticValue:
    """sqrt(n) * sup |F_hat(t) - t| / [t(1-t)]^tau over (0, 1)."""
    return _single(sample, StatisticSpec("WEIGHTED_TAU", tau=tau))


def i_statistic(sample: NullSample) -> StatisticValue:
    """Square root of the integral Anderson-Darling quadratic discrepancy."""
    return _single(sample, StatisticSpec("AD_INT"))
