"""Validated samples on the open unit interval.

Every statistic in this package consumes observations that have already been
pushed through the null distribution function, so the null hypothesis is
always "uniform on (0, 1)".  Values at or outside {0, 1} are rejected rather
than clamped: the weights t(1-t) are singular there and silent clamping of
ingested data would distort the weighted suprema arbitrarily.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

__all__ = ["NullSample", "OPEN_MIN", "OPEN_MAX", "clip_open_unit", "gaussian_pit"]

# Extreme doubles strictly inside (0, 1).  Internal samplers clamp to these
# when a transform saturates in float64; external data is never clamped.
OPEN_MIN = float(np.nextafter(0.0, 1.0))
OPEN_MAX = float(np.nextafter(1.0, 0.0))


def clip_open_unit(u: np.ndarray) -> np.ndarray:
    """Clamp an array into the open unit interval (in place when possible)."""
    return np.clip(u, OPEN_MIN, OPEN_MAX, out=u if isinstance(u, np.ndarray) else None)


@dataclass(frozen=True)
class NullSample:
    """Sorted observations strictly inside (0, 1).

    The constructor accepts values in any order and stores a sorted copy;
    all statistics depend on the sample only through its order statistics.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.sort(np.asarray(self.values, dtype=np.float64))
        if v.ndim != 1 or v.size < 1:
            raise ValueError("sample must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample contains non-finite values")
        if v[0] <= 0.0 or v[-1] >= 1.0:
            bad = int(np.argmin(v) if v[0] <= 0.0 else np.argmax(v))
            raise ValueError(
                f"sample values must lie strictly inside (0, 1); offending value "
                f"{v[bad] if v[0] <= 0.0 else v[-1]!r}"
            )
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def as_row(self) -> np.ndarray:
        """View as a (1, n) batch for the vectorised evaluators."""
        return self.values[None, :]


def gaussian_pit(x: np.ndarray, mu0: float = 0.0, sigma0: float = 1.0) -> np.ndarray:
    """Probability integral transform under a Gaussian null.

    Maps raw data to (0, 1) via the null distribution function.  No clamping:
    values that saturate to 0 or 1 in float64 are left for `NullSample`
    validation to reject, with the row index reported by the caller.
    """
    if sigma0 <= 0.0:
        raise ValueError("sigma0 must be positive")
    return ndtr((np.asarray(x, dtype=np.float64) - mu0) / sigma0)
