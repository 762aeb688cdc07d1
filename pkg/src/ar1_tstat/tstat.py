"""Location t-statistics for AR(1) paths, classical and whitened."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .params import Ar1Params

__all__ = [
    "StatKind",
    "TStatResult",
    "DegenerateSampleError",
    "t_statistic",
    "modified_t_statistic",
    "noncentrality",
    "whiten",
    "whitened_mean",
]


class StatKind(enum.Enum):
    CLASSICAL = "classical"
    MODIFIED = "modified"


class DegenerateSampleError(ValueError):
    """All sample values identical: the Bessel variance vanishes."""


@dataclass(frozen=True)
class TStatResult:
    """A t-statistic value together with its building blocks.

    whitened_mean is filled only for the modified statistic: it is the
    exact expectation of the average whitened coordinate, which differs
    from mu whenever mu != 0.
    """

    value: float
    sample_mean: float
    bessel_variance: float
    kind: StatKind
    whitened_mean: float | None = None


def noncentrality(params: Ar1Params) -> float:
    """sqrt(n) mu / sigma, the location offset in innovation units."""
    return math.sqrt(params.n) * params.mu / params.sigma


def whiten(values: np.ndarray, rho: float) -> np.ndarray:
    """Apply the bidiagonal decorrelating map along the last axis.

    Equivalent to multiplying by whitening_matrix in O(n): the first
    coordinate is scaled by sqrt(1 - rho^2) and each later coordinate
    becomes X_i - rho * X_{i-1}. Accepts stacked paths (any leading axes).
    """
    values = np.asarray(values, dtype=float)
    out = np.empty_like(values)
    out[..., 0] = math.sqrt(1.0 - rho * rho) * values[..., 0]
    out[..., 1:] = values[..., 1:] - rho * values[..., :-1]
    return out


def whitened_mean(params: Ar1Params) -> float:
    """Exact mean of the average whitened coordinate.

    Whitening rescales the location: the average of the decorrelated
    coordinates has expectation mu (sqrt(1-rho^2) + (n-1)(1-rho)) / n,
    which collapses to mu only at rho = 0 and vanishes when mu = 0.
    """
    n, rho = params.n, params.rho
    return params.mu * (math.sqrt(1.0 - rho * rho) + (n - 1) * (1.0 - rho)) / n


def _values_of(path_or_values) -> np.ndarray:
    values = getattr(path_or_values, "values", path_or_values)
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise ValueError("need a one-dimensional sample of length >= 2")
    if not np.all(np.isfinite(values)):
        raise ValueError("sample values must be finite")
    return values


def _mean_and_bessel_variance(values: np.ndarray) -> tuple[float, float]:
    # Two passes: mean first, then centered sum of squares. The one-pass
    # update loses digits once mean^2 dominates the variance.
    mean = float(np.mean(values))
    centered = values - mean
    bessel = float(np.sum(centered * centered)) / (values.size - 1)
    return mean, bessel


def t_statistic(path_or_values, mu: float = 0.0) -> TStatResult:
    """Classical statistic sqrt(n) (sample mean - mu) / s.

    s is the Bessel-corrected standard deviation. Under i.i.d. Gaussian
    sampling (rho = 0) with mu the true mean, the value follows a Student
    t law with n - 1 degrees of freedom; under correlation it does not.

    Parameters
    ----------
    path_or_values : SamplePath or array_like
        The observed sample.
    mu : float
        Location subtracted in the numerator.

    Raises
    ------
    DegenerateSampleError
        If every sample value is identical.
    """
    values = _values_of(path_or_values)
    mean, bessel = _mean_and_bessel_variance(values)
    if bessel == 0.0:
        raise DegenerateSampleError(
            "sample variance is zero (all values identical); t-statistic undefined"
        )
    value = math.sqrt(values.size) * (mean - mu) / math.sqrt(bessel)
    return TStatResult(value, mean, bessel, StatKind.CLASSICAL)


def modified_t_statistic(
    path_or_values, params: Ar1Params | None = None
) -> TStatResult:
    """t-statistic of the decorrelated path, numerator still centered at mu.

    The path is whitened first, which makes the coordinates independent
    Gaussians of variance sigma^2. For mu = 0 they are also centered, so
    the statistic follows a Student t law with n - 1 degrees of freedom
    exactly, for every admissible rho. For mu != 0 the numerator keeps
    subtracting mu even though the whitened average has the smaller mean
    reported in the whitened_mean field; that centering mismatch is
    deliberate and left observable.

    Parameters
    ----------
    path_or_values : SamplePath or array_like
        Sample to whiten. A bare array requires explicit params.
    params : Ar1Params, optional
        Must agree with the path's own params when both are present.
    """
    own = getattr(path_or_values, "params", None)
    if params is None:
        params = own
    if params is None:
        raise ValueError("params are required when passing a bare array")
    if own is not None and own != params:
        raise ValueError("params disagree with the path's own params")
    values = _values_of(path_or_values)
    if values.size != params.n:
        raise ValueError(f"sample length {values.size} does not match n = {params.n}")
    whitened = whiten(values, params.rho)
    mean, bessel = _mean_and_bessel_variance(whitened)
    if bessel == 0.0:
        raise DegenerateSampleError(
            "whitened sample variance is zero; modified t-statistic undefined"
        )
    value = math.sqrt(params.n) * (mean - params.mu) / math.sqrt(bessel)
    return TStatResult(
        value, mean, bessel, StatKind.MODIFIED, whitened_mean=whitened_mean(params)
    )
