"""Path simulation and elementary distribution theory for stationary AR(1)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrices import covariance_matrix
from .params import Ar1Params

__all__ = [
    "NormalLaw",
    "SamplePath",
    "simulate_path",
    "stationary_covariance",
    "linear_combination_law",
    "paths_from_normals",
    "stream_generator",
]

_MAX_SEED = 2**64  # Philox keys are 64-bit words


@dataclass(frozen=True)
class NormalLaw:
    """Mean and variance of a univariate normal distribution."""

    mean: float
    variance: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise ValueError("normal law needs finite mean and variance")
        if self.variance < 0.0:
            raise ValueError(f"variance must be nonnegative, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class SamplePath:
    """A simulated path together with the exact inputs that produced it.

    Regenerating with the same (params, seed, stream) reproduces ``values``
    bit for bit; the array is frozen to keep that guarantee meaningful.
    """

    values: np.ndarray
    params: Ar1Params
    seed: int
    stream: int

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.params.n,):
            raise ValueError(
                f"path has shape {values.shape}, expected ({self.params.n},)"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    """Counter-based generator for the (seed, stream) pair.

    Philox is counter-based, so the pair fully determines the draws, with
    no dependence on how many other streams exist or on scheduling.
    """
    if not 0 <= int(seed) < _MAX_SEED:
        raise ValueError(f"seed must lie in [0, 2**64), got {seed}")
    if int(stream) < 0:
        raise ValueError(f"stream must be nonnegative, got {stream}")
    return np.random.Generator(np.random.Philox(key=int(seed)).jumped(int(stream)))


def paths_from_normals(params: Ar1Params, normals: np.ndarray) -> np.ndarray:
    """Turn standard-normal innovations into AR(1) paths along the last axis.

    The first coordinate is scaled into the stationary marginal; later
    coordinates follow the mean-reverting recursion. Both the single-path
    simulator and the replication engine route through this function, so a
    path drawn in a block matches the standalone draw bit for bit.

    Parameters
    ----------
    params : Ar1Params
    normals : numpy.ndarray
        Array whose last axis has length params.n.
    """
    if normals.shape[-1] != params.n:
        raise ValueError(
            f"innovations have last axis {normals.shape[-1]}, expected {params.n}"
        )
    mu, sigma, rho = params.mu, params.sigma, params.rho
    paths = np.empty_like(normals)
    paths[..., 0] = mu + (sigma / math.sqrt(1.0 - rho * rho)) * normals[..., 0]
    for t in range(1, params.n):
        paths[..., t] = mu + rho * (paths[..., t - 1] - mu) + sigma * normals[..., t]
    return paths


def simulate_path(params: Ar1Params, seed: int, stream: int = 0) -> SamplePath:
    """Draw one stationary path from the counter-based stream (seed, stream)."""
    rng = stream_generator(seed, stream)
    normals = rng.standard_normal(params.n)
    return SamplePath(paths_from_normals(params, normals), params, int(seed), int(stream))


def stationary_covariance(params: Ar1Params, t: int, u: int) -> float:
    """Cov(X_t, X_u) = sigma^2 rho^|t-u| / (1 - rho^2) for 1-based t, u."""
    for label, k in (("t", t), ("u", u)):
        if not 1 <= k <= params.n:
            raise ValueError(f"{label} must lie in 1..{params.n}, got {k}")
    return params.marginal_variance * params.rho ** abs(t - u)


def linear_combination_law(params: Ar1Params, weights) -> NormalLaw:
    """Exact law of the scalar product of weights with the path.

    Any linear combination of jointly Gaussian coordinates is normal; the
    mean is mu times the weight sum and the variance is the double sum
    sigma^2 * sum_{j,k} w_j w_k Omega_{jk} over the covariance entries.

    Parameters
    ----------
    params : Ar1Params
    weights : array_like
        Finite coefficients, length params.n.

    Returns
    -------
    NormalLaw
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (params.n,):
        raise ValueError(f"weights must have shape ({params.n},), got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    cov = covariance_matrix(params)
    variance = params.sigma**2 * float(w @ cov @ w)
    # roundoff can push an exact zero a hair negative
    return NormalLaw(mean=params.mu * float(w.sum()), variance=max(variance, 0.0))
