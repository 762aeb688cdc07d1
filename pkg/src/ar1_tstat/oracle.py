"""Matrix-route ground truth for the closed-form moment expressions.

For a zero-mean Gaussian vector Y with covariance S and a symmetric matrix
Q, the classical quadratic-form identities give

    E[Y' Q Y]   = tr(Q S)
    Var[Y' Q Y] = 2 tr((Q S)^2)

The Bessel-corrected sample variance is exactly such a quadratic form (see
``centering_form``), and every statistic treated here is invariant under
adding a constant to the path, so working with the centered process loses
nothing. None of these routines touches the scalar closed forms in
``moments``; agreement between the two routes is therefore evidence, not
circularity.

All matrix work runs in 80-bit extended precision with pairwise
reductions. That keeps the oracle comfortably more accurate than the
float64 expressions it is used to judge: the binding comparisons are at
1e-12 relative, and cancellation at grid corners like (n=2, rho=0.99)
leaves plain float64 with almost no headroom there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import Ar1Params

__all__ = [
    "QuadraticForm",
    "centering_form",
    "form_mean",
    "form_variance",
    "form_second_moment",
    "scaled_mean_variance",
    "covariance_with_mean",
    "mean_covariance_profile",
]

_LD = np.longdouble


@dataclass(frozen=True)
class QuadraticForm:
    """A symmetric matrix viewed as the map y -> y' Q y."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        q = np.array(self.matrix, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"quadratic form must be square, got shape {q.shape}")
        if not np.allclose(q, q.T, rtol=0.0, atol=1e-14):
            raise ValueError("quadratic form must be symmetric (within 1e-14)")
        q.setflags(write=False)
        object.__setattr__(self, "matrix", q)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def evaluate(self, y) -> float:
        """The scalar y' Q y."""
        y = np.asarray(y, dtype=float)
        return float(y @ self.matrix @ y)


def centering_form(n: int) -> QuadraticForm:
    """Form whose value at a path is the Bessel-corrected sample variance.

    The matrix is (I - J/n) / (n - 1) with J the all-ones matrix; it
    annihilates the constant vector, so the form only sees deviations from
    the sample mean.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    q = (np.eye(n) - np.full((n, n), 1.0 / n)) / (n - 1)
    return QuadraticForm(q, label="sample variance")


def _covariance_extended(params: Ar1Params) -> np.ndarray:
    # sigma^2 Omega in extended precision
    rho = _LD(params.rho)
    scale = _LD(params.sigma) ** 2 / (_LD(1.0) - rho * rho)
    idx = np.arange(params.n)
    return scale * rho ** np.abs(idx[:, None] - idx[None, :])


def _check_dim(form: QuadraticForm, params: Ar1Params) -> None:
    if form.dim != params.n:
        raise ValueError(f"form has dim {form.dim}, params have n = {params.n}")


def form_mean(form: QuadraticForm, params: Ar1Params) -> float:
    """E[Y' Q Y] = tr(Q S) for the centered path covariance S = sigma^2 Omega."""
    _check_dim(form, params)
    cov = _covariance_extended(params)
    # tr(Q S) without forming the product: sum of Q entrywise times S.T
    return float((form.matrix.astype(_LD) * cov.T).sum())


def form_variance(form: QuadraticForm, params: Ar1Params) -> float:
    """Var[Y' Q Y] = 2 tr((Q S)^2)."""
    _check_dim(form, params)
    prod = form.matrix.astype(_LD) @ _covariance_extended(params)
    return float(_LD(2.0) * (prod * prod.T).sum())


def form_second_moment(form: QuadraticForm, params: Ar1Params) -> float:
    """E[(Y' Q Y)^2] = (tr Q S)^2 + 2 tr((Q S)^2)."""
    _check_dim(form, params)
    cov = _covariance_extended(params)
    q = form.matrix.astype(_LD)
    mean = (q * cov.T).sum()
    prod = q @ cov
    return float(mean * mean + _LD(2.0) * (prod * prod.T).sum())


def scaled_mean_variance(params: Ar1Params) -> float:
    """Variance of sqrt(n) times the sample mean: the full sum of S over n."""
    cov = _covariance_extended(params)
    return float(cov.sum() / _LD(params.n))


def mean_covariance_profile(params: Ar1Params) -> np.ndarray:
    """Vector of Cov(sample mean, X_j) for j = 1..n, i.e. S 1 / n."""
    cov = _covariance_extended(params)
    return (cov.sum(axis=1) / _LD(params.n)).astype(float)


def covariance_with_mean(params: Ar1Params, j: int) -> float:
    """Cov(sample mean, X_j) as the j-th entry of S 1 / n, 1-based j."""
    if not 1 <= j <= params.n:
        raise ValueError(f"j must lie in 1..{params.n}, got {j}")
    cov = _covariance_extended(params)
    return float(cov[j - 1].sum() / _LD(params.n))
