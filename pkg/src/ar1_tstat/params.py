"""Parameter container and validation for the stationary Gaussian AR(1) model."""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

# |rho| may approach 1 only up to this margin: the stationary variance
# sigma^2 / (1 - rho^2) diverges at the unit root, so boundary values are
# rejected outright instead of producing huge, meaningless numbers.
STATIONARITY_MARGIN = 1e-9


@dataclass(frozen=True)
class Ar1Params:
    """Parameters of a stationary Gaussian first-order autoregression.

    The process is X_t = mu + rho * (X_{t-1} - mu) + sigma * e_t with e_t
    i.i.d. standard normal and X_1 drawn from the stationary marginal
    N(mu, sigma^2 / (1 - rho^2)), so the whole path is stationary.

    Parameters
    ----------
    mu : float
        Location of the stationary distribution.
    sigma : float
        Innovation standard deviation, strictly positive.
    rho : float
        Lag-one autocorrelation, |rho| <= 1 - STATIONARITY_MARGIN.
    n : int
        Number of consecutive observations, at least 2.
    """

    mu: float
    sigma: float
    rho: float
    n: int

    def __post_init__(self) -> None:
        for name in ("mu", "sigma", "rho"):
            raw = getattr(self, name)
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise TypeError(f"{name} must be a real number, got {raw!r}")
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if abs(self.rho) > 1.0 - STATIONARITY_MARGIN:
            raise ValueError(
                f"stationarity requires |rho| <= 1 - {STATIONARITY_MARGIN:g}, "
                f"got rho = {self.rho}"
            )
        if isinstance(self.n, bool):
            raise TypeError(f"n must be an integer, got {self.n!r}")
        try:
            n = operator.index(self.n)
        except TypeError:
            raise TypeError(f"n must be an integer, got {self.n!r}") from None
        object.__setattr__(self, "n", int(n))
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")

    @property
    def marginal_variance(self) -> float:
        """Variance sigma^2 / (1 - rho^2) of a single observation."""
        return self.sigma**2 / (1.0 - self.rho**2)

    @property
    def marginal_std(self) -> float:
        return math.sqrt(self.marginal_variance)
