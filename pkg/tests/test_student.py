"""Student t law: closed-form density, independent quadrature route, CDF."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from ar1_tstat import QuadratureError, StudentLaw


@pytest.mark.parametrize("dof", [0.0, -1.0, float("nan"), float("inf")])
def test_dof_validated(dof):
    with pytest.raises(ValueError):
        StudentLaw(dof)


def test_cauchy_spot_values():
    law = StudentLaw(1.0)
    assert abs(law.density_closed(0.0) - 1.0 / math.pi) < 1e-12
    assert abs(law.density_closed(1.0) - 1.0 / (2.0 * math.pi)) < 1e-12


def test_closed_density_against_scipy():
    law = StudentLaw(7.0)
    t = np.linspace(-10, 10, 101)
    assert np.allclose(law.density_closed(t), stats.t.pdf(t, 7.0), rtol=1e-13, atol=0.0)


@pytest.mark.parametrize("dof", [1.0, 2.0, 5.0, 30.0])
def test_dual_route_agreement(dof):
    """Quadrature route must reproduce the closed form to 1e-8 relative."""
    law = StudentLaw(dof)
    grid = np.linspace(-8.0, 8.0, 161)
    closed = law.density_closed(grid)
    integral = law.density_integral(grid)
    rel = np.abs(integral - closed) / closed
    assert np.max(rel) < 1e-8


def test_dual_route_large_dof_stays_finite():
    # the integrand peak grows like exp(dof); the route has to rescale
    law = StudentLaw(200.0)
    val = law.density_integral(0.0)
    assert val == pytest.approx(law.density_closed(0.0), rel=1e-10)


def test_density_scalar_vs_array():
    law = StudentLaw(4.0)
    arr = law.density_closed(np.array([0.5]))
    assert isinstance(law.density_closed(0.5), float)
    assert arr[0] == law.density_closed(0.5)


def test_density_symmetry():
    law = StudentLaw(3.0)
    t = np.linspace(0.0, 12.0, 25)
    assert np.array_equal(law.density_closed(t), law.density_closed(-t))


def test_mass_integrates_to_one():
    for dof in (1.0, 6.0, 50.0):
        law = StudentLaw(dof)
        mass, err = integrate.quad(law.density_closed, -np.inf, np.inf, limit=200)
        assert abs(mass - 1.0) < 1e-8


def test_normal_limit():
    # for large dof the law approaches the standard normal
    law = StudentLaw(5000.0)
    t = np.linspace(-4, 4, 33)
    normal = np.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)
    assert np.max(np.abs(law.density_closed(t) - normal)) < 2e-4


def test_cdf_scalar_values():
    law = StudentLaw(9.0)
    assert law.cdf(0.0) == pytest.approx(0.5, abs=1e-14)
    assert law.cdf(float("inf")) == 1.0
    assert law.cdf(float("-inf")) == 0.0
    assert law.cdf(1.5) == pytest.approx(stats.t.cdf(1.5, 9.0), rel=1e-10)
    assert law.cdf(-31.0) == pytest.approx(stats.t.cdf(-31.0, 9.0), rel=1e-8)


def test_cdf_reflection():
    law = StudentLaw(6.0)
    for t in (0.3, 1.0, 2.7, 8.0):
        assert law.cdf(-t) == pytest.approx(1.0 - law.cdf(t), abs=1e-13)


def test_cdf_rejects_nan():
    law = StudentLaw(2.0)
    with pytest.raises(ValueError):
        law.cdf(float("nan"))
    with pytest.raises(ValueError):
        law.cdf(np.array([0.0, float("nan")]))


def test_cdf_batch_matches_scalar():
    law = StudentLaw(9.0)
    pts = np.array([-35.0, -4.2, -1.0, -0.25, 0.0, 0.6, 2.0, 31.5])
    batch = law.cdf(pts)
    scal = np.array([law.cdf(float(t)) for t in pts])
    assert np.max(np.abs(batch - scal)) < 1e-10


def test_cdf_batch_against_scipy_dense():
    law = StudentLaw(4.0)
    pts = np.linspace(-20, 20, 401)
    assert np.allclose(law.cdf(pts), stats.t.cdf(pts, 4.0), rtol=0.0, atol=1e-10)


def test_cdf_monotone():
    law = StudentLaw(3.0)
    pts = np.linspace(-15, 15, 301)
    vals = law.cdf(pts)
    assert np.all(np.diff(vals) >= 0.0)
    assert np.all((vals >= 0.0) & (vals <= 1.0))


def test_quadrature_error_is_raised_not_warned():
    # an integrand scipy cannot settle must surface as QuadratureError
    law = StudentLaw(2.0)
    spiky = lambda u: math.sin(1.0 / (abs(u) + 1e-12)) * law.density_closed(u)
    from ar1_tstat.student import _quad

    with pytest.raises(QuadratureError):
        _quad(spiky, 0.0, np.inf, epsabs=1e-300, epsrel=1e-300)
