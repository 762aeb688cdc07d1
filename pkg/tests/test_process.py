import math

import numpy as np
import pytest

from ar1_tstat import (
    Ar1Params,
    NormalLaw,
    SamplePath,
    covariance_matrix,
    linear_combination_law,
    paths_from_normals,
    simulate_path,
    stationary_covariance,
    stream_generator,
)


def test_stream_generator_deterministic():
    a = stream_generator(123, 4).standard_normal(8)
    b = stream_generator(123, 4).standard_normal(8)
    assert np.array_equal(a, b)


def test_streams_differ():
    a = stream_generator(123, 0).standard_normal(8)
    b = stream_generator(123, 1).standard_normal(8)
    assert not np.array_equal(a, b)


def test_stream_bounds_checked():
    with pytest.raises(ValueError):
        stream_generator(-1, 0)
    with pytest.raises(ValueError):
        stream_generator(2**64, 0)
    with pytest.raises(ValueError):
        stream_generator(0, -1)


def test_paths_from_normals_recursion():
    """Hand-unroll the recursion for one short draw."""
    p = Ar1Params(mu=0.5, sigma=2.0, rho=0.6, n=4)
    z = np.array([0.3, -1.2, 0.8, 0.1])
    path = paths_from_normals(p, z)
    x0 = 0.5 + 2.0 / math.sqrt(1.0 - 0.36) * 0.3
    assert path[0] == x0
    x1 = 0.5 + 0.6 * (x0 - 0.5) + 2.0 * -1.2
    assert path[1] == x1
    x2 = 0.5 + 0.6 * (x1 - 0.5) + 2.0 * 0.8
    assert path[2] == x2


def test_paths_from_normals_batched_rows_match_single():
    p = Ar1Params(mu=0.0, sigma=1.0, rho=-0.4, n=6)
    z = stream_generator(9, 0).standard_normal((5, 6))
    block = paths_from_normals(p, z)
    assert block.shape == (5, 6)
    for i in range(5):
        assert np.array_equal(block[i], paths_from_normals(p, z[i]))


def test_paths_from_normals_shape_mismatch():
    p = Ar1Params(mu=0.0, sigma=1.0, rho=0.0, n=4)
    with pytest.raises(ValueError):
        paths_from_normals(p, np.zeros(5))


def test_simulate_path_reproducible_and_tagged():
    p = Ar1Params(mu=1.0, sigma=0.5, rho=0.2, n=12)
    path = simulate_path(p, seed=7, stream=3)
    again = simulate_path(p, seed=7, stream=3)
    assert isinstance(path, SamplePath)
    assert np.array_equal(path.values, again.values)
    assert path.params == p
    assert path.values.shape == (12,)


def test_sample_path_read_only():
    p = Ar1Params(mu=0.0, sigma=1.0, rho=0.0, n=3)
    path = simulate_path(p, seed=0, stream=0)
    with pytest.raises(ValueError):
        path.values[0] = 99.0


def test_stationary_covariance_matches_matrix():
    p = Ar1Params(mu=0.0, sigma=1.3, rho=0.7, n=6)
    om = covariance_matrix(p)
    for t in range(1, 7):
        for u in range(1, 7):
            want = 1.3**2 * om[t - 1, u - 1]
            assert stationary_covariance(p, t, u) == pytest.approx(want, rel=1e-14)


def test_stationary_covariance_index_bounds():
    p = Ar1Params(mu=0.0, sigma=1.0, rho=0.0, n=4)
    with pytest.raises(ValueError):
        stationary_covariance(p, 0, 1)
    with pytest.raises(ValueError):
        stationary_covariance(p, 1, 5)


def test_normal_law_validation():
    law = NormalLaw(mean=1.0, variance=4.0)
    assert law.std == 2.0
    with pytest.raises(ValueError):
        NormalLaw(mean=0.0, variance=-1.0)
    with pytest.raises(ValueError):
        NormalLaw(mean=float("nan"), variance=1.0)


def test_linear_combination_law_against_quadratic_form():
    p = Ar1Params(mu=0.25, sigma=1.5, rho=0.5, n=5)
    w = np.array([0.2, -0.1, 0.4, 0.0, 0.3])
    law = linear_combination_law(p, w)
    cov = 1.5**2 * covariance_matrix(p)
    assert law.mean == pytest.approx(0.25 * w.sum(), rel=1e-15)
    assert law.variance == pytest.approx(float(w @ cov @ w), rel=1e-13)


def test_linear_combination_law_sample_mean_agrees_with_simulation():
    # weak law check: empirical variance of the sample mean within 5 sigma
    p = Ar1Params(mu=0.0, sigma=1.0, rho=0.6, n=8)
    w = np.full(8, 1.0 / 8.0)
    law = linear_combination_law(p, w)
    z = stream_generator(2024, 0).standard_normal((200_000, 8))
    means = paths_from_normals(p, z).mean(axis=1)
    est = means.var(ddof=1)
    se = est * math.sqrt(2.0 / (len(means) - 1))
    assert abs(est - law.variance) < 5 * se
