import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nngpkrig.errors import NotPositiveDefinite, RankDeficientDesign
from nngpkrig.gp import GPConfig, GPRegressor, fit_trend, kriging_weights, posterior
from nngpkrig.kernels import MaternSpec, NNGPSpec, matern_gram

from conftest import random_spd


def test_scalar_weight():
    assert kriging_weights([[1.0]], [[0.5]], 0.0).tolist() == [[0.5]]


def test_interpolation_identity(rng):
    K = random_spd(rng, 6)
    np.testing.assert_allclose(kriging_weights(K, K, 0.0), np.eye(6), atol=1e-12)


def test_joint_scaling_invariance(rng):
    K = random_spd(rng, 8)
    Ks = rng.standard_normal((3, 8))
    H = kriging_weights(K, Ks, 0.3)
    H2 = kriging_weights(7.3 * K, 7.3 * Ks, 7.3 * 0.3)
    assert np.abs(H - H2).max() < 1e-12


def test_not_positive_definite_propagates():
    with pytest.raises(NotPositiveDefinite):
        kriging_weights([[1.0, 2.0], [2.0, 1.0]], [[1.0, 0.0]], 0.0)


def test_posterior_at_training_point(rng):
    X = rng.uniform(size=(10, 2))
    y = rng.standard_normal(10)
    spec = MaternSpec(1.5, 0.5, 1.0)
    K = matern_gram(X, X, spec)
    post = posterior(K, K[[3]], K[[3]][:, [3]], y, 0.0)
    assert post.mean[0] == pytest.approx(y[3], abs=1e-9)
    assert abs(post.covariance[0, 0]) < 1e-9


def test_posterior_uncorrelated(rng):
    K = random_spd(rng, 4)
    Kss = random_spd(rng, 2)
    post = posterior(K, np.zeros((2, 4)), Kss, rng.standard_normal(4), 0.1)
    np.testing.assert_array_equal(post.mean, 0.0)
    np.testing.assert_allclose(post.covariance, 0.5 * (Kss + Kss.T))


def test_posterior_matches_dense_inverse(rng):
    X = rng.uniform(size=(15, 1))
    Xs = rng.uniform(size=(4, 1))
    spec = MaternSpec(2.5, 0.3, 1.7)
    Kff, Ksf, Kss = matern_gram(X, X, spec), matern_gram(Xs, X, spec), matern_gram(Xs, Xs, spec)
    y = rng.standard_normal(15)
    tau2 = 1e-3
    inv = np.linalg.inv(Kff + tau2 * np.eye(15))
    post = posterior(Kff, Ksf, Kss, y, tau2)
    np.testing.assert_allclose(post.mean, Ksf @ inv @ y, atol=1e-8)
    np.testing.assert_allclose(post.covariance, Kss - Ksf @ inv @ Ksf.T, atol=1e-8)


def test_mean_equals_weights_times_y(rng):
    K = random_spd(rng, 7)
    Ks = rng.standard_normal((3, 7))
    y = rng.standard_normal(7)
    H = kriging_weights(K, Ks, 0.01)
    post = posterior(K, Ks, np.eye(3), y, 0.01)
    np.testing.assert_array_equal(post.mean, H @ y)


def test_posterior_variance_shrinks_with_more_data():
    spec = MaternSpec(1.5, 0.3, 1.0)
    xs = np.array([[0.37], [0.81]])
    full = np.linspace(0, 1, 33)[:, None]
    prev = None
    for step in (8, 4, 2, 1):
        X = full[::step]
        post = posterior(matern_gram(X, X, spec), matern_gram(xs, X, spec),
                         matern_gram(xs, xs, spec), np.zeros(len(X)), 1e-6)
        var = np.diag(post.covariance)
        if prev is not None:
            assert np.all(var <= prev + 1e-9)
        prev = var


def test_trend_exact_linear(rng):
    X = rng.uniform(size=(20, 3))
    y = 2.0 + X @ np.array([1.0, -3.0, 0.5])
    trend, resid = fit_trend(X, y)
    assert np.abs(resid).max() < 1e-10
    np.testing.assert_allclose(trend.coefficients, [2.0, 1.0, -3.0, 0.5], atol=1e-10)


def test_trend_zero_column_gives_mean():
    y = np.array([1.0, 4.0, 2.0, 9.0])
    trend, _ = fit_trend(np.zeros((4, 1)), y)
    assert trend.coefficients[0] == pytest.approx(y.mean())
    assert trend.coefficients[1] == 0.0


def test_trend_matches_normal_equations(rng):
    X = rng.standard_normal((30, 4))
    y = rng.standard_normal(30)
    A = np.column_stack([np.ones(30), X])
    beta = np.linalg.solve(A.T @ A, A.T @ y)
    trend, _ = fit_trend(X, y)
    np.testing.assert_allclose(trend.coefficients, beta, atol=1e-10)


def test_trend_rank_deficient(rng):
    X = rng.standard_normal((10, 2))
    X = np.column_stack([X, X[:, 0] + X[:, 1]])
    with pytest.raises(RankDeficientDesign):
        fit_trend(X, rng.standard_normal(10))
    with pytest.raises(RankDeficientDesign):
        fit_trend(np.ones((3, 2)) * [[1], [2], [3]], np.ones(3))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 40), seed=st.integers(0, 2**32 - 1))
def test_interpolation_property(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(size=(n, 2))
    y = rng.standard_normal(n)
    gp = GPRegressor(GPConfig(MaternSpec(1.5, 0.2, 1.0), nugget=0.0)).fit(X, y)
    np.testing.assert_allclose(gp.predict(X).mean, y, atol=1e-8)


def test_regressor_linear_trend(rng):
    X = rng.uniform(size=(25, 2))
    y = 3.0 + X @ [2.0, -1.0]
    gp = GPRegressor(GPConfig(MaternSpec(1.5, 0.5, 1.0), nugget=1e-8, trend="linear")).fit(X, y)
    Xs = rng.uniform(size=(5, 2))
    np.testing.assert_allclose(gp.predict(Xs).mean, 3.0 + Xs @ [2.0, -1.0], atol=1e-9)


def test_regressor_nugget_scales_with_sigma2(rng):
    X = rng.uniform(size=(10, 1))
    Xs = rng.uniform(size=(3, 1))
    y = rng.standard_normal(10)
    a = GPRegressor(GPConfig(MaternSpec(1.5, 0.3, 1.0), nugget=0.05)).fit(X, y).weights(Xs)
    b = GPRegressor(GPConfig(MaternSpec(1.5, 0.3, 40.0), nugget=0.05)).fit(X, y).weights(Xs)
    assert np.abs(a - b).max() < 1e-12


def test_config_validation():
    with pytest.raises(ValueError):
        GPConfig(NNGPSpec(), nugget=-1.0)
    with pytest.raises(ValueError):
        GPConfig(NNGPSpec(), trend="quadratic")
