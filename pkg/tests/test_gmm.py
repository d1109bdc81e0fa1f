"""Tests for EM fitting and the component likelihoods."""
import numpy as np
import pytest
from scipy.integrate import trapezoid

from gmm import EmConfig, GmmError, GmmModel, fit_gmm, floor_covariance


def test_single_component_is_closed_form(rng):
    X = rng.normal(size=(50, 2))
    model = fit_gmm(X, K=1)
    np.testing.assert_allclose(model.means[0], X.mean(axis=0))
    np.testing.assert_allclose(model.covariances[0], np.cov(X, rowvar=False, ddof=0))
    assert model.n_iter == 0


def test_standard_normal_recovered():
    X = np.random.default_rng(42).normal(size=(10_000, 1))
    model = fit_gmm(X, K=1)
    assert abs(model.means[0, 0]) < 0.05
    assert abs(model.covariances[0, 0, 0] - 1.0) < 0.05


def test_two_separated_clusters(rng):
    X = np.concatenate([rng.normal(0.0, 1.0, 300), rng.normal(10.0, 1.0, 100)]).reshape(-1, 1)
    model = fit_gmm(X, K=2, em_config=EmConfig(seed=1))
    order = np.argsort(model.means[:, 0])
    np.testing.assert_allclose(model.means[order, 0], [0.0, 10.0], atol=0.15)
    np.testing.assert_allclose(model.weights[order], [0.75, 0.25], atol=0.02)


def test_bic_selects_two_clusters(rng):
    X = np.concatenate([rng.normal(0.0, 1.0, 200), rng.normal(10.0, 1.0, 200)]).reshape(-1, 1)
    assert fit_gmm(X).n_components == 2


@pytest.mark.parametrize("seed", range(20))
def test_em_log_likelihood_never_decreases(seed):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(rng.uniform(-3, 3, size=2), 1.0, size=(30, 2)) for _ in range(3)])
    model = fit_gmm(X, K=3, em_config=EmConfig(seed=seed))
    assert np.all(np.diff(model.history) >= -1e-9)


def test_more_components_than_rows():
    with pytest.raises(GmmError):
        fit_gmm(np.zeros((3, 1)) + np.arange(3)[:, None], K=4)


def test_identical_rows_fall_back_to_one_component():
    model = fit_gmm(np.ones((10, 2)), K=3)
    assert model.n_components == 1
    assert np.linalg.eigvalsh(model.covariances[0]).min() >= 1e-6 - 1e-15


def test_standard_normal_peak_density():
    model = GmmModel(np.ones(1), np.zeros((1, 1)), np.eye(1)[None])
    assert model.max_component_likelihood(np.zeros(1)) == pytest.approx(1 / np.sqrt(2 * np.pi), abs=1e-5)


def test_bivariate_peak_density():
    model = GmmModel(np.ones(1), np.array([[1.0, -1.0]]), np.eye(2)[None])
    assert model.max_component_likelihood(np.array([1.0, -1.0])) == pytest.approx(1 / (2 * np.pi), abs=1e-5)


def test_density_decays_away_from_mean():
    model = GmmModel(np.array([0.5, 0.5]), np.array([[0.0], [5.0]]), np.stack([np.eye(1), 4 * np.eye(1)]))
    assert model.max_component_likelihood([0.0]) > model.max_component_likelihood([10.0])


def test_likelihood_is_positive_far_away():
    model = GmmModel(np.ones(1), np.zeros((1, 2)), np.eye(2)[None])
    assert model.max_component_likelihood(np.array([1e3, -1e3])) > 0


def test_normalized_likelihood_at_mode_is_one():
    model = GmmModel(np.array([0.3, 0.7]), np.array([[0.0, 0.0], [4.0, 4.0]]),
                     np.stack([np.eye(2), 0.5 * np.eye(2)]))
    assert model.normalized_likelihood(np.array([4.0, 4.0])) == pytest.approx(1.0)
    assert 0 < model.normalized_likelihood(np.array([2.0, 1.0])) < 1


def test_mixture_density_integrates_to_one(rng):
    X = np.concatenate([rng.normal(-2.0, 0.5, 100), rng.normal(3.0, 1.0, 100)]).reshape(-1, 1)
    model = fit_gmm(X, K=2)
    grid = np.linspace(-15, 15, 6001)
    values = np.exp(model.score_samples(grid.reshape(-1, 1)))
    assert trapezoid(values, grid) == pytest.approx(1.0, abs=1e-2)


def test_dimension_mismatch():
    model = GmmModel(np.ones(1), np.zeros((1, 2)), np.eye(2)[None])
    with pytest.raises(GmmError):
        model.max_component_likelihood(np.zeros(3))


def test_floor_only_lifts_small_eigenvalues():
    S = np.diag([2.0, 1e-9])
    np.testing.assert_allclose(np.linalg.eigvalsh(floor_covariance(S, 1e-6)), [1e-6, 2.0])
    np.testing.assert_array_equal(floor_covariance(np.eye(2), 1e-6), np.eye(2))


def test_fit_is_deterministic_for_seed(rng):
    X = rng.normal(size=(80, 2))
    first = fit_gmm(X, K=2, em_config=EmConfig(seed=5))
    second = fit_gmm(X, K=2, em_config=EmConfig(seed=5))
    np.testing.assert_array_equal(first.means, second.means)
