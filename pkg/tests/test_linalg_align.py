"""Tests for regularized covariance and covariance alignment."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import minimize

from linalg_align import (
    AlignmentError,
    AlignmentFrame,
    AlignmentTransform,
    align_row,
    alignment_objective,
    apply_alignment,
    coral_transform,
    regularized_covariance,
)
from streams import DataBatch


def _random_spd(rng, d):
    M = rng.normal(size=(d, d))
    return M @ M.T + 0.1 * np.eye(d)


def _oracle_objective(C_S, C_T):
    d = C_S.shape[0]
    result = minimize(lambda a: alignment_objective(a.reshape(d, d), C_S, C_T), np.eye(d).ravel(),
                      method="BFGS", options={"gtol": 1e-12, "maxiter": 5000})
    return result.fun


def test_identical_rows_give_identity():
    batch = DataBatch(np.tile([1.0, -2.0], (5, 1)))
    np.testing.assert_allclose(regularized_covariance(batch), np.eye(2))


def test_one_dimensional_sample_covariance():
    """{0, 2}: sample variance 2 with denominator n-1, plus 1."""
    np.testing.assert_allclose(regularized_covariance(DataBatch(np.array([[0.0], [2.0]]))), [[3.0]])


def test_row_scaling_changes_covariance(rng):
    X = rng.normal(size=(20, 3))
    half = regularized_covariance(X, np.full(20, 0.5))
    full = regularized_covariance(X, np.ones(20))
    assert not np.allclose(half, full)


def test_covariance_errors():
    with pytest.raises(AlignmentError):
        regularized_covariance(np.array([[1.0, 2.0]]))
    with pytest.raises(AlignmentError):
        regularized_covariance(np.zeros((3, 2)), np.zeros(3))


@given(arrays(np.float64, (6, 3), elements=st.floats(-100, 100)))
def test_covariance_is_exactly_symmetric(X):
    C = regularized_covariance(X)
    assert np.array_equal(C, C.T)


def test_identity_covariances_give_identity():
    np.testing.assert_allclose(coral_transform(np.eye(3), np.eye(3)).matrix, np.eye(3), atol=1e-12)


def test_one_dimensional_closed_form():
    """4^{-1/2} * 9^{1/2} = 1.5."""
    np.testing.assert_allclose(coral_transform([[4.0]], [[9.0]]).matrix, [[1.5]])


def test_transform_errors():
    with pytest.raises(AlignmentError):
        coral_transform(np.eye(2), np.eye(3))
    with pytest.raises(AlignmentError):
        coral_transform(np.array([[1.0, 0.5], [0.0, 1.0]]), np.eye(2))


@pytest.mark.parametrize("d", [2, 3])
def test_matches_numerical_minimizer(d):
    rng = np.random.default_rng(d)
    for _ in range(25):
        C_S, C_T = _random_spd(rng, d), _random_spd(rng, d)
        transform = coral_transform(C_S, C_T)
        ours = alignment_objective(transform.matrix, C_S, C_T)
        assert abs(ours - _oracle_objective(C_S, C_T)) < 1e-4
        residual = np.linalg.norm(transform.matrix.T @ C_S @ transform.matrix - C_T)
        assert residual / np.linalg.norm(C_T) < 1e-8
        assert transform.rank == d


def test_rank_deficient_target_is_top_eigen_reconstruction(rng):
    C_S = _random_spd(rng, 2)
    u = np.array([[0.6], [0.8]])
    C_T = 2.5 * (u @ u.T)
    transform = coral_transform(C_S, C_T)
    assert transform.rank == 1
    values, vectors = np.linalg.eigh(C_T)
    top = values[-1] * np.outer(vectors[:, -1], vectors[:, -1])
    aligned = transform.matrix.T @ C_S @ transform.matrix
    np.testing.assert_allclose(aligned, top, atol=1e-8)
    assert alignment_objective(transform.matrix, C_S, C_T) <= _oracle_objective(C_S, C_T) + 1e-4


def test_identity_alignment_is_noop(separable_batch):
    aligned = apply_alignment(separable_batch, np.ones(len(separable_batch)), AlignmentTransform.identity(2))
    np.testing.assert_allclose(aligned.X, separable_batch.X)


def test_weighted_single_value():
    """x = 3, weight 2, A = 1.5 gives 9."""
    batch = DataBatch(np.array([[3.0], [1.0]]))
    transform = coral_transform([[4.0]], [[9.0]])
    aligned = apply_alignment(batch, [2.0, 1.0], transform)
    assert aligned.X[0, 0] == pytest.approx(9.0)


def test_alignment_keeps_labels(separable_batch):
    transform = coral_transform(regularized_covariance(separable_batch), np.eye(2) * 2.0)
    aligned = apply_alignment(separable_batch, np.ones(len(separable_batch)), transform)
    np.testing.assert_array_equal(aligned.y, separable_batch.y)
    np.testing.assert_array_equal(aligned.timestamps, separable_batch.timestamps)


def test_alignment_dimension_mismatch(separable_batch):
    with pytest.raises(AlignmentError):
        apply_alignment(separable_batch, np.ones(len(separable_batch)), AlignmentTransform.identity(3))




def test_frame_scales_deviations_about_target_mean():
    frame = AlignmentFrame(np.array([10.0]), np.array([2.0]))
    batch = DataBatch(np.array([[14.0], [10.0]]))
    transform = coral_transform([[4.0]], [[9.0]])
    aligned = apply_alignment(batch, [1.0, 1.0], transform, frame)
    np.testing.assert_allclose(aligned.X[:, 0], [16.0, 10.0])
    weighted = apply_alignment(batch, [2.0, 1.0], transform, frame)
    assert weighted.X[0, 0] == pytest.approx(22.0)


def test_frame_row_matches_batch(separable_batch):
    frame = AlignmentFrame.fit(separable_batch)
    transform = coral_transform(regularized_covariance(frame.encode(separable_batch.X)), np.eye(2) * 2.0)
    weights = np.linspace(0.2, 1.0, len(separable_batch))
    aligned = apply_alignment(separable_batch, weights, transform, frame)
    for k in (0, 17, 79):
        np.testing.assert_allclose(align_row(separable_batch.X[k], weights[k], transform, frame), aligned.X[k])


def test_frame_identity_alignment_is_noop(separable_batch):
    frame = AlignmentFrame.fit(separable_batch)
    aligned = apply_alignment(separable_batch, np.ones(len(separable_batch)), AlignmentTransform.identity(2), frame)
    np.testing.assert_allclose(aligned.X, separable_batch.X)


def test_frame_of_constant_feature_keeps_unit_scale():
    frame = AlignmentFrame.fit(np.array([[1.0, 5.0], [3.0, 5.0]]))
    np.testing.assert_allclose(frame.scale, [np.sqrt(2.0), 1.0])


def test_frame_dimension_mismatch(separable_batch):
    with pytest.raises(AlignmentError):
        apply_alignment(separable_batch, np.ones(len(separable_batch)), AlignmentTransform.identity(2),
                        AlignmentFrame.identity(3))
