"""Tests for the AdaCOSA initializer and correlation weights."""
import json
import math

import numpy as np
import pytest

from adacosa import (
    AdaCosaConfig,
    AdaCosaError,
    InitResult,
    adacosa_init,
    compute_beta,
    ensemble_init_predict,
    update_correlation_weight,
)
from linalg_align import AlignmentTransform
from streams import DataBatch


def _blobs(seed, n=100, flip=False):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, size=n)
    X = rng.normal(0.0, 0.6, size=(n, 2)) + 4.0 * y[:, None]
    return DataBatch(X, 1 - y if flip else y)


def _unlabeled(batch):
    return DataBatch(batch.X)


def _fixed_result(classifiers, weights):
    batch = DataBatch(np.array([[0.0], [1.0]]), np.array([0, 1]))
    n = len(classifiers)
    return InitResult(
        target_classifiers=classifiers,
        source_classifiers=classifiers,
        transforms=[AlignmentTransform.identity(1)] * n,
        correlation_weights=[np.full(2, w) for w in weights],
        source_batches=[batch] * n,
        target_batch=_unlabeled(batch),
        beta=0.5,
        iterations=1,
    )


NB = AdaCosaConfig(base_learner="naive_bayes")


def test_beta_for_default_window():
    assert compute_beta(200, 3) == pytest.approx(0.6803, abs=1e-4)


def test_beta_when_log_ratio_is_one():
    assert compute_beta(3 * math.e, 3) == pytest.approx(0.5 * math.log(1 + math.sqrt(2)), abs=1e-9)


def test_beta_vanishes_near_ratio_one():
    assert compute_beta(1.000001, 1) < 0.01


@pytest.mark.parametrize("window_size, max_iterations", [(3, 3), (2, 3)])
def test_beta_requires_ratio_above_one(window_size, max_iterations):
    with pytest.raises(AdaCosaError):
        compute_beta(window_size, max_iterations)


def test_correct_prediction_keeps_weight():
    assert update_correlation_weight(0.7, 1, 1, 0.68) == 0.7


def test_misclassification_shrinks_weight():
    assert update_correlation_weight(1.0, 0, 1, 0.6803) == pytest.approx(0.5065, abs=1e-4)


def test_two_rounds_of_errors():
    once = update_correlation_weight(1.0, 0, 1, 0.6803)
    assert update_correlation_weight(once, 0, 1, 0.6803) == pytest.approx(math.exp(-2 * 0.6803))
    assert math.exp(-2 * 0.6803) == pytest.approx(0.2565, abs=1e-4)


def test_source_identical_to_target_keeps_weights(separable_batch):
    config = AdaCosaConfig(max_iterations=1, base_learner="naive_bayes")
    result = adacosa_init([separable_batch], _unlabeled(separable_batch), config)
    unchanged = np.mean(result.correlation_weights[0] == 1.0)
    assert unchanged >= 0.95


def test_flipped_source_is_down_weighted():
    sources = [_blobs(1), _blobs(2), _blobs(3, flip=True)]
    target = _unlabeled(_blobs(4))
    result = adacosa_init(sources, target, AdaCosaConfig(max_iterations=3, base_learner="naive_bayes"))
    weights = result.scalar_weights
    assert weights[2] < weights[0]
    assert weights[2] < weights[1]


def test_weights_stay_positive_and_bounded():
    sources = [_blobs(5), _blobs(6, flip=True)]
    result = adacosa_init(sources, _unlabeled(_blobs(7)), AdaCosaConfig(max_iterations=4, base_learner="naive_bayes"))
    for cw in result.correlation_weights:
        assert np.all(cw > 0)
        assert np.all(cw <= 1.0)
    assert len(result.history) == 4


def test_history_is_non_increasing():
    result = adacosa_init([_blobs(8), _blobs(9, flip=True)], _unlabeled(_blobs(10)), NB)
    history = np.array(result.history)
    assert np.all(np.diff(history, axis=0) <= 1e-12)


def test_initialization_is_deterministic():
    sources = [_blobs(11), _blobs(12)]
    target = _unlabeled(_blobs(13))
    first = adacosa_init(sources, target, AdaCosaConfig())
    second = adacosa_init(sources, target, AdaCosaConfig())
    for a, b in zip(first.correlation_weights, second.correlation_weights):
        np.testing.assert_array_equal(a, b)
    for a, b in zip(first.transforms, second.transforms):
        np.testing.assert_array_equal(a.matrix, b.matrix)


def test_without_alignment_transforms_are_identity():
    config = AdaCosaConfig(align=False, base_learner="naive_bayes")
    result = adacosa_init([_blobs(14)], _unlabeled(_blobs(15)), config)
    np.testing.assert_array_equal(result.transforms[0].matrix, np.eye(2))


def test_without_reweighting_weights_stay_uniform():
    config = AdaCosaConfig(reweight=False, base_learner="naive_bayes")
    result = adacosa_init([_blobs(16), _blobs(17, flip=True)], _unlabeled(_blobs(18)), config)
    for cw in result.correlation_weights:
        np.testing.assert_array_equal(cw, np.ones(100))
    assert result.beta == 0.0


def test_labeled_target_rejected():
    with pytest.raises(AdaCosaError):
        adacosa_init([_blobs(19)], _blobs(20), NB)


def test_batch_length_mismatch_rejected():
    with pytest.raises(AdaCosaError):
        adacosa_init([_blobs(21, n=50)], _unlabeled(_blobs(22)), NB)


def test_no_sources_rejected():
    with pytest.raises(AdaCosaError):
        adacosa_init([], _unlabeled(_blobs(23)), NB)


def test_ensemble_coefficients_are_normalized(fixed_classifier):
    result = _fixed_result([fixed_classifier([1.0, 0.0]), fixed_classifier([0.0, 1.0])], [0.8, 0.2])
    np.testing.assert_allclose(result.ensemble_coefficients, [0.8, 0.2])


def test_weighted_initial_prediction(fixed_classifier):
    result = _fixed_result([fixed_classifier([1.0, 0.0]), fixed_classifier([0.0, 1.0])], [0.9, 0.1])
    np.testing.assert_allclose(ensemble_init_predict(result, np.array([0.5])), [0.9, 0.1])


def test_single_source_prediction_is_its_classifier(fixed_classifier):
    result = _fixed_result([fixed_classifier([0.3, 0.7])], [0.42])
    np.testing.assert_allclose(ensemble_init_predict(result, np.array([0.5])), [0.3, 0.7])


def test_equal_weights_give_plain_average(fixed_classifier):
    result = _fixed_result([fixed_classifier([0.6, 0.4]), fixed_classifier([0.2, 0.8])], [0.5, 0.5])
    np.testing.assert_allclose(ensemble_init_predict(result, np.array([0.5])), [0.4, 0.6])


def test_init_result_survives_json_round_trip():
    sources = [_blobs(24), _blobs(25, flip=True)]
    target = _unlabeled(_blobs(26))
    result = adacosa_init(sources, target, AdaCosaConfig())
    restored = InitResult.from_dict(json.loads(json.dumps(result.to_dict())))
    assert restored.beta == result.beta
    np.testing.assert_array_equal(restored.frame.center, result.frame.center)
    for a, b in zip(result.correlation_weights, restored.correlation_weights):
        np.testing.assert_array_equal(a, b)
    for x in target.X[:10]:
        np.testing.assert_array_equal(ensemble_init_predict(restored, x), ensemble_init_predict(result, x))


def test_alignment_runs_in_target_frame():
    sources = [_blobs(27)]
    target = DataBatch(_blobs(28).X * 3.0 + 10.0)
    result = adacosa_init(sources, target, NB)
    np.testing.assert_allclose(result.frame.center, target.X.mean(axis=0))
    np.testing.assert_allclose(result.frame.scale, target.X.std(axis=0, ddof=1))
    assert adacosa_init(sources, target, AdaCosaConfig(align=False, base_learner="naive_bayes")).frame is None
