"""End-to-end accuracy checks on full-size synthetic scenarios (run with -m slow)."""
from functools import lru_cache

import numpy as np
import pytest

from adacosa import AdaCosaConfig, adacosa_init
from eval_cli import ExperimentConfig, run_experiment
from streams import DataBatch

pytestmark = pytest.mark.slow

SEEDS = list(range(10))


@lru_cache(maxsize=None)
def _cached_accuracy(dataset, variant="full", n_sources=3):
    config = ExperimentConfig(dataset=dataset, variant=variant, n_sources=n_sources, seeds=list(SEEDS))
    return run_experiment(config).mean


def _mean_accuracy(dataset, variant="full", n_sources=3):
    return _cached_accuracy(dataset, variant, n_sources)


def test_ablation_ordering_on_sea():
    means = [_mean_accuracy(dataset="SEA", variant=v) for v in ("v1", "v2", "v3", "full")]
    assert all(later - earlier >= 1.0 for earlier, later in zip(means, means[1:]))


def test_full_variant_on_sea():
    assert _mean_accuracy(dataset="SEA") >= 85.0


def test_full_variant_on_hyperplane():
    assert _mean_accuracy(dataset="HYPERPLANE") >= 82.0


def test_several_sources_beat_one():
    assert _mean_accuracy(dataset="SEA", n_sources=3) >= _mean_accuracy(dataset="SEA", n_sources=1) + 1.0


def _sea_batch(rng, n=200, flip_rate=0.0):
    X = rng.uniform(0.0, 10.0, size=(n, 3))
    y = (X[:, 0] + X[:, 1] <= 8.0).astype(int)
    flipped = rng.random(n) < flip_rate
    return DataBatch(X, np.where(flipped, 1 - y, y))


def test_corrupted_source_is_down_weighted():
    wins = 0
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        clean, corrupted = _sea_batch(rng), _sea_batch(rng, flip_rate=0.4)
        target = DataBatch(_sea_batch(rng).X)
        weights = adacosa_init([clean, corrupted], target, AdaCosaConfig(max_iterations=3)).scalar_weights
        wins += weights[1] < weights[0]
    assert wins >= 9
