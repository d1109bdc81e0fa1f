"""Shared fixtures for the OBAL test suite."""
from typing import Dict

import numpy as np
import pytest

from learners import BaseClassifier
from learners.base import register_classifier
from streams import DataBatch


@register_classifier
class FixedClassifier(BaseClassifier):
    """Classifier stub that always returns the same distribution."""

    kind = "fixed"

    def __init__(self, n_features: int = 1, n_classes: int = 2, distribution=None):
        super().__init__(n_features, n_classes)
        if distribution is None:
            distribution = np.full(n_classes, 1.0 / n_classes)
        self.distribution = np.asarray(distribution, dtype=float)
        self.total_weight = 1.0

    def params(self) -> Dict:
        return {**super().params(), "distribution": self.distribution.tolist()}

    def _learn(self, x, y, weight):
        pass

    def _proba(self, x):
        return self.distribution

    def _state_dict(self) -> Dict:
        return {}

    def _load_state(self, state: Dict) -> None:
        pass


@pytest.fixture
def fixed_classifier():
    def make(distribution, n_features=1):
        return FixedClassifier(n_features, len(distribution), distribution)
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def separable_batch(rng):
    """Two Gaussian blobs in 2-D, 40 rows each, labels 0 and 1."""
    X = np.vstack([rng.normal(0.0, 0.5, size=(40, 2)), rng.normal(4.0, 0.5, size=(40, 2))])
    y = np.array([0] * 40 + [1] * 40)
    order = rng.permutation(80)
    return DataBatch(X[order], y[order])

