"""
Online Gaussian Naive Bayes
Statistiques gaussiennes pondérées par classe (Welford pondéré)
"""

import logging
from typing import Dict

import numpy as np
from scipy.special import logsumexp

from .base import BaseClassifier, register_classifier

logger = logging.getLogger(__name__)

VAR_SMOOTHING = 1e-9


class WeightedGaussian:
    """Moyenne et variance pondérées, vectorisées sur d caractéristiques"""

    def __init__(self, n_features: int):
        self.weight = 0.0
        self.mean = np.zeros(n_features)
        self.m2 = np.zeros(n_features)
        self.minimum = np.full(n_features, np.inf)
        self.maximum = np.full(n_features, -np.inf)

    def update(self, x: np.ndarray, weight: float) -> None:
        self.weight += weight
        delta = x - self.mean
        self.mean += (weight / self.weight) * delta
        self.m2 += weight * delta * (x - self.mean)
        np.minimum(self.minimum, x, out=self.minimum)
        np.maximum(self.maximum, x, out=self.maximum)

    @property
    def variance(self) -> np.ndarray:
        if self.weight <= 0:
            return np.zeros_like(self.mean)
        return np.clip(self.m2 / self.weight, 0.0, None)

    def log_pdf(self, x: np.ndarray, epsilon: float) -> float:
        var = self.variance + epsilon
        return float(-0.5 * np.sum(np.log(2.0 * np.pi * var) + (x - self.mean) ** 2 / var))

    def to_dict(self) -> Dict:
        return {
            "weight": self.weight,
            "mean": self.mean.tolist(),
            "m2": self.m2.tolist(),
            "minimum": [float(v) if np.isfinite(v) else None for v in self.minimum],
            "maximum": [float(v) if np.isfinite(v) else None for v in self.maximum],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "WeightedGaussian":
        estimator = cls(len(data["mean"]))
        estimator.weight = float(data["weight"])
        estimator.mean = np.array(data["mean"], dtype=float)
        estimator.m2 = np.array(data["m2"], dtype=float)
        estimator.minimum = np.array([np.inf if v is None else v for v in data["minimum"]], dtype=float)
        estimator.maximum = np.array([-np.inf if v is None else v for v in data["maximum"]], dtype=float)
        return estimator


@register_classifier
class GaussianNaiveBayes(BaseClassifier):
    """
    Naive Bayes gaussien incrémental

    Prior de Laplace (+1 par classe); une classe jamais vue utilise les
    statistiques globales.
    """

    kind = "naive_bayes"

    def __init__(self, n_features: int, n_classes: int = 2):
        super().__init__(n_features, n_classes)
        self.class_stats = [WeightedGaussian(n_features) for _ in range(n_classes)]
        self.pooled = WeightedGaussian(n_features)

    def _learn(self, x: np.ndarray, y: int, weight: float) -> None:
        self.class_stats[y].update(x, weight)
        self.pooled.update(x, weight)

    @property
    def class_weights(self) -> np.ndarray:
        return np.array([stats.weight for stats in self.class_stats])

    def _epsilon(self) -> float:
        return VAR_SMOOTHING * max(float(np.max(self.pooled.variance)), 1.0)

    def joint_log_likelihood(self, x: np.ndarray) -> np.ndarray:
        epsilon = self._epsilon()
        counts = self.class_weights
        log_prior = np.log(counts + 1.0) - np.log(counts.sum() + self.n_classes)
        scores = np.empty(self.n_classes)
        for c, stats in enumerate(self.class_stats):
            source = stats if stats.weight > 0 else self.pooled
            scores[c] = log_prior[c] + source.log_pdf(x, epsilon)
        return scores

    def _proba(self, x: np.ndarray) -> np.ndarray:
        scores = self.joint_log_likelihood(x)
        return np.exp(scores - logsumexp(scores))

    def _state_dict(self) -> Dict:
        return {
            "class_stats": [stats.to_dict() for stats in self.class_stats],
            "pooled": self.pooled.to_dict(),
        }

    def _load_state(self, state: Dict) -> None:
        self.class_stats = [WeightedGaussian.from_dict(s) for s in state["class_stats"]]
        self.pooled = WeightedGaussian.from_dict(state["pooled"])
