"""
Ensemble Helpers
Entraînement pondéré, moyenne d'ensemble et fabrique de classifieurs
"""

import logging
from typing import Dict, Optional, Sequence

import numpy as np

from streams import Instance

from .base import BaseClassifier, CLASSIFIER_REGISTRY, LearnerError
from .hoeffding_tree import HoeffdingTree
from .naive_bayes import GaussianNaiveBayes

logger = logging.getLogger(__name__)

BASE_LEARNERS = {
    "hoeffding_tree": HoeffdingTree,
    "naive_bayes": GaussianNaiveBayes,
}


def make_classifier(name: str, n_features: int, n_classes: int = 2,
                    params: Optional[Dict] = None) -> BaseClassifier:
    """
    Crée un classifieur de base vierge

    Args:
        name: "hoeffding_tree" ou "naive_bayes"
        n_features: dimension d
        n_classes: nombre de classes C
        params: hyperparamètres supplémentaires (arbre uniquement)
    """
    factory = BASE_LEARNERS.get(name) or CLASSIFIER_REGISTRY.get(name)
    if factory is None:
        raise LearnerError(f"Classifieur de base inconnu: {name}")
    return factory(n_features=n_features, n_classes=n_classes, **(params or {}))


def train_weighted(classifier: BaseClassifier, instance: Instance, weight: float = 1.0) -> BaseClassifier:
    """Entraîne sur une instance étiquetée avec un poids >= 0"""
    if instance.label is None:
        raise LearnerError("Instance sans étiquette.")
    return classifier.learn_one(instance.features, instance.label, weight)


def train_on_rows(classifier: BaseClassifier, X: np.ndarray, y: np.ndarray,
                  weights: Optional[np.ndarray] = None) -> BaseClassifier:
    """Entraîne ligne par ligne, dans l'ordre du lot"""
    if weights is None:
        weights = np.ones(len(X))
    for x, label, w in zip(X, y, weights):
        classifier.learn_one(x, int(label), float(w))
    return classifier


def predict_proba(classifier: BaseClassifier, instance) -> np.ndarray:
    features = instance.features if isinstance(instance, Instance) else instance
    return classifier.predict_proba_one(features)


def argmax_lowest(distribution: np.ndarray) -> int:
    """argmax avec égalités (à 1e-12 près) résolues vers la plus petite classe"""
    distribution = np.asarray(distribution, dtype=float)
    top = distribution.max()
    return int(np.flatnonzero(np.isclose(distribution, top, rtol=0.0, atol=1e-12))[0])


def average_distribution(distributions: Sequence[np.ndarray]) -> np.ndarray:
    if len(distributions) == 0:
        raise LearnerError("Ensemble vide.")
    return np.mean(np.vstack(distributions), axis=0)


def average_ensemble_predict(classifiers: Sequence[BaseClassifier], instance) -> int:
    """
    Moyenne non pondérée des distributions des membres, puis argmax
    (égalité -> plus petit indice de classe)
    """
    if len(classifiers) == 0:
        raise LearnerError("Ensemble vide.")
    return argmax_lowest(average_distribution([predict_proba(c, instance) for c in classifiers]))


def weighted_distribution(distributions: Sequence[np.ndarray], weights: Sequence[float]) -> np.ndarray:
    """Σ (w_k / Z) p_k; moyenne uniforme si Z = 0"""
    if len(distributions) == 0:
        raise LearnerError("Ensemble vide.")
    weights = np.asarray(weights, dtype=float)
    stacked = np.vstack(distributions)
    total = weights.sum()
    if total <= 0:
        return stacked.mean(axis=0)
    return (weights / total) @ stacked
