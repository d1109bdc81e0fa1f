"""
Learners Module
Classifieurs de base incrémentaux pondérés et ensembles par moyenne
"""

from .base import (
    LearnerError,
    BaseClassifier,
    CLASSIFIER_REGISTRY
)

from .naive_bayes import (
    WeightedGaussian,
    GaussianNaiveBayes
)

from .hoeffding_tree import (
    HoeffdingTreeParams,
    HoeffdingTree,
    hoeffding_bound,
    entropy
)

from .ensemble import (
    BASE_LEARNERS,
    make_classifier,
    train_weighted,
    train_on_rows,
    predict_proba,
    argmax_lowest,
    average_distribution,
    average_ensemble_predict,
    weighted_distribution
)

from . import snapshot

__all__ = [
    "LearnerError",
    "BaseClassifier",
    "CLASSIFIER_REGISTRY",
    "WeightedGaussian",
    "GaussianNaiveBayes",
    "HoeffdingTreeParams",
    "HoeffdingTree",
    "hoeffding_bound",
    "entropy",
    "BASE_LEARNERS",
    "make_classifier",
    "train_weighted",
    "train_on_rows",
    "predict_proba",
    "argmax_lowest",
    "average_distribution",
    "average_ensemble_predict",
    "weighted_distribution",
    "snapshot"
]
