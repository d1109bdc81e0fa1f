"""
Base Classifier
Interface commune des classifieurs incrémentaux pondérés
"""

import copy
import logging
from abc import ABC, abstractmethod
from typing import Dict, Optional, Type

import numpy as np

logger = logging.getLogger(__name__)

PROBA_TOL = 1e-9


class LearnerError(Exception):
    """Erreur d'entraînement ou de prédiction d'un classifieur"""
    pass


class BaseClassifier(ABC):
    """
    Classifieur incrémental sur d caractéristiques et C classes

    Les poids d'entraînement sont des comptes réels: apprendre avec le
    poids a puis b équivaut à apprendre une fois avec a + b.
    """

    kind: str = "base"

    def __init__(self, n_features: int, n_classes: int = 2):
        if n_features < 1:
            raise LearnerError("n_features doit être >= 1.")
        if n_classes < 2:
            raise LearnerError("n_classes doit être >= 2.")
        self.n_features = int(n_features)
        self.n_classes = int(n_classes)
        self.total_weight = 0.0
        self.frozen = False

    # ==================== ENTRAÎNEMENT ====================

    def learn_one(self, x: np.ndarray, y: Optional[int], weight: float = 1.0) -> "BaseClassifier":
        """
        Met à jour les statistiques suffisantes avec une instance pondérée

        Args:
            x: caractéristiques (d,)
            y: étiquette dans {0..C-1}
            weight: poids >= 0 (0 = aucun effet)

        Returns:
            Le classifieur lui-même
        """
        if self.frozen:
            raise LearnerError("Classifieur figé: il n'est plus entraîné.")
        if y is None:
            raise LearnerError("Étiquette manquante pour l'entraînement.")
        weight = float(weight)
        if not np.isfinite(weight) or weight < 0:
            raise LearnerError(f"Poids d'entraînement invalide: {weight}")
        y = int(y)
        if not 0 <= y < self.n_classes:
            raise LearnerError(f"Étiquette hors domaine: {y}")
        if weight == 0.0:
            return self
        x = self._check_features(x)
        self._learn(x, y, weight)
        self.total_weight += weight
        return self

    @abstractmethod
    def _learn(self, x: np.ndarray, y: int, weight: float) -> None:
        ...

    # ==================== PRÉDICTION ====================

    @property
    def is_trained(self) -> bool:
        return self.total_weight > 0

    def predict_proba_one(self, x: np.ndarray) -> np.ndarray:
        """Distribution de classes (C,), positive, de somme 1"""
        if not self.is_trained:
            raise LearnerError("Classifieur non entraîné.")
        proba = np.clip(np.asarray(self._proba(self._check_features(x)), dtype=float), 0.0, None)
        total = proba.sum()
        if not np.isfinite(total) or total <= 0:
            return np.full(self.n_classes, 1.0 / self.n_classes)
        return proba / total

    def predict_one(self, x: np.ndarray) -> int:
        return int(np.argmax(self.predict_proba_one(x)))

    @abstractmethod
    def _proba(self, x: np.ndarray) -> np.ndarray:
        ...

    def _check_features(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != self.n_features:
            raise LearnerError(f"Dimension attendue {self.n_features}, reçue {x.shape[0]}")
        return x

    # ==================== POOL / SÉRIALISATION ====================

    def freeze(self) -> "BaseClassifier":
        """Copie figée (lecture seule) pour le pool de classifieurs"""
        clone = copy.deepcopy(self)
        clone.frozen = True
        return clone

    def params(self) -> Dict:
        return {"n_features": self.n_features, "n_classes": self.n_classes}

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "params": self.params(),
            "total_weight": self.total_weight,
            "frozen": self.frozen,
            "state": self._state_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "BaseClassifier":
        target = CLASSIFIER_REGISTRY.get(data.get("kind", ""))
        if target is None:
            raise LearnerError(f"Type de classifieur inconnu: {data.get('kind')}")
        classifier = target(**data["params"])
        classifier.total_weight = float(data["total_weight"])
        classifier._load_state(data["state"])
        classifier.frozen = bool(data.get("frozen", False))
        return classifier

    @abstractmethod
    def _state_dict(self) -> Dict:
        ...

    @abstractmethod
    def _load_state(self, state: Dict) -> None:
        ...


CLASSIFIER_REGISTRY: Dict[str, Type[BaseClassifier]] = {}


def register_classifier(cls: Type[BaseClassifier]) -> Type[BaseClassifier]:
    CLASSIFIER_REGISTRY[cls.kind] = cls
    return cls
