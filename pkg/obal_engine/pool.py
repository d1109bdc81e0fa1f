"""
Classifier Pool
Classifieurs figés après dérive source et récupération des poids de corrélation
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from learners import BaseClassifier
from learners.snapshot import snapshot_from_dict, snapshot_to_dict

logger = logging.getLogger(__name__)


class EngineError(Exception):
    """Erreur du moteur en ligne"""
    pass


@dataclass(frozen=True)
class PoolEntry:
    """Classifieur figé, son poids w_P et sa date de création"""
    classifier: BaseClassifier
    weight: float
    created_at: int
    source: Optional[int] = None
    sequence: int = 0

    def to_dict(self) -> Dict:
        return {
            "classifier": snapshot_to_dict(self.classifier),
            "weight": self.weight,
            "created_at": self.created_at,
            "source": self.source,
            "sequence": self.sequence,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "PoolEntry":
        return cls(snapshot_from_dict(data["classifier"]), float(data["weight"]),
                   int(data["created_at"]), data.get("source"), int(data.get("sequence", 0)))


class ClassifierPool:
    """
    Pool borné de classifieurs qui ne sont plus entraînés

    Au-delà de la capacité, l'entrée de plus faible poids est évincée
    (égalité: la plus ancienne).
    """

    def __init__(self, capacity: int = 5):
        if capacity < 1:
            raise EngineError("La capacité du pool doit être >= 1.")
        self.capacity = int(capacity)
        self.entries: List[PoolEntry] = []
        self._sequence = 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def weights(self) -> List[float]:
        return [entry.weight for entry in self.entries]

    @property
    def classifiers(self) -> List[BaseClassifier]:
        return [entry.classifier for entry in self.entries]

    def archive(self, classifier: BaseClassifier, weight: float, created_at: int = 0,
                source: Optional[int] = None) -> Optional[PoolEntry]:
        """
        Insère un classifieur figé

        Returns:
            L'entrée évincée, ou None
        """
        weight = float(weight)
        if not np.isfinite(weight) or weight < 0:
            raise EngineError(f"Poids de pool invalide: {weight}")
        frozen = classifier if classifier.frozen else classifier.freeze()
        self.entries.append(PoolEntry(frozen, weight, int(created_at), source, self._sequence))
        self._sequence += 1
        if len(self.entries) <= self.capacity:
            return None
        victim = min(self.entries, key=lambda e: (e.weight, e.created_at, e.sequence))
        self.entries.remove(victim)
        logger.debug(f"Pool: éviction (poids={victim.weight:.4f}, créé à t={victim.created_at})")
        return victim

    def clear(self) -> None:
        self.entries = []

    def to_dict(self) -> Dict:
        return {
            "capacity": self.capacity,
            "sequence": self._sequence,
            "entries": [entry.to_dict() for entry in self.entries],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ClassifierPool":
        pool = cls(int(data["capacity"]))
        pool.entries = [PoolEntry.from_dict(e) for e in data["entries"]]
        pool._sequence = int(data.get("sequence", len(pool.entries)))
        return pool


def archive_classifier(pool: ClassifierPool, classifier: BaseClassifier, weight: float,
                       created_at: int = 0) -> ClassifierPool:
    pool.archive(classifier, weight, created_at)
    return pool


def retrieve_correlation_weight(archive: np.ndarray, cw_vector: np.ndarray, instance) -> float:
    """
    cw de l'instance archivée la plus proche (distance L2)

    Égalité de distance: le plus petit indice archivé.
    """
    archive = np.atleast_2d(np.asarray(archive, dtype=float))
    if archive.shape[0] == 0 or archive.size == 0:
        raise EngineError("Archive vide.")
    x = np.asarray(getattr(instance, "features", instance), dtype=float).reshape(-1)
    if archive.shape[1] != x.shape[0]:
        raise EngineError(f"Dimension de l'archive ({archive.shape[1]}) != instance ({x.shape[0]})")
    distances = np.sum((archive - x) ** 2, axis=1)
    # argmin renvoie la première occurrence du minimum
    return float(np.asarray(cw_vector, dtype=float)[int(np.argmin(distances))])


def retrieve_correlation_weights(archive: np.ndarray, cw_vector: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """retrieve_correlation_weight pour chaque ligne de `rows` (n, d)"""
    archive = np.atleast_2d(np.asarray(archive, dtype=float))
    if archive.shape[0] == 0 or archive.size == 0:
        raise EngineError("Archive vide.")
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if archive.shape[1] != rows.shape[1]:
        raise EngineError(f"Dimension de l'archive ({archive.shape[1]}) != instances ({rows.shape[1]})")
    distances = np.sum((rows[:, None, :] - archive[None, :, :]) ** 2, axis=2)
    return np.asarray(cw_vector, dtype=float)[np.argmin(distances, axis=1)]
