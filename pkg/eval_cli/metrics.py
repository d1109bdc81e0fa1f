"""
Prequential Metrics
Exactitude préquentielle, trajectoire par fenêtre et agrégats sur les graines
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import ConfigError


class EvaluationError(ConfigError):
    """Prédictions et étiquettes incompatibles"""
    pass


@dataclass(frozen=True)
class TrajectoryPoint:
    window: int
    accuracy: float
    n: int


def _check(predictions: Sequence[int], labels: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    predictions = np.asarray(predictions).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if predictions.shape[0] != labels.shape[0]:
        raise EvaluationError(f"Longueurs différentes: {predictions.shape[0]} prédictions, {labels.shape[0]} étiquettes")
    return predictions, labels


def prequential_accuracy(predictions: Sequence[int], held_out_labels: Sequence[int],
                         mask: Optional[np.ndarray] = None) -> float:
    """
    100 × (prédictions justes / total)

    Args:
        predictions: étiquettes prédites, dans l'ordre du flux
        held_out_labels: étiquettes cibles réservées à l'évaluation
        mask: sous-ensemble optionnel des positions notées

    Returns:
        Pourcentage dans [0, 100] (nan si aucune position notée)
    """
    predictions, labels = _check(predictions, held_out_labels)
    if mask is not None:
        predictions, labels = predictions[mask], labels[mask]
    if predictions.shape[0] == 0:
        return float("nan")
    return float(100.0 * np.count_nonzero(predictions == labels) / predictions.shape[0])


def accuracy_trajectory(predictions: Sequence[int], held_out_labels: Sequence[int],
                        window: int = 1000) -> List[TrajectoryPoint]:
    """Exactitude par fenêtre consécutive de `window` instances (⌈n / window⌉ points)"""
    if window < 1:
        raise EvaluationError("La fenêtre doit être >= 1.")
    predictions, labels = _check(predictions, held_out_labels)
    points = []
    for k in range(math.ceil(predictions.shape[0] / window)):
        part = slice(k * window, (k + 1) * window)
        n = predictions[part].shape[0]
        points.append(TrajectoryPoint(k, prequential_accuracy(predictions[part], labels[part]), n))
    return points


def trajectory_mean(points: Sequence[TrajectoryPoint]) -> float:
    """Moyenne pondérée par la taille des fenêtres (égale à l'exactitude globale)"""
    total = sum(p.n for p in points)
    if total == 0:
        return float("nan")
    return float(sum(p.accuracy * p.n for p in points) / total)


def mean_std(values: Sequence[float]) -> Tuple[float, float]:
    """Moyenne et écart-type sur les graines (ddof=1, 0 pour une seule graine)"""
    values = np.asarray([v for v in values if not math.isnan(v)], dtype=float)
    if values.size == 0:
        return float("nan"), float("nan")
    if values.size == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1))
