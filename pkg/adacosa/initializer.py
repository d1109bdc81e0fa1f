"""
AdaCOSA Initialization
Alignement de covariance pondéré et repondération adaptative des
instances sources à partir du retour de l'ensemble F_est
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from learners import (
    BaseClassifier,
    argmax_lowest,
    average_distribution,
    make_classifier,
    train_on_rows,
    weighted_distribution
)
from learners.snapshot import snapshot_from_dict, snapshot_to_dict
from linalg_align import (
    AlignmentFrame,
    AlignmentTransform,
    apply_alignment,
    coral_transform,
    regularized_covariance
)
from streams import DataBatch

logger = logging.getLogger(__name__)


class AdaCosaError(Exception):
    """Erreur d'initialisation AdaCOSA"""
    pass


@dataclass
class AdaCosaConfig:
    """
    Configuration de l'initialisation

    max_iterations: I_max
    align: alignement CORAL (sinon les lots sources bruts sont utilisés)
    reweight: mise à jour des poids de corrélation (sinon poids uniformes)
    """
    max_iterations: int = 3
    align: bool = True
    reweight: bool = True
    base_learner: str = "hoeffding_tree"
    learner_params: Dict = field(default_factory=dict)
    n_classes: int = 2

    def validate(self) -> None:
        if self.max_iterations < 1:
            raise AdaCosaError("I_max doit être >= 1.")


def compute_beta(window_size: int, max_iterations: int) -> float:
    """
    β_n = 0.5 ln(1 + sqrt(2 ln(L_n / I_max)))

    Raises:
        AdaCosaError: si L_n / I_max <= 1
    """
    if max_iterations < 1:
        raise AdaCosaError("I_max doit être >= 1.")
    ratio = window_size / max_iterations
    if ratio <= 1.0:
        raise AdaCosaError(f"L_n / I_max doit être > 1 (reçu {ratio:.4f}).")
    return 0.5 * math.log(1.0 + math.sqrt(2.0 * math.log(ratio)))


def update_correlation_weight(cw: float, predicted_label: int, true_label: int, beta: float) -> float:
    """cw · exp(-β_n · perte 0/1)"""
    loss = 0.0 if int(predicted_label) == int(true_label) else 1.0
    return cw * math.exp(-beta * loss)


@dataclass
class InitResult:
    """Sortie de l'initialisation, une entrée par source"""
    target_classifiers: List[BaseClassifier]
    source_classifiers: List[BaseClassifier]
    transforms: List[AlignmentTransform]
    correlation_weights: List[np.ndarray]
    source_batches: List[DataBatch]
    target_batch: DataBatch
    beta: float
    iterations: int
    history: List[List[float]] = field(default_factory=list)
    frame: Optional[AlignmentFrame] = None

    def __post_init__(self):
        n = len(self.source_batches)
        if not (len(self.target_classifiers) == len(self.source_classifiers) == len(self.transforms)
                == len(self.correlation_weights) == n):
            raise AdaCosaError("Une entrée par source est requise.")
        for transform, batch in zip(self.transforms, self.source_batches):
            if transform.dimension != batch.dimension:
                raise AdaCosaError("Transformation et lot de dimensions différentes.")

    @property
    def n_sources(self) -> int:
        return len(self.source_batches)

    @property
    def scalar_weights(self) -> np.ndarray:
        """cw_Si = moyenne du vecteur cw_Si^t"""
        return np.array([float(np.mean(cw)) for cw in self.correlation_weights])

    @property
    def ensemble_coefficients(self) -> np.ndarray:
        weights = self.scalar_weights
        return weights / weights.sum()

    def to_dict(self) -> Dict:
        def batch_dict(batch: DataBatch) -> Dict:
            return {
                "X": batch.X.tolist(),
                "y": None if batch.y is None else batch.y.tolist(),
                "timestamps": batch.timestamps.tolist(),
                "n_classes": batch.n_classes,
            }

        return {
            "target_classifiers": [snapshot_to_dict(c) for c in self.target_classifiers],
            "source_classifiers": [snapshot_to_dict(c) for c in self.source_classifiers],
            "transforms": [t.to_dict() for t in self.transforms],
            "correlation_weights": [cw.tolist() for cw in self.correlation_weights],
            "source_batches": [batch_dict(b) for b in self.source_batches],
            "target_batch": batch_dict(self.target_batch),
            "beta": self.beta,
            "iterations": self.iterations,
            "history": self.history,
            "frame": None if self.frame is None else self.frame.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "InitResult":
        def batch_from(d: Dict) -> DataBatch:
            return DataBatch(np.array(d["X"]), None if d["y"] is None else np.array(d["y"]),
                             np.array(d["timestamps"]), int(d["n_classes"]))

        return cls(
            target_classifiers=[snapshot_from_dict(c) for c in data["target_classifiers"]],
            source_classifiers=[snapshot_from_dict(c) for c in data["source_classifiers"]],
            transforms=[AlignmentTransform.from_dict(t) for t in data["transforms"]],
            correlation_weights=[np.array(cw, dtype=float) for cw in data["correlation_weights"]],
            source_batches=[batch_from(b) for b in data["source_batches"]],
            target_batch=batch_from(data["target_batch"]),
            beta=float(data["beta"]),
            iterations=int(data["iterations"]),
            history=[list(h) for h in data.get("history", [])],
            frame=None if data.get("frame") is None else AlignmentFrame.from_dict(data["frame"]),
        )


def _check_batches(source_batches: Sequence[DataBatch], target_batch: DataBatch) -> None:
    if not source_batches:
        raise AdaCosaError("Au moins un lot source est requis.")
    if target_batch.is_labeled:
        raise AdaCosaError("Le lot cible ne doit pas être étiqueté.")
    for i, batch in enumerate(source_batches):
        if not batch.is_labeled:
            raise AdaCosaError(f"Lot source {i} sans étiquettes.")
        if batch.dimension != target_batch.dimension:
            raise AdaCosaError(
                f"Dimension du lot source {i} ({batch.dimension}) != cible ({target_batch.dimension})"
            )
        if len(batch) != len(target_batch):
            raise AdaCosaError(f"Lot source {i}: {len(batch)} lignes, {len(target_batch)} attendues.")


def _fit_transforms(source_batches: Sequence[DataBatch], weights: Sequence[np.ndarray],
                    target_covariance: Optional[np.ndarray],
                    frame: Optional[AlignmentFrame]) -> List[AlignmentTransform]:
    if frame is None:
        return [AlignmentTransform.identity(b.dimension) for b in source_batches]
    return [
        coral_transform(regularized_covariance(frame.encode(batch.X), cw), target_covariance)
        for batch, cw in zip(source_batches, weights)
    ]


def _aligned_batches(source_batches: Sequence[DataBatch], weights: Sequence[np.ndarray],
                     transforms: Sequence[AlignmentTransform],
                     frame: Optional[AlignmentFrame]) -> List[DataBatch]:
    if frame is None:
        return list(source_batches)
    return [apply_alignment(b, cw, A, frame) for b, cw, A in zip(source_batches, weights, transforms)]


def adacosa_init(source_batches: Sequence[DataBatch], target_batch: DataBatch,
                 config: Optional[AdaCosaConfig] = None) -> InitResult:
    """
    Initialisation AdaCOSA

    Pour chaque itération: ajustement des transformations avec les poids
    courants, entraînement de f_Si (brut) et f_Ti (aligné, pondéré), prédiction
    de chaque instance source par l'ensemble moyen F_est, puis mise à jour des
    poids de corrélation.

    Args:
        source_batches: N lots sources étiquetés de L_n lignes
        target_batch: lot cible non étiqueté de L_n lignes
        config: I_max, commutateurs align/reweight, classifieur de base

    Returns:
        InitResult
    """
    config = config or AdaCosaConfig()
    config.validate()
    _check_batches(source_batches, target_batch)

    window_size = len(target_batch)
    beta = compute_beta(window_size, config.max_iterations) if config.reweight else 0.0
    d = target_batch.dimension
    # repère standardisé du lot cible, partagé par toutes les sources
    frame = AlignmentFrame.fit(target_batch) if config.align else None
    target_covariance = None if frame is None else regularized_covariance(frame.encode(target_batch.X))
    weights = [np.ones(len(b)) for b in source_batches]

    def new_classifier() -> BaseClassifier:
        return make_classifier(config.base_learner, d, config.n_classes, config.learner_params)

    # f_Si ne dépend que des données brutes: identique à chaque itération
    source_classifiers = [train_on_rows(new_classifier(), b.X, b.y) for b in source_batches]

    history: List[List[float]] = []
    transforms: List[AlignmentTransform] = []
    target_classifiers: List[BaseClassifier] = []
    for iteration in range(1, config.max_iterations + 1):
        transforms = _fit_transforms(source_batches, weights, target_covariance, frame)
        aligned = _aligned_batches(source_batches, weights, transforms, frame)
        target_classifiers = [
            train_on_rows(new_classifier(), batch.X, batch.y, cw) for batch, cw in zip(aligned, weights)
        ]

        if config.reweight:
            updated = []
            for batch, aligned_batch, cw in zip(source_batches, aligned, weights):
                new_cw = cw.copy()
                for t in range(len(batch)):
                    distributions = [f.predict_proba_one(batch.X[t]) for f in source_classifiers]
                    distributions += [f.predict_proba_one(aligned_batch.X[t]) for f in target_classifiers]
                    predicted = argmax_lowest(average_distribution(distributions))
                    new_cw[t] = update_correlation_weight(cw[t], predicted, batch.y[t], beta)
                updated.append(new_cw)
            weights = updated

        history.append([float(np.mean(cw)) for cw in weights])
        logger.debug(f"AdaCOSA itération {iteration}: cw moyens = {[round(h, 4) for h in history[-1]]}")

    result = InitResult(
        target_classifiers=target_classifiers,
        source_classifiers=source_classifiers,
        transforms=transforms,
        correlation_weights=weights,
        source_batches=list(source_batches),
        target_batch=target_batch,
        beta=beta,
        iterations=config.max_iterations,
        history=history,
        frame=frame,
    )
    logger.info(
        f"✅ Initialisation AdaCOSA: {result.n_sources} sources, L_n={window_size}, "
        f"I_max={config.max_iterations}, cw={np.round(result.scalar_weights, 4).tolist()}"
    )
    return result


def ensemble_init_predict(result: InitResult, instance) -> np.ndarray:
    """Σ_i (cw_Si / Σ_j cw_Sj) · f_Ti(x)"""
    features = getattr(instance, "features", instance)
    if not result.target_classifiers:
        raise AdaCosaError("Résultat d'initialisation vide.")
    distributions = [f.predict_proba_one(features) for f in result.target_classifiers]
    return weighted_distribution(distributions, result.scalar_weights)
