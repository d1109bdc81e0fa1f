"""
OBAL Engine
Traitement en ligne des flux sources (DDM, adaptation GMM, alignement pondéré)
et du flux cible (détection à double fenêtre, ensemble pondéré)
"""

import logging
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from adacosa import AdaCosaConfig, adacosa_init
from drift import Ddm, DdmStatus, TargetDriftState
from gmm import EmConfig, GmmModel, fit_gmm
from learners import BaseClassifier, argmax_lowest, make_classifier, weighted_distribution
from learners.snapshot import snapshot_from_dict, snapshot_to_dict
from linalg_align import (
    AlignmentFrame,
    AlignmentTransform,
    align_row,
    coral_transform,
    regularized_covariance
)
from streams import DataBatch, Instance

from .events import EventLog, EventType
from .pool import ClassifierPool, EngineError, retrieve_correlation_weight, retrieve_correlation_weights

logger = logging.getLogger(__name__)


# ==================== CONFIGURATION ====================

@dataclass
class EngineConfig:
    """Paramètres du moteur (défauts: SEA, L_n=200, I_max=3, |P|=5)"""
    window_size: int = 200
    max_iterations: int = 3
    pool_size: int = 5
    n_components: Optional[int] = None
    em: EmConfig = field(default_factory=EmConfig)
    z_alpha: float = 3.0
    eq11_literal: bool = False
    target_patience: Optional[int] = None
    pooled_sigma: bool = True
    ddm_warmup: int = 30
    ddm_warning: float = 2.0
    ddm_drift: float = 3.0
    base_learner: str = "hoeffding_tree"
    learner_params: Dict = field(default_factory=dict)
    drift_handling: bool = True
    align: bool = True
    reweight: bool = True
    n_classes: int = 2
    seed: int = 0

    def validate(self) -> None:
        if self.window_size < 2:
            raise EngineError("L_n doit être >= 2.")
        if self.max_iterations < 1:
            raise EngineError("I_max doit être >= 1.")
        if self.reweight and self.window_size <= self.max_iterations:
            raise EngineError("L_n doit être strictement supérieur à I_max.")
        if self.pool_size < 1:
            raise EngineError("La taille du pool doit être >= 1.")
        if self.n_components is not None and self.n_components < 1:
            raise EngineError("K doit être >= 1.")
        if self.target_patience is not None and self.target_patience < 1:
            raise EngineError("La patience du détecteur cible doit être >= 1.")

    def adacosa_config(self) -> AdaCosaConfig:
        return AdaCosaConfig(
            max_iterations=self.max_iterations,
            align=self.align,
            reweight=self.reweight,
            base_learner=self.base_learner,
            learner_params=dict(self.learner_params),
            n_classes=self.n_classes,
        )

    def em_config(self) -> EmConfig:
        return EmConfig(self.em.max_iters, self.em.tol, self.em.reg_floor, self.seed, self.em.max_components)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "EngineConfig":
        data = dict(data)
        data["em"] = EmConfig(**data.get("em", {}))
        return cls(**data)


# ==================== ÉTAT ====================

@dataclass
class SourceState:
    """État en ligne d'un flux source"""
    target_classifier: BaseClassifier
    source_classifier: BaseClassifier
    ddm: Ddm
    gmm: GmmModel
    transform: AlignmentTransform
    archive: np.ndarray
    correlation_weights: np.ndarray
    recent: deque
    initial_weight: float
    accumulator_sum: float = 0.0
    accumulator_count: int = 0
    created_at: int = 0

    @property
    def weight(self) -> float:
        """w_Si = (1/n) Σ aw·cw depuis la création du classifieur courant"""
        if self.accumulator_count == 0:
            return self.initial_weight
        return self.accumulator_sum / self.accumulator_count

    def to_dict(self) -> Dict:
        return {
            "target_classifier": snapshot_to_dict(self.target_classifier),
            "source_classifier": snapshot_to_dict(self.source_classifier),
            "ddm": self.ddm.to_dict(),
            "gmm": self.gmm.to_dict(),
            "transform": self.transform.to_dict(),
            "archive": self.archive.tolist(),
            "correlation_weights": self.correlation_weights.tolist(),
            "recent": [row.tolist() for row in self.recent],
            "recent_maxlen": self.recent.maxlen,
            "initial_weight": self.initial_weight,
            "accumulator_sum": self.accumulator_sum,
            "accumulator_count": self.accumulator_count,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SourceState":
        return cls(
            target_classifier=snapshot_from_dict(data["target_classifier"]),
            source_classifier=snapshot_from_dict(data["source_classifier"]),
            ddm=Ddm.from_dict(data["ddm"]),
            gmm=GmmModel.from_dict(data["gmm"]),
            transform=AlignmentTransform.from_dict(data["transform"]),
            archive=np.array(data["archive"], dtype=float),
            correlation_weights=np.array(data["correlation_weights"], dtype=float),
            recent=deque([np.array(r, dtype=float) for r in data["recent"]], maxlen=data["recent_maxlen"]),
            initial_weight=float(data["initial_weight"]),
            accumulator_sum=float(data["accumulator_sum"]),
            accumulator_count=int(data["accumulator_count"]),
            created_at=int(data["created_at"]),
        )


@dataclass(frozen=True)
class TargetOutcome:
    """Résultat du traitement d'une instance cible"""
    prediction: int
    distribution: np.ndarray
    drift: bool = False
    stale: bool = False


@dataclass(frozen=True)
class SourceOutcome:
    """Résultat du traitement d'une instance source"""
    drift: bool
    status: DdmStatus
    aw: float
    cw: float
    evicted: bool = False


# ==================== MOTEUR ====================

class ObalEngine:
    """
    Moteur OBAL

    Cycle de vie: initialize(lots) -> process_source_instance /
    process_target_instance ... -> dérive cible -> needs_reinit -> initialize(...)
    """

    def __init__(self, config: Optional[EngineConfig] = None, events: Optional[EventLog] = None):
        self.config = config or EngineConfig()
        self.config.validate()
        self.events = events if events is not None else EventLog()
        self.sources: List[SourceState] = []
        self.pool = ClassifierPool(self.config.pool_size)
        self.target_gmm: Optional[GmmModel] = None
        self.frame: Optional[AlignmentFrame] = None
        self.target_covariance: Optional[np.ndarray] = None
        self.window = self._new_window()
        self.needs_reinit = False
        self.stale_members: List[Tuple[BaseClassifier, float]] = []
        self.n_initializations = 0
        self.n_source_drifts = 0
        self.n_target_drifts = 0
        self.n_evictions = 0
        self.max_pool_size = 0
        self.dimension: Optional[int] = None

    def _new_window(self) -> TargetDriftState:
        config = self.config
        return TargetDriftState(config.window_size, config.z_alpha, not config.eq11_literal,
                                patience=config.target_patience, pooled_sigma=config.pooled_sigma)

    def _new_classifier(self) -> BaseClassifier:
        return make_classifier(self.config.base_learner, self.dimension, self.config.n_classes,
                               self.config.learner_params)

    def _new_ddm(self) -> Ddm:
        return Ddm(self.config.ddm_warmup, self.config.ddm_warning, self.config.ddm_drift)

    @property
    def initialized(self) -> bool:
        return bool(self.sources) and not self.needs_reinit

    # ==================== INITIALISATION ====================

    def initialize(self, source_batches: Sequence[DataBatch], target_batch: DataBatch, t: int = 0) -> None:
        """
        (Ré)initialise le moteur à partir des lots archivés (AdaCOSA + GMM)

        L'état obtenu ne dépend que des lots et de la configuration.
        """
        config = self.config
        result = adacosa_init(source_batches, target_batch, config.adacosa_config())
        self.dimension = target_batch.dimension
        em = config.em_config()

        self.frame = result.frame
        self.target_covariance = (None if self.frame is None
                                  else regularized_covariance(self.frame.encode(target_batch.X)))
        self.target_gmm = fit_gmm(target_batch, config.n_components, em)
        self.sources = []
        for i, batch in enumerate(source_batches):
            recent = deque((row.copy() for row in batch.X), maxlen=config.window_size)
            self.sources.append(SourceState(
                target_classifier=result.target_classifiers[i],
                source_classifier=result.source_classifiers[i],
                ddm=self._new_ddm(),
                gmm=fit_gmm(batch, config.n_components, em),
                transform=result.transforms[i],
                archive=batch.X.copy(),
                correlation_weights=result.correlation_weights[i].copy(),
                recent=recent,
                initial_weight=float(result.scalar_weights[i]),
                created_at=t,
            ))
        self.pool = ClassifierPool(config.pool_size)
        self.window = self._new_window()
        self.needs_reinit = False
        self.stale_members = []
        self.n_initializations += 1
        self.events.emit(t, None, EventType.REINIT, {
            "initialization": self.n_initializations,
            "cw": [round(float(w), 10) for w in result.scalar_weights],
            "target_components": self.target_gmm.n_components,
        })
        logger.info(f"✅ Moteur initialisé (#{self.n_initializations}) à t={t}, {len(self.sources)} sources")

    def _require_ready(self) -> None:
        if not self.sources:
            raise EngineError("Moteur non initialisé.")

    # ==================== FLUX SOURCES ====================

    def process_source_instance(self, i: int, instance: Instance) -> SourceOutcome:
        """
        Traite une instance source étiquetée

        Stable: f_Ti est mis à jour au poids cw (instance alignée).
        Dérive: f_Ti rejoint le pool avec son w_Si, un nouveau f_Ti est créé
        et entraîné au poids aw·cw, le DDM et l'accumulateur repartent de zéro.
        """
        self._require_ready()
        if self.needs_reinit:
            raise EngineError("Réinitialisation en attente après dérive cible.")
        if not 0 <= i < len(self.sources):
            raise EngineError(f"Indice de source inconnu: {i}")
        if instance.label is None:
            raise EngineError("Les instances sources doivent être étiquetées.")
        state = self.sources[i]
        x, y, t = instance.features, int(instance.label), instance.timestamp
        state.recent.append(np.array(x, dtype=float))

        status = DdmStatus.STABLE
        if self.config.drift_handling:
            correct = state.source_classifier.predict_one(x) == y
            status = state.ddm.update(correct)

        cw = retrieve_correlation_weight(state.archive, state.correlation_weights, x)
        if status is DdmStatus.DRIFT:
            outcome = self._adapt_source(i, state, x, y, t, cw)
        else:
            aligned = align_row(x, cw, state.transform, self.frame) if self.frame is not None else x
            state.target_classifier.learn_one(aligned, y, cw)
            state.accumulator_sum += cw
            state.accumulator_count += 1
            outcome = SourceOutcome(False, status, 1.0, cw)

        state.source_classifier.learn_one(x, y, 1.0)
        return outcome

    def _adapt_source(self, i: int, state: SourceState, x: np.ndarray, y: int, t: int, cw: float) -> SourceOutcome:
        self.n_source_drifts += 1
        evicted = self.pool.archive(state.target_classifier, state.weight, state.created_at, source=i)
        self.max_pool_size = max(self.max_pool_size, len(self.pool))
        aw = state.gmm.normalized_likelihood(x)
        self.events.emit(t, i, EventType.SOURCE_DRIFT, {
            "aw": aw,
            "w_pool": state.weight,
            "pool_size": len(self.pool),
            **{k: float(v) for k, v in state.ddm.last_statistics.items()},
        })
        if evicted is not None:
            self.n_evictions += 1
            self.events.emit(t, evicted.source, EventType.POOL_EVICT,
                             {"weight": evicted.weight, "created_at": evicted.created_at})

        if self.frame is not None and len(state.recent) >= 2:
            rows = np.vstack(state.recent)
            weights = retrieve_correlation_weights(state.archive, state.correlation_weights, rows)
            state.transform = coral_transform(regularized_covariance(self.frame.encode(rows), weights),
                                              self.target_covariance)

        aligned = align_row(x, cw, state.transform, self.frame) if self.frame is not None else x
        state.target_classifier = self._new_classifier()
        state.target_classifier.learn_one(aligned, y, aw * cw)
        state.source_classifier = self._new_classifier()
        state.accumulator_sum = aw * cw
        state.accumulator_count = 1
        state.created_at = t
        logger.info(f"Dérive source {i} à t={t}: pool={len(self.pool)}, aw={aw:.4f}")
        return SourceOutcome(True, DdmStatus.DRIFT, aw, cw, evicted is not None)

    # ==================== FLUX CIBLE ====================

    def members(self) -> List[Tuple[BaseClassifier, float]]:
        """(classifieur, poids) pour les f_Ti vivants puis le pool"""
        live = [(s.target_classifier, s.weight) for s in self.sources]
        return live + [(e.classifier, e.weight) for e in self.pool.entries]

    def ensemble_predict(self, instance) -> np.ndarray:
        """f^E = Σ (w_Si/Z) f_Ti + Σ (w_P/Z) f_P, Z = Σ w_Si + Σ w_P"""
        return self._combine(self.members(), instance)

    @staticmethod
    def _combine(members: List[Tuple[BaseClassifier, float]], instance) -> np.ndarray:
        if not members:
            raise EngineError("Aucun classifieur disponible pour la prédiction.")
        x = getattr(instance, "features", instance)
        return weighted_distribution([c.predict_proba_one(x) for c, _ in members], [w for _, w in members])

    def process_target_instance(self, instance: Instance) -> TargetOutcome:
        """
        Prédit une instance cible non étiquetée et teste la dérive cible

        Après une dérive, les prédictions viennent d'un instantané figé de
        l'ensemble (stale=True) jusqu'à la réinitialisation.
        """
        if instance.label is not None:
            raise EngineError("Les instances cibles ne doivent pas porter d'étiquette.")
        if self.needs_reinit:
            distribution = self._combine(self.stale_members, instance)
            return TargetOutcome(argmax_lowest(distribution), distribution, False, True)
        self._require_ready()

        x = instance.features
        distribution = self.ensemble_predict(x)
        prediction = argmax_lowest(distribution)
        self.events.emit(instance.timestamp, None, EventType.PREDICTION, {"label": prediction})

        if not self.config.drift_handling:
            return TargetOutcome(prediction, distribution)
        likelihood = self.target_gmm.max_component_likelihood(x)
        if not self.window.update(likelihood):
            return TargetOutcome(prediction, distribution)

        self.n_target_drifts += 1
        self.events.emit(instance.timestamp, None, EventType.TARGET_DRIFT, dict(self.window.last_statistics))
        logger.info(f"Dérive cible à t={instance.timestamp}: réinitialisation après {self.config.window_size} instances")
        self.stale_members = [(c.freeze(), w) for c, w in self.members()]
        self.sources = []
        self.pool.clear()
        self.window = self._new_window()
        self.needs_reinit = True
        return TargetOutcome(prediction, distribution, True, False)

    # ==================== SÉRIALISATION ====================

    def to_dict(self) -> Dict:
        return {
            "config": self.config.to_dict(),
            "dimension": self.dimension,
            "sources": [s.to_dict() for s in self.sources],
            "pool": self.pool.to_dict(),
            "target_gmm": None if self.target_gmm is None else self.target_gmm.to_dict(),
            "frame": None if self.frame is None else self.frame.to_dict(),
            "target_covariance": None if self.target_covariance is None else self.target_covariance.tolist(),
            "window": self.window.to_dict(),
            "needs_reinit": self.needs_reinit,
            "stale_members": [(snapshot_to_dict(c), w) for c, w in self.stale_members],
            "counters": {
                "initializations": self.n_initializations,
                "source_drifts": self.n_source_drifts,
                "target_drifts": self.n_target_drifts,
                "evictions": self.n_evictions,
                "max_pool_size": self.max_pool_size,
            },
        }

    @classmethod
    def from_dict(cls, data: Dict, events: Optional[EventLog] = None) -> "ObalEngine":
        engine = cls(EngineConfig.from_dict(data["config"]), events)
        engine.dimension = data["dimension"]
        engine.sources = [SourceState.from_dict(s) for s in data["sources"]]
        engine.pool = ClassifierPool.from_dict(data["pool"])
        engine.target_gmm = None if data["target_gmm"] is None else GmmModel.from_dict(data["target_gmm"])
        engine.frame = None if data.get("frame") is None else AlignmentFrame.from_dict(data["frame"])
        engine.target_covariance = (None if data["target_covariance"] is None
                                    else np.array(data["target_covariance"], dtype=float))
        engine.window = TargetDriftState.from_dict(data["window"])
        engine.needs_reinit = bool(data["needs_reinit"])
        engine.stale_members = [(snapshot_from_dict(c), float(w)) for c, w in data["stale_members"]]
        counters = data["counters"]
        engine.n_initializations = int(counters["initializations"])
        engine.n_source_drifts = int(counters["source_drifts"])
        engine.n_target_drifts = int(counters["target_drifts"])
        engine.n_evictions = int(counters["evictions"])
        engine.max_pool_size = int(counters["max_pool_size"])
        return engine


# ==================== API FONCTIONNELLE ====================

def process_source_instance(engine: ObalEngine, i: int, instance: Instance) -> SourceOutcome:
    return engine.process_source_instance(i, instance)


def process_target_instance(engine: ObalEngine, instance: Instance) -> TargetOutcome:
    return engine.process_target_instance(instance)


def ensemble_predict(engine: ObalEngine, instance) -> np.ndarray:
    return engine.ensemble_predict(instance)
