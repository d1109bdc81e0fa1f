"""
Stream Runner
Parcourt les flux sources et cible dans l'ordre des timestamps, pilote
les (ré)initialisations et collecte les prédictions cibles
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from streams import InstanceStream

from .engine import EngineConfig, ObalEngine
from .events import EventLog
from .pool import EngineError

logger = logging.getLogger(__name__)

TARGET = -1


@dataclass
class RunResult:
    """
    Prédictions sur le flux cible à partir de la première instance en ligne

    `offset` = nombre d'instances cibles du lot d'initialisation (non notées).
    """
    predictions: np.ndarray
    stale: np.ndarray
    offset: int
    source_drifts: int = 0
    target_drifts: int = 0
    reinits: int = 0
    pool_evictions: int = 0
    max_pool_size: int = 0
    reinit_positions: List[int] = field(default_factory=list)

    @property
    def n_predictions(self) -> int:
        return int(len(self.predictions))

    @property
    def n_stale(self) -> int:
        return int(np.count_nonzero(self.stale))


def run_obal(sources: Sequence[InstanceStream], target: InstanceStream, config: Optional[EngineConfig] = None,
             events: Optional[EventLog] = None) -> RunResult:
    """
    Exécute OBAL de bout en bout

    Les L_n premières instances de chaque flux forment les lots d'initialisation.
    Après une dérive cible, les L_n instances suivantes de chaque flux forment les
    nouveaux lots; les instances cibles correspondantes reçoivent des prédictions
    périmées. Le parcours s'arrête à la fin du flux cible.

    Args:
        sources: flux sources étiquetés
        target: flux cible sans étiquettes
        config: paramètres du moteur
        events: journal d'événements (optionnel)

    Returns:
        RunResult
    """
    config = config or EngineConfig()
    if target.is_labeled:
        raise EngineError("Le flux cible ne doit pas porter d'étiquettes.")
    L = config.window_size
    if len(target) <= L or any(len(s) < L for s in sources):
        raise EngineError(f"Chaque flux doit contenir plus de L_n={L} instances.")

    engine = ObalEngine(config, events)
    cursors = {i: 0 for i in range(len(sources))}
    cursors[TARGET] = 0
    engine.initialize([s.batch(0, L) for s in sources], target.batch(0, L), t=int(target.timestamps[L - 1]))
    for key in cursors:
        cursors[key] = L

    predictions = np.empty(len(target) - L, dtype=np.int64)
    stale = np.zeros(len(target) - L, dtype=bool)
    reinit_positions: List[int] = []
    # position cible à laquelle la réinitialisation a lieu (None = aucune en attente)
    reinit_at: Optional[int] = None

    def stream_of(key: int) -> InstanceStream:
        return target if key == TARGET else sources[key]

    heap = []
    paused: List[int] = []
    for key in cursors:
        _push(heap, stream_of(key), key, cursors[key], len(sources))

    while heap:
        _, _, key = heapq.heappop(heap)
        stream = stream_of(key)
        position = cursors[key]
        if position >= len(stream):
            continue
        instance = stream[position]

        if key == TARGET:
            outcome = engine.process_target_instance(instance)
            predictions[position - L] = outcome.prediction
            stale[position - L] = outcome.stale
            if outcome.drift:
                reinit_at = _schedule_reinit(sources, target, cursors, position, L)
            if reinit_at is not None and position == reinit_at:
                source_batches = [sources[i].batch(cursors[i] - L, L) for i in range(len(sources))]
                engine.initialize(source_batches, target.batch(position - L + 1, L),
                                  t=int(instance.timestamp))
                reinit_positions.append(position + 1)
                reinit_at = None
                for i in paused:
                    _push(heap, sources[i], i, cursors[i], len(sources))
                paused = []
            cursors[key] = position + 1
            if cursors[key] >= len(target):
                break
        elif engine.initialized:
            engine.process_source_instance(key, instance)
            cursors[key] = position + 1
        else:
            # source en pause jusqu'à la réinitialisation
            paused.append(key)
            continue

        _push(heap, stream, key, cursors[key], len(sources))

    result = RunResult(
        predictions=predictions,
        stale=stale,
        offset=L,
        source_drifts=engine.n_source_drifts,
        target_drifts=engine.n_target_drifts,
        reinits=engine.n_initializations - 1,
        pool_evictions=engine.n_evictions,
        max_pool_size=engine.max_pool_size,
        reinit_positions=reinit_positions,
    )
    logger.info(
        f"Parcours terminé: {result.n_predictions} prédictions ({result.n_stale} périmées), "
        f"{result.source_drifts} dérives sources, {result.target_drifts} dérives cibles"
    )
    return result


def _schedule_reinit(sources: Sequence[InstanceStream], target: InstanceStream, cursors: dict,
                     position: int, L: int) -> Optional[int]:
    """
    Réserve les L_n instances suivantes de chaque source comme nouveaux lots

    Returns:
        Position cible de la réinitialisation, ou None si un flux est trop court
    """
    if position + L >= len(target) or any(cursors[i] + L > len(s) for i, s in enumerate(sources)):
        logger.warning("⚠️ Flux trop courts pour une réinitialisation: prédictions périmées jusqu'à la fin")
        return None
    for i in range(len(sources)):
        cursors[i] += L
    return position + L


def _push(heap: list, stream: InstanceStream, key: int, position: int, n_sources: int) -> None:
    """Ordre de passage: timestamp, puis sources (par indice) avant la cible"""
    if position < len(stream):
        order = n_sources if key == TARGET else key
        heapq.heappush(heap, (int(stream.timestamps[position]), order, key))
