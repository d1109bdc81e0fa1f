"""
OBAL Engine Module
Moteur en ligne multi-flux: adaptation aux dérives sources, détection de
dérive cible, pool de classifieurs et ensemble pondéré
"""

from .pool import (
    EngineError,
    PoolEntry,
    ClassifierPool,
    archive_classifier,
    retrieve_correlation_weight,
    retrieve_correlation_weights
)

from .events import (
    EventType,
    EventLog,
    read_event_log,
    summarize_event_log
)

from .engine import (
    EngineConfig,
    SourceState,
    SourceOutcome,
    TargetOutcome,
    ObalEngine,
    process_source_instance,
    process_target_instance,
    ensemble_predict
)

from .runner import (
    RunResult,
    run_obal
)

from .checkpoint import (
    save_checkpoint,
    load_checkpoint
)

__all__ = [
    "EngineError",
    "PoolEntry",
    "ClassifierPool",
    "archive_classifier",
    "retrieve_correlation_weight",
    "retrieve_correlation_weights",
    "EventType",
    "EventLog",
    "read_event_log",
    "summarize_event_log",
    "EngineConfig",
    "SourceState",
    "SourceOutcome",
    "TargetOutcome",
    "ObalEngine",
    "process_source_instance",
    "process_target_instance",
    "ensemble_predict",
    "RunResult",
    "run_obal",
    "save_checkpoint",
    "load_checkpoint"
]
