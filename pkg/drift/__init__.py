"""
Drift Module
DDM pour les flux sources et détecteur à double fenêtre pour le flux cible
"""

from .ddm import (
    DetectorError,
    DdmStatus,
    DdmState,
    Ddm,
    ddm_update
)

from .target_window import (
    DEFAULT_Z_ALPHA,
    TargetDriftState,
    window_drift_decision,
    target_window_update
)


__all__ = [
    "DetectorError",
    "DdmStatus",
    "DdmState",
    "Ddm",
    "ddm_update",
    "DEFAULT_Z_ALPHA",
    "TargetDriftState",
    "window_drift_decision",
    "target_window_update"
]
