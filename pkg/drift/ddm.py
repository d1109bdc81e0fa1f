"""
Drift Detection Method (DDM)
Détecteur supervisé sur le taux d'erreur des classifieurs sources
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict

logger = logging.getLogger(__name__)


class DetectorError(Exception):
    """Erreur d'un détecteur de dérive"""
    pass


class DdmStatus(Enum):
    """Niveau d'alerte du détecteur"""
    STABLE = "stable"
    WARNING = "warning"
    DRIFT = "drift"


@dataclass
class DdmState:
    """
    Statistiques courantes du DDM

    p_i = taux d'erreur courant, s_i = sqrt(p_i (1 - p_i) / i);
    p_min et s_min sont enregistrés quand p_i + s_i atteint un minimum.
    """
    i: int = 0
    p: float = 1.0
    s: float = 0.0
    p_min: float = math.inf
    s_min: float = math.inf
    status: DdmStatus = DdmStatus.STABLE

    def to_dict(self) -> Dict:
        return {
            "i": self.i, "p": self.p, "s": self.s,
            "p_min": None if math.isinf(self.p_min) else self.p_min,
            "s_min": None if math.isinf(self.s_min) else self.s_min,
            "status": self.status.value,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "DdmState":
        return cls(
            int(data["i"]), float(data["p"]), float(data["s"]),
            math.inf if data["p_min"] is None else float(data["p_min"]),
            math.inf if data["s_min"] is None else float(data["s_min"]),
            DdmStatus(data["status"]),
        )


class Ddm:
    """
    DDM avec période de chauffe

    Les seuils ne s'appliquent qu'à partir de `warmup` mises à jour.
    Comparaisons strictes: un flux sans erreur (p = s = 0) reste stable.
    Après une dérive signalée, l'état repart de zéro (chauffe comprise).
    """

    def __init__(self, warmup: int = 30, warning_level: float = 2.0, drift_level: float = 3.0):
        if warmup < 1:
            raise DetectorError("warmup doit être >= 1.")
        if not 0 < warning_level < drift_level:
            raise DetectorError("Il faut 0 < warning_level < drift_level.")
        self.warmup = warmup
        self.warning_level = float(warning_level)
        self.drift_level = float(drift_level)
        self.state = DdmState()
        self.n_drifts = 0
        self.last_statistics: Dict = {}

    def reset(self) -> None:
        self.state = DdmState()

    @property
    def status(self) -> DdmStatus:
        return self.state.status

    def update(self, correct: bool) -> DdmStatus:
        """
        Ajoute une prédiction (correcte ou non) et renvoie le statut

        Args:
            correct: True si la prédiction du classifieur source était juste

        Returns:
            DdmStatus (DRIFT => l'état a été réinitialisé)
        """
        st = self.state
        error = 0.0 if correct else 1.0
        st.i += 1
        st.p += (error - st.p) / st.i
        st.s = math.sqrt(max(st.p * (1.0 - st.p), 0.0) / st.i)

        if st.i < self.warmup:
            st.status = DdmStatus.STABLE
            return st.status

        if st.p + st.s <= st.p_min + st.s_min:
            st.p_min = st.p
            st.s_min = st.s

        level = st.p + st.s
        if level > st.p_min + self.drift_level * st.s_min:
            self.last_statistics = {"p": st.p, "s": st.s, "p_min": st.p_min, "s_min": st.s_min, "i": st.i}
            self.n_drifts += 1
            logger.debug(f"DDM: dérive après {st.i} instances (p={st.p:.4f}, p_min={st.p_min:.4f})")
            self.reset()
            self.state.status = DdmStatus.DRIFT
            return DdmStatus.DRIFT
        if level > st.p_min + self.warning_level * st.s_min:
            st.status = DdmStatus.WARNING
        else:
            st.status = DdmStatus.STABLE
        return st.status

    def to_dict(self) -> Dict:
        return {
            "warmup": self.warmup,
            "warning_level": self.warning_level,
            "drift_level": self.drift_level,
            "state": self.state.to_dict(),
            "n_drifts": self.n_drifts,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "Ddm":
        detector = cls(int(data["warmup"]), float(data["warning_level"]), float(data["drift_level"]))
        detector.state = DdmState.from_dict(data["state"])
        detector.n_drifts = int(data.get("n_drifts", 0))
        return detector


def ddm_update(detector: Ddm, correct: bool) -> DdmStatus:
    return detector.update(correct)
