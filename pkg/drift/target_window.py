"""
Target Window Detector
Deux fenêtres glissantes contiguës sur la vraisemblance GMM du flux cible
"""

import logging
import math
from collections import deque
from typing import Dict, Iterable, Optional

import numpy as np

from .ddm import DetectorError

logger = logging.getLogger(__name__)

DEFAULT_Z_ALPHA = 3.0


def window_drift_decision(mu_ref: float, mu_det: float, sigma: float, n: int,
                          z_alpha: float = DEFAULT_Z_ALPHA, two_sided: bool = True) -> bool:
    """
    Test de la moyenne de W_det contre l'intervalle de confiance de W_ref

    Mode littéral: μ_det - μ_ref >= z_α σ/√n.
    Mode bilatéral: |μ_det - μ_ref| >= z_α σ/√n.
    Un écart nul ne déclenche jamais, même avec σ = 0.
    """
    deviation = abs(mu_det - mu_ref) if two_sided else mu_det - mu_ref
    return bool(deviation > 0 and deviation >= z_alpha * sigma / math.sqrt(n))


class TargetDriftState:
    """
    W_ref (n valeurs les plus anciennes) suivi immédiatement de W_det (n plus récentes)

    Les deux fenêtres avancent d'un pas à chaque nouvelle vraisemblance, avec des
    sommes glissantes (recalculées exactement toutes les 2n mises à jour).
    Aucune décision tant que 2n valeurs n'ont pas été reçues.

    σ vaut par défaut l'écart-type de la différence des deux fenêtres,
    sqrt(s_ref² + s_det²); pooled_sigma=False revient à l'écart-type de W_ref seul.
    La dérive n'est signalée qu'après `patience` tests positifs consécutifs
    (n // 2 par défaut, 1 pour un test instantané).
    """

    def __init__(self, n: int, z_alpha: float = DEFAULT_Z_ALPHA, two_sided: bool = True,
                 patience: Optional[int] = None, pooled_sigma: bool = True,
                 values: Iterable[float] = ()):
        if n < 2:
            raise DetectorError("La taille de fenêtre doit être >= 2.")
        if z_alpha <= 0:
            raise DetectorError("z_alpha doit être > 0.")
        if patience is None:
            patience = max(1, n // 2)
        if patience < 1:
            raise DetectorError("patience doit être >= 1.")
        self.n = int(n)
        self.z_alpha = float(z_alpha)
        self.two_sided = bool(two_sided)
        self.patience = int(patience)
        self.pooled_sigma = bool(pooled_sigma)
        self.last_statistics: Dict = {}
        self.reset()
        for value in values:
            self._push(value)

    @property
    def warmed(self) -> bool:
        return len(self._ref) == self.n

    @property
    def reference_window(self) -> np.ndarray:
        return np.array(self._ref, dtype=float)

    @property
    def detection_window(self) -> np.ndarray:
        return np.array(self._det, dtype=float)

    def reset(self) -> None:
        self._ref: deque = deque()
        self._det: deque = deque()
        self._sum_ref = self._sq_ref = 0.0
        self._sum_det = self._sq_det = 0.0
        self._since_refresh = 0
        self.streak = 0
        self.last_statistics = {}

    # ==== Fenêtres ====

    def _push(self, likelihood: float) -> None:
        value = float(likelihood)
        if not math.isfinite(value):
            raise DetectorError(f"Vraisemblance non finie: {likelihood}")
        if len(self._det) < self.n:
            self._det.append(value)
            self._sum_det += value
            self._sq_det += value * value
            return
        moved = self._det.popleft()
        self._det.append(value)
        self._sum_det += value - moved
        self._sq_det += value * value - moved * moved
        if len(self._ref) < self.n:
            self._ref.append(moved)
            self._sum_ref += moved
            self._sq_ref += moved * moved
        else:
            out = self._ref.popleft()
            self._ref.append(moved)
            self._sum_ref += moved - out
            self._sq_ref += moved * moved - out * out
        self._since_refresh += 1
        if self._since_refresh >= 2 * self.n:
            self._refresh()

    def _refresh(self) -> None:
        self._sum_ref = math.fsum(self._ref)
        self._sq_ref = math.fsum(v * v for v in self._ref)
        self._sum_det = math.fsum(self._det)
        self._sq_det = math.fsum(v * v for v in self._det)
        self._since_refresh = 0

    def _variance(self, total: float, squares: float) -> float:
        return max(squares - total * total / self.n, 0.0) / (self.n - 1)

    # ==== Décision ====

    def update(self, likelihood: float) -> bool:
        """
        Ajoute une vraisemblance et teste la dérive

        Returns:
            True si W_det s'écarte significativement de W_ref pendant `patience` pas
        """
        self._push(likelihood)
        if not self.warmed:
            return False
        mu_ref = self._sum_ref / self.n
        mu_det = self._sum_det / self.n
        var_ref = self._variance(self._sum_ref, self._sq_ref)
        var_det = self._variance(self._sum_det, self._sq_det)
        sigma = math.sqrt(var_ref + var_det) if self.pooled_sigma else math.sqrt(var_ref)
        exceeded = window_drift_decision(mu_ref, mu_det, sigma, self.n, self.z_alpha, self.two_sided)
        self.streak = self.streak + 1 if exceeded else 0
        self.last_statistics = {
            "mu_ref": mu_ref,
            "mu_det": mu_det,
            "sigma": sigma,
            "threshold": self.z_alpha * sigma / math.sqrt(self.n),
            "streak": float(self.streak),
        }
        if self.streak >= self.patience:
            self.streak = 0
            return True
        return False

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "z_alpha": self.z_alpha,
            "two_sided": self.two_sided,
            "patience": self.patience,
            "pooled_sigma": self.pooled_sigma,
            "values": list(self._ref) + list(self._det),
            "sums": [self._sum_ref, self._sq_ref, self._sum_det, self._sq_det],
            "since_refresh": self._since_refresh,
            "streak": self.streak,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TargetDriftState":
        state = cls(int(data["n"]), float(data["z_alpha"]), bool(data["two_sided"]),
                    patience=data.get("patience"), pooled_sigma=bool(data.get("pooled_sigma", True)),
                    values=data["values"])
        if "sums" in data:
            state._sum_ref, state._sq_ref, state._sum_det, state._sq_det = (float(v) for v in data["sums"])
            state._since_refresh = int(data["since_refresh"])
        state.streak = int(data.get("streak", 0))
        return state


def target_window_update(state: TargetDriftState, likelihood: float) -> bool:
    return state.update(likelihood)
