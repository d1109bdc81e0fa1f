"""
Covariance Alignment (CORAL)
Covariance régularisée, transformation d'alignement en forme fermée
et application pondérée aux lots sources
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from streams import DataBatch

logger = logging.getLogger(__name__)

# valeurs propres < RANK_TOL * lambda_max comptées comme nulles
RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-10


class AlignmentError(Exception):
    """Erreur d'alignement de covariance"""
    pass


@dataclass(frozen=True, eq=False)
class AlignmentTransform:
    """Matrice A (d x d) qui blanchit la source puis la recolore avec la cible"""
    matrix: np.ndarray
    rank: int
    source_fingerprint: str = ""
    target_fingerprint: str = ""

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    @classmethod
    def identity(cls, dimension: int) -> "AlignmentTransform":
        return cls(np.eye(dimension), dimension, "identity", "identity")

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix.tolist(),
            "rank": self.rank,
            "source_fingerprint": self.source_fingerprint,
            "target_fingerprint": self.target_fingerprint,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AlignmentTransform":
        return cls(np.array(data["matrix"], dtype=float), int(data["rank"]),
                   data.get("source_fingerprint", ""), data.get("target_fingerprint", ""))


def covariance_fingerprint(C: np.ndarray) -> str:
    """Empreinte courte d'une matrice de covariance"""
    return hashlib.sha1(np.round(np.asarray(C, dtype=float), 12).tobytes()).hexdigest()[:12]


def _rows(batch: Union[DataBatch, np.ndarray]) -> np.ndarray:
    X = batch.X if isinstance(batch, DataBatch) else np.asarray(batch, dtype=float)
    return X.reshape(-1, 1) if X.ndim == 1 else X


def _check_weights(weights, n_rows: int) -> np.ndarray:
    if weights is None:
        return np.ones(n_rows)
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.shape[0] != n_rows:
        raise AlignmentError(f"{n_rows} poids attendus, {w.shape[0]} reçus.")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise AlignmentError("Les poids doivent être finis et positifs.")
    if not np.any(w > 0):
        raise AlignmentError("Tous les poids sont nuls.")
    return w


def regularized_covariance(batch: Union[DataBatch, np.ndarray], weights=None) -> np.ndarray:
    """
    C = cov(cw * D) + I

    Chaque ligne est multipliée par son poids avant le calcul de covariance
    (dénominateur n-1), puis la matrice identité est ajoutée.

    Args:
        batch: lot (L_n, d) avec L_n >= 2
        weights: poids par ligne (optionnels, positifs, pas tous nuls)

    Returns:
        Matrice (d, d) exactement symétrique
    """
    X = _rows(batch)
    if X.shape[0] < 2:
        raise AlignmentError("Au moins 2 lignes sont nécessaires pour une covariance.")
    w = _check_weights(weights, X.shape[0])
    scaled = X * w[:, None]
    cov = np.atleast_2d(np.cov(scaled, rowvar=False, ddof=1))
    C = cov + np.eye(X.shape[1])
    return 0.5 * (C + C.T)


def _check_covariance(C: np.ndarray, name: str) -> np.ndarray:
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise AlignmentError(f"{name} doit être une matrice carrée.")
    if not np.all(np.isfinite(C)):
        raise AlignmentError(f"{name} contient des valeurs non finies.")
    scale = max(1.0, float(np.max(np.abs(C))))
    if np.max(np.abs(C - C.T)) > SYMMETRY_TOL * scale:
        raise AlignmentError(f"{name} n'est pas symétrique.")
    return 0.5 * (C + C.T)


def _eigen(C: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    """Valeurs propres décroissantes (tronquées à 0), vecteurs propres, rang effectif"""
    values, vectors = np.linalg.eigh(C)
    order = np.argsort(values)[::-1]
    values, vectors = values[order], vectors[:, order]
    top = values[0] if values.size else 0.0
    if top <= 0:
        return np.zeros_like(values), vectors, 0
    values = np.where(values > RANK_TOL * top, values, 0.0)
    return values, vectors, int(np.count_nonzero(values))


def coral_transform(C_S: np.ndarray, C_T: np.ndarray) -> AlignmentTransform:
    """
    A = U_S Σ_S^{+1/2} U_S^T · U_T[1:r] Σ_T[1:r]^{1/2} U_T[1:r]^T
    avec r = min(rang C_S, rang C_T)

    Args:
        C_S: covariance source (symétrique, semi-définie positive)
        C_T: covariance cible, même dimension

    Returns:
        AlignmentTransform
    """
    C_S = _check_covariance(C_S, "C_S")
    C_T = _check_covariance(C_T, "C_T")
    if C_S.shape != C_T.shape:
        raise AlignmentError(f"Dimensions incompatibles: {C_S.shape} vs {C_T.shape}")

    values_s, vectors_s, rank_s = _eigen(C_S)
    values_t, vectors_t, rank_t = _eigen(C_T)
    r = min(rank_s, rank_t)

    inv_sqrt = np.zeros_like(values_s)
    positive = values_s > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(values_s[positive])
    whitening = (vectors_s * inv_sqrt) @ vectors_s.T

    U_r = vectors_t[:, :r]
    recoloring = (U_r * np.sqrt(values_t[:r])) @ U_r.T

    A = whitening @ recoloring
    if not np.all(np.isfinite(A)):
        raise AlignmentError("Transformation non finie.")
    logger.debug(f"Transformation CORAL: d={A.shape[0]}, rang effectif={r}")
    return AlignmentTransform(A, r, covariance_fingerprint(C_S), covariance_fingerprint(C_T))


def alignment_objective(A: np.ndarray, C_S: np.ndarray, C_T: np.ndarray) -> float:
    """||A^T C_S A - C_T||_F^2"""
    A = np.atleast_2d(A)
    return float(np.sum((A.T @ C_S @ A - C_T) ** 2))


@dataclass(frozen=True, eq=False)
class AlignmentFrame:
    """
    Repère standardisé du lot cible: z = (x - center) / scale

    Les covariances et D* = cw * D * A sont calculés dans ce repère, puis les
    lignes alignées reviennent en unités d'origine.
    """
    center: np.ndarray
    scale: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.center.shape[0])

    @classmethod
    def fit(cls, batch: Union[DataBatch, np.ndarray]) -> "AlignmentFrame":
        X = _rows(batch)
        if X.shape[0] < 2:
            raise AlignmentError("Au moins 2 lignes sont nécessaires pour un repère.")
        scale = X.std(axis=0, ddof=1)
        return cls(X.mean(axis=0), np.where(scale > 0, scale, 1.0))

    @classmethod
    def identity(cls, dimension: int) -> "AlignmentFrame":
        return cls(np.zeros(dimension), np.ones(dimension))

    def encode(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.center) / self.scale

    def decode(self, Z: np.ndarray) -> np.ndarray:
        return np.asarray(Z, dtype=float) * self.scale + self.center

    def to_dict(self) -> dict:
        return {"center": self.center.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "AlignmentFrame":
        return cls(np.array(data["center"], dtype=float), np.array(data["scale"], dtype=float))


def _check_frame(frame: Optional[AlignmentFrame], transform: AlignmentTransform) -> None:
    if frame is not None and frame.dimension != transform.dimension:
        raise AlignmentError(f"Dimension du repère ({frame.dimension}) != transformation ({transform.dimension})")


def apply_alignment(batch: DataBatch, weights, transform: AlignmentTransform,
                    frame: Optional[AlignmentFrame] = None) -> DataBatch:
    """
    D* = cw * D * A (chaque ligne multipliée par son poids, puis par A)
    Étiquettes et timestamps conservés.

    Avec `frame`, la formule s'applique aux lignes standardisées et le
    résultat est ramené en unités d'origine.
    """
    if batch.dimension != transform.dimension:
        raise AlignmentError(f"Dimension du lot ({batch.dimension}) != transformation ({transform.dimension})")
    _check_frame(frame, transform)
    w = _check_weights(weights, len(batch))
    if frame is None:
        return batch.with_features((batch.X * w[:, None]) @ transform.matrix)
    return batch.with_features(frame.decode((frame.encode(batch.X) * w[:, None]) @ transform.matrix))


def align_row(x: np.ndarray, weight: float, transform: AlignmentTransform,
              frame: Optional[AlignmentFrame] = None) -> np.ndarray:
    """Version une-instance de apply_alignment (traitement en ligne)"""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != transform.dimension:
        raise AlignmentError(f"Dimension de l'instance ({x.shape[-1]}) != transformation ({transform.dimension})")
    if weight < 0:
        raise AlignmentError("Le poids doit être positif.")
    if frame is None:
        return (x * weight) @ transform.matrix
    _check_frame(frame, transform)
    return frame.decode((frame.encode(x) * weight) @ transform.matrix)
