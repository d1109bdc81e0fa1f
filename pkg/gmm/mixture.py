"""
Gaussian Mixture Model
Ajustement EM (initialisation k-means++), sélection de K par BIC et
vraisemblance du composant dominant
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.special import logsumexp

from streams import DataBatch

logger = logging.getLogger(__name__)

MONOTONICITY_TOL = 1e-9
TINY = np.finfo(float).tiny


class GmmError(Exception):
    """Erreur d'ajustement ou d'évaluation du mélange gaussien"""
    pass


@dataclass
class EmConfig:
    """Paramètres EM"""
    max_iters: int = 200
    tol: float = 1e-6
    reg_floor: float = 1e-6
    seed: int = 0
    max_components: int = 5

    def validate(self) -> None:
        if self.max_iters < 1:
            raise GmmError("max_iters doit être >= 1.")
        if self.tol <= 0 or self.reg_floor <= 0:
            raise GmmError("tol et reg_floor doivent être > 0.")
        if self.max_components < 1:
            raise GmmError("max_components doit être >= 1.")


def floor_covariance(S: np.ndarray, floor: float) -> np.ndarray:
    """Relève les valeurs propres sous `floor` (matrice inchangée sinon)"""
    S = 0.5 * (S + S.T)
    values, vectors = np.linalg.eigh(S)
    if values.min() >= floor:
        return S
    floored = (vectors * np.maximum(values, floor)) @ vectors.T
    return 0.5 * (floored + floored.T)


def _cholesky_log_densities(X: np.ndarray, means: np.ndarray, chols: List[np.ndarray]) -> np.ndarray:
    """log N(x | μ_k, Σ_k) pour chaque ligne et composant -> (n, K)"""
    n, d = X.shape
    out = np.empty((n, len(chols)))
    for k, L in enumerate(chols):
        solved = scipy.linalg.solve_triangular(L, (X - means[k]).T, lower=True)
        out[:, k] = (
            -0.5 * d * np.log(2.0 * np.pi)
            - np.sum(np.log(np.diag(L)))
            - 0.5 * np.sum(solved ** 2, axis=0)
        )
    return out


@dataclass(frozen=True, eq=False)
class GmmModel:
    """Mélange de K gaussiennes (poids, moyennes, covariances) et diagnostics d'ajustement"""
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    log_likelihood: float = float("nan")
    history: Tuple[float, ...] = field(default_factory=tuple)
    n_iter: int = 0
    converged: bool = True

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        means = np.atleast_2d(np.asarray(self.means, dtype=float))
        covariances = np.asarray(self.covariances, dtype=float)
        if covariances.ndim == 2:
            covariances = covariances[None, :, :]
        if not (len(weights) == means.shape[0] == covariances.shape[0]):
            raise GmmError("Nombre de composants incohérent.")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-8:
            raise GmmError("Les poids du mélange doivent être positifs et de somme 1.")
        try:
            chols = [scipy.linalg.cholesky(S, lower=True) for S in covariances]
        except np.linalg.LinAlgError:
            raise GmmError("Covariance non définie positive.")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "covariances", covariances)
        object.__setattr__(self, "_chols", chols)

    @property
    def n_components(self) -> int:
        return int(len(self.weights))

    @property
    def dimension(self) -> int:
        return int(self.means.shape[1])

    def _rows(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dimension:
            raise GmmError(f"Dimension attendue {self.dimension}, reçue {X.shape[1]}")
        return X

    def component_log_densities(self, X) -> np.ndarray:
        return _cholesky_log_densities(self._rows(X), self.means, self._chols)

    def score_samples(self, X) -> np.ndarray:
        """log P(x) = log Σ_k w_k N(x | μ_k, Σ_k)"""
        with np.errstate(divide="ignore"):
            return logsumexp(self.component_log_densities(X) + np.log(self.weights), axis=1)

    def max_component_likelihood(self, x) -> float:
        """max_k N(x | μ_k, Σ_k), sans pondération par w_k; toujours > 0"""
        return float(max(np.exp(self.component_log_densities(x)[0].max()), TINY))

    def normalized_likelihood(self, x) -> float:
        """Densité du composant dominant rapportée à sa valeur en sa moyenne, dans ]0, 1]"""
        log_dens = self.component_log_densities(x)[0]
        k = int(np.argmax(log_dens))
        d = self.dimension
        log_peak = -0.5 * d * np.log(2.0 * np.pi) - np.sum(np.log(np.diag(self._chols[k])))
        return float(min(max(np.exp(log_dens[k] - log_peak), TINY), 1.0))

    def total_log_likelihood(self, X) -> float:
        return float(np.sum(self.score_samples(X)))

    def n_parameters(self) -> int:
        K, d = self.n_components, self.dimension
        return (K - 1) + K * d + K * d * (d + 1) // 2

    def bic(self, X) -> float:
        X = self._rows(X)
        return -2.0 * self.total_log_likelihood(X) + self.n_parameters() * np.log(X.shape[0])

    def to_dict(self) -> Dict:
        return {
            "weights": self.weights.tolist(),
            "means": self.means.tolist(),
            "covariances": self.covariances.tolist(),
            "log_likelihood": self.log_likelihood,
            "history": list(self.history),
            "n_iter": self.n_iter,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "GmmModel":
        return cls(
            np.array(data["weights"]),
            np.array(data["means"]),
            np.array(data["covariances"]),
            float(data["log_likelihood"]),
            tuple(data.get("history", [])),
            int(data.get("n_iter", 0)),
            bool(data.get("converged", True)),
        )


# ==================== EM ====================

def _as_matrix(batch: Union[DataBatch, np.ndarray]) -> np.ndarray:
    X = batch.X if isinstance(batch, DataBatch) else np.asarray(batch, dtype=float)
    return X.reshape(-1, 1) if X.ndim == 1 else X


def _kmeans_pp_centers(X: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    centers = [X[rng.integers(X.shape[0])]]
    for _ in range(1, K):
        d2 = np.min(((X[:, None, :] - np.array(centers)[None, :, :]) ** 2).sum(axis=2), axis=1)
        total = d2.sum()
        index = rng.integers(X.shape[0]) if total <= 0 else rng.choice(X.shape[0], p=d2 / total)
        centers.append(X[index])
    return np.array(centers)


def _m_step(X: np.ndarray, resp: np.ndarray, floor: float,
            previous: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n, d = X.shape
    Nk = resp.sum(axis=0)
    K = resp.shape[1]
    means = np.empty((K, d))
    covariances = np.empty((K, d, d))
    for k in range(K):
        if Nk[k] <= 1e-12:
            # composant vide: paramètres précédents ou globaux
            if previous is not None:
                means[k], covariances[k] = previous[0][k], previous[1][k]
            else:
                means[k] = X.mean(axis=0)
                covariances[k] = floor_covariance(np.atleast_2d(np.cov(X, rowvar=False, ddof=0)), floor)
            continue
        means[k] = resp[:, k] @ X / Nk[k]
        diff = X - means[k]
        covariances[k] = floor_covariance((resp[:, k, None] * diff).T @ diff / Nk[k], floor)
    weights = np.clip(Nk / n, 0.0, None)
    return weights / weights.sum(), means, covariances


def _single_component(X: np.ndarray, floor: float) -> GmmModel:
    mean = X.mean(axis=0)
    cov = floor_covariance(np.atleast_2d(np.cov(X, rowvar=False, ddof=0)), floor)
    model = GmmModel(np.ones(1), mean[None, :], cov[None, :, :])
    ll = model.total_log_likelihood(X)
    return GmmModel(model.weights, model.means, model.covariances, ll, (ll,), 0, True)


def _run_em(X: np.ndarray, K: int, config: EmConfig) -> GmmModel:
    n = X.shape[0]
    rng = np.random.default_rng(config.seed)
    centers = _kmeans_pp_centers(X, K, rng)
    assignment = np.argmin(((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2), axis=1)
    resp = np.zeros((n, K))
    resp[np.arange(n), assignment] = 1.0
    weights, means, covariances = _m_step(X, resp, config.reg_floor)

    model = GmmModel(weights, means, covariances)
    ll = model.total_log_likelihood(X)
    history = [ll]
    converged = False
    n_iter = 0
    for n_iter in range(1, config.max_iters + 1):
        # E-step
        log_joint = model.component_log_densities(X) + np.log(np.maximum(model.weights, TINY))
        resp = np.exp(log_joint - logsumexp(log_joint, axis=1, keepdims=True))
        # M-step
        weights, means, covariances = _m_step(X, resp, config.reg_floor, (model.means, model.covariances))
        candidate = GmmModel(weights, means, covariances)
        new_ll = candidate.total_log_likelihood(X)
        if new_ll < ll - MONOTONICITY_TOL:
            logger.warning(
                f"⚠️ Log-vraisemblance en baisse ({ll:.6f} -> {new_ll:.6f}), arrêt avec les derniers paramètres"
            )
            n_iter -= 1
            break
        improvement = (new_ll - ll) / n
        model, ll = candidate, new_ll
        history.append(ll)
        logger.debug(f"EM K={K} itération {n_iter}: LL={ll:.6f}")
        if improvement < config.tol:
            converged = True
            break

    return GmmModel(model.weights, model.means, model.covariances, ll, tuple(history), n_iter, converged)


def select_components(X: np.ndarray, config: EmConfig) -> int:
    """K dans {1..max_components} minimisant le BIC"""
    best_k, best_bic = 1, np.inf
    for K in range(1, min(config.max_components, X.shape[0]) + 1):
        model = _single_component(X, config.reg_floor) if K == 1 else _run_em(X, K, config)
        score = model.bic(X)
        logger.debug(f"BIC K={K}: {score:.3f}")
        if score < best_bic - 1e-12:
            best_k, best_bic = K, score
    return best_k


def fit_gmm(batch: Union[DataBatch, np.ndarray], K: Optional[int] = None,
            em_config: Optional[EmConfig] = None) -> GmmModel:
    """
    Ajuste un mélange gaussien par EM

    Args:
        batch: lot archivé (L_n, d)
        K: nombre de composants (None -> sélection par BIC)
        em_config: max_iters, tol, reg_floor, seed

    Returns:
        GmmModel (historique de log-vraisemblance non décroissant)

    Raises:
        GmmError: K supérieur au nombre de lignes
    """
    config = em_config or EmConfig()
    config.validate()
    X = _as_matrix(batch)
    if not np.all(np.isfinite(X)):
        raise GmmError("Lot non fini.")
    n = X.shape[0]
    if K is not None and K < 1:
        raise GmmError("K doit être >= 1.")
    if K is not None and K > n:
        raise GmmError(f"K={K} supérieur au nombre de lignes ({n}).")
    if n < 1:
        raise GmmError("Lot vide.")

    if np.all(X == X[0]):
        if K is not None and K > 1:
            logger.warning(f"⚠️ Lot dégénéré (lignes identiques): K={K} ramené à 1")
        K = 1
    if K is None:
        K = select_components(X, config)
    if K == 1:
        return _single_component(X, config.reg_floor)

    model = _run_em(X, K, config)
    logger.debug(f"GMM ajusté: K={K}, {model.n_iter} itérations, LL={model.log_likelihood:.4f}")
    return model
