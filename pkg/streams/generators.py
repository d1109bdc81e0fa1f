"""
Synthetic Stream Generators
Flux synthétiques avec dérive: SEA, Tree, RBF, Hyperplane
"""

import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from .types import InstanceStream, ScenarioConfig, ScenarioError

logger = logging.getLogger(__name__)


# Valeurs par défaut par générateur (nombre de caractéristiques, bruit, taille par flux)
GENERATOR_DEFAULTS: Dict[str, Dict[str, float]] = {
    "SEA": {"n_features": 3, "noise": 0.0, "samples_per_stream": 25000},
    "TREE": {"n_features": 20, "noise": 0.0, "samples_per_stream": 5000},
    "RBF": {"n_features": 10, "noise": 0.0, "samples_per_stream": 5000},
    "HYPERPLANE": {"n_features": 4, "noise": 0.05, "samples_per_stream": 30000},
}

SEA_THETAS = (4.0, 7.0)


def sea_label(x: np.ndarray, theta: float) -> int:
    """Règle SEA: classe 1 si f1 + f2 <= theta"""
    return int(x[0] + x[1] <= theta)


def hyperplane_label(x: np.ndarray, weights: np.ndarray, offset: float) -> int:
    """Règle Hyperplane: classe positive si sum(w_j x_j) > w_0"""
    return int(float(np.dot(weights, x)) > offset)


def default_change_points(total: int, n_segments: int = 4) -> List[int]:
    """Points de changement aux fractions égales du flux (4 -> 7 -> 4 -> 7 pour SEA)"""
    return [total * k // n_segments for k in range(1, n_segments)]


def _segment_index(length: int, change_points: List[int]) -> np.ndarray:
    return np.searchsorted(np.asarray(change_points, dtype=np.int64), np.arange(length), side="right")


def _concept_index(length: int, change_points: List[int], style: str, width: int,
                   rng: np.random.Generator) -> np.ndarray:
    """
    Indice du concept actif pour chaque instance
    abrupt: bascule exacte au point de changement
    gradual: mélange sigmoïde de largeur `width` autour du point
    """
    segments = _segment_index(length, change_points)
    if style == "abrupt" or not change_points:
        return segments
    t = np.arange(length)
    concept = np.zeros(length, dtype=np.int64)
    for k, point in enumerate(change_points):
        z = np.clip(-4.0 * (t - point) / max(width, 1), -500, 500)
        p_new = 1.0 / (1.0 + np.exp(z))
        switched = rng.random(length) < p_new
        concept = np.where(switched, k + 1, concept)
    return concept


def _apply_noise(y: np.ndarray, noise: float, n_classes: int, rng: np.random.Generator) -> np.ndarray:
    if noise <= 0:
        return y
    flip = rng.random(y.shape[0]) < noise
    shift = rng.integers(1, n_classes, size=y.shape[0])
    return np.where(flip, (y + shift) % n_classes, y)


def _resolve(config: ScenarioConfig, kind: str):
    defaults = GENERATOR_DEFAULTS[kind]
    n_features = int(config.n_features or defaults["n_features"])
    noise = defaults["noise"] if config.noise is None else float(config.noise)
    return n_features, noise


# ==================== SEA ====================

def _generate_sea(config: ScenarioConfig, rng: np.random.Generator) -> InstanceStream:
    n_features, noise = _resolve(config, "SEA")
    if n_features < 3:
        raise ScenarioError("SEA requiert 3 caractéristiques.")
    total = config.total_length
    change_points = list(config.change_points) if config.change_points is not None else default_change_points(total)
    thetas = config.params.get("thetas", SEA_THETAS)

    X = rng.uniform(0.0, 10.0, size=(total, n_features))
    concept = _concept_index(total, change_points, config.drift_style, config.drift_width, rng)
    theta = np.asarray(thetas, dtype=float)[concept % len(thetas)]
    y = (X[:, 0] + X[:, 1] <= theta).astype(np.int64)
    y = _apply_noise(y, noise, 2, rng)
    return InstanceStream.from_arrays(X, y, n_classes=2)


# ==================== TREE ====================

class RandomTreeConcept:
    """Arbre de décision aléatoire complet (profondeur fixe, seuils uniformes)"""

    def __init__(self, n_features: int, n_classes: int, depth: int, rng: np.random.Generator):
        self.depth = depth
        n_internal = 2 ** depth - 1
        self.split_features = rng.integers(0, n_features, size=n_internal)
        self.thresholds = rng.uniform(0.0, 1.0, size=n_internal)
        labels = rng.integers(0, n_classes, size=2 ** depth)
        # au moins deux classes présentes dans les feuilles
        while np.unique(labels).size < min(n_classes, 2 ** depth):
            labels = rng.integers(0, n_classes, size=2 ** depth)
        self.leaf_labels = labels

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        for _ in range(self.depth):
            go_right = X[rows, self.split_features[node]] > self.thresholds[node]
            node = 2 * node + 1 + go_right.astype(np.int64)
        return self.leaf_labels[node - (2 ** self.depth - 1)]


def _generate_tree(config: ScenarioConfig, rng: np.random.Generator) -> InstanceStream:
    n_features, noise = _resolve(config, "TREE")
    total = config.total_length
    depth = int(config.params.get("depth", 5))
    change_points = list(config.change_points) if config.change_points is not None else default_change_points(total)

    X = rng.uniform(0.0, 1.0, size=(total, n_features))
    concept = _concept_index(total, change_points, config.drift_style, config.drift_width, rng)
    trees = [RandomTreeConcept(n_features, config.n_classes, depth, rng) for _ in range(len(change_points) + 1)]
    y = np.zeros(total, dtype=np.int64)
    for k, tree in enumerate(trees):
        mask = concept == k
        if mask.any():
            y[mask] = tree.predict(X[mask])
    y = _apply_noise(y, noise, config.n_classes, rng)
    return InstanceStream.from_arrays(X, y, n_classes=config.n_classes)


# ==================== RBF ====================

def _motion_active(length: int, change_points: List[int]) -> np.ndarray:
    """Mouvement continu à partir du premier point de changement (ou dès t=0)"""
    start = change_points[0] if change_points else 0
    return np.arange(length) >= start


def _generate_rbf(config: ScenarioConfig, rng: np.random.Generator) -> InstanceStream:
    n_features, noise = _resolve(config, "RBF")
    total = config.total_length
    n_centroids = int(config.params.get("n_centroids", 50))
    speed = float(config.params.get("speed", 1e-3))
    change_points = list(config.change_points or [])

    centers = rng.uniform(0.0, 1.0, size=(n_centroids, n_features))
    std_devs = rng.uniform(0.0, 1.0, size=n_centroids) * 0.1
    classes = rng.integers(0, config.n_classes, size=n_centroids)
    weights = rng.uniform(0.0, 1.0, size=n_centroids)
    weights = weights / weights.sum()
    directions = rng.normal(size=(n_centroids, n_features))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    active = _motion_active(total, change_points)
    boundaries = set(change_points[1:])
    X = np.empty((total, n_features))
    y = np.empty(total, dtype=np.int64)
    picks = rng.choice(n_centroids, size=total, p=weights)
    offsets = rng.normal(size=(total, n_features))
    magnitudes = rng.normal(size=total)
    for t in range(total):
        if t in boundaries:
            directions = rng.normal(size=(n_centroids, n_features))
            directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        if active[t]:
            centers = centers + speed * directions
            # rebond sur les bords de [0, 1]^d
            out = (centers < 0.0) | (centers > 1.0)
            directions = np.where(out, -directions, directions)
            centers = np.clip(centers, 0.0, 1.0)
        k = picks[t]
        direction = offsets[t] / (np.linalg.norm(offsets[t]) or 1.0)
        X[t] = centers[k] + direction * magnitudes[t] * std_devs[k]
        y[t] = classes[k]
    y = _apply_noise(y, noise, config.n_classes, rng)
    return InstanceStream.from_arrays(X, y, n_classes=config.n_classes)


# ==================== HYPERPLANE ====================

def _generate_hyperplane(config: ScenarioConfig, rng: np.random.Generator) -> InstanceStream:
    n_features, noise = _resolve(config, "HYPERPLANE")
    total = config.total_length
    mag_change = float(config.params.get("mag_change", 1e-3))
    sigma = float(config.params.get("sigma", 0.1))
    n_drift = int(config.params.get("n_drift_features", max(1, n_features // 2)))
    change_points = list(config.change_points or [])

    weights = rng.uniform(0.0, 1.0, size=n_features)
    signs = np.ones(n_features)
    X = rng.uniform(0.0, 1.0, size=(total, n_features))
    flips = rng.random(size=(total, n_drift)) < sigma
    active = _motion_active(total, change_points)
    boundaries = set(change_points[1:])
    y = np.empty(total, dtype=np.int64)
    for t in range(total):
        if t in boundaries:
            signs[:n_drift] = -signs[:n_drift]
        y[t] = hyperplane_label(X[t], weights, 0.5 * weights.sum())
        if active[t]:
            weights[:n_drift] += signs[:n_drift] * mag_change
            signs[:n_drift] = np.where(flips[t], -signs[:n_drift], signs[:n_drift])
    y = _apply_noise(y, noise, 2, rng)
    return InstanceStream.from_arrays(X, y, n_classes=2)


_GENERATORS: Dict[str, Callable[[ScenarioConfig, np.random.Generator], InstanceStream]] = {
    "SEA": _generate_sea,
    "TREE": _generate_tree,
    "RBF": _generate_rbf,
    "HYPERPLANE": _generate_hyperplane,
}


def generate_synthetic(kind: str, config: ScenarioConfig) -> InstanceStream:
    """
    Génère un flux étiqueté de longueur samples_per_stream * (n_sources + 1)

    Args:
        kind: SEA, Tree, RBF ou Hyperplane (insensible à la casse)
        config: configuration du scénario (graine, points de changement, style)

    Returns:
        Flux étiqueté, déterministe pour une graine donnée
    """
    key = str(kind).upper()
    if key not in _GENERATORS:
        raise ScenarioError(f"Générateur inconnu: {kind}")
    config.validate()
    rng = np.random.default_rng(config.seed)
    stream = _GENERATORS[key](config, rng)
    logger.debug(f"Flux {key} généré: {len(stream)} instances, d={stream.dimension}")
    return stream


def resolve_samples_per_stream(kind: str, samples: Optional[int]) -> int:
    """Taille par flux: valeur explicite ou défaut du générateur"""
    if samples:
        return int(samples)
    return int(GENERATOR_DEFAULTS[str(kind).upper()]["samples_per_stream"])
