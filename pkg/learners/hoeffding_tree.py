"""
Hoeffding Tree (VFDT)
Arbre de décision incrémental pour attributs numériques, comptes pondérés,
feuilles majoritaires ou naive Bayes
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.stats import norm

from .base import BaseClassifier, LearnerError, register_classifier
from .naive_bayes import VAR_SMOOTHING, WeightedGaussian

logger = logging.getLogger(__name__)

LEAF_MODES = ("mc", "nb")


@dataclass
class HoeffdingTreeParams:
    """Hyperparamètres de l'arbre (aucune valeur publiée: défauts usuels de VFDT)"""
    grace_period: int = 200
    split_confidence: float = 1e-7
    tie_threshold: float = 0.05
    leaf_prediction: str = "nb"
    n_split_points: int = 10
    max_depth: Optional[int] = None

    def validate(self) -> None:
        if self.grace_period < 1:
            raise LearnerError("grace_period doit être >= 1.")
        if not 0.0 < self.split_confidence < 1.0:
            raise LearnerError("split_confidence doit être dans ]0, 1[.")
        if self.tie_threshold < 0:
            raise LearnerError("tie_threshold doit être >= 0.")
        if self.leaf_prediction not in LEAF_MODES:
            raise LearnerError(f"Mode de feuille inconnu: {self.leaf_prediction}")
        if self.n_split_points < 1:
            raise LearnerError("n_split_points doit être >= 1.")


def entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log2(p)))


def hoeffding_bound(value_range: float, confidence: float, n: float) -> float:
    """ε = sqrt(R² ln(1/δ) / (2n))"""
    return math.sqrt(value_range ** 2 * math.log(1.0 / confidence) / (2.0 * n))


class _Leaf:
    def __init__(self, n_features: int, n_classes: int, depth: int = 0,
                 class_counts: Optional[np.ndarray] = None):
        self.depth = depth
        self.class_counts = np.zeros(n_classes) if class_counts is None else np.array(class_counts, dtype=float)
        self.estimators = [WeightedGaussian(n_features) for _ in range(n_classes)]
        self.weight_at_last_eval = 0.0
        self._terms = None

    @property
    def observed_weight(self) -> float:
        return float(sum(est.weight for est in self.estimators))

    def update(self, x: np.ndarray, y: int, weight: float) -> None:
        self.class_counts[y] += weight
        self.estimators[y].update(x, weight)
        self._terms = None

    def smoothed_counts(self) -> np.ndarray:
        return (self.class_counts + 1.0) / (self.class_counts.sum() + len(self.class_counts))

    def _prediction_terms(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Termes gaussiens des classes entraînées, recalculés après chaque mise à jour"""
        trained = np.array([c for c, est in enumerate(self.estimators) if est.weight > 0], dtype=np.int64)
        if trained.size == 0:
            return trained, np.empty((0, 0)), np.empty((0, 0)), np.empty(0)
        variances = np.array([self.estimators[c].variance for c in trained])
        var = variances + VAR_SMOOTHING * max(float(variances.max()), 1.0)
        means = np.array([self.estimators[c].mean for c in trained])
        return trained, means, 1.0 / var, -0.5 * np.sum(np.log(2.0 * np.pi * var), axis=1)

    def proba(self, x: np.ndarray, mode: str) -> np.ndarray:
        prior = self.smoothed_counts()
        if mode == "mc":
            return prior
        if self._terms is None:
            self._terms = self._prediction_terms()
        trained, means, inv_var, log_norm = self._terms
        if trained.size == 0:
            return prior
        log_lik = log_norm - 0.5 * np.sum((x - means) ** 2 * inv_var, axis=1)
        # classes jamais vues: vraisemblance de la pire classe observée
        full = np.full(len(prior), log_lik.min())
        full[trained] = log_lik
        scores = np.log(prior) + full
        scores -= scores.max()
        proba = np.exp(scores)
        return proba / proba.sum()

    def candidate_splits(self, n_points: int) -> List[Tuple[float, int, float, np.ndarray, np.ndarray]]:
        """(gain, caractéristique, seuil, distribution gauche, distribution droite) par caractéristique"""
        weights = np.array([est.weight for est in self.estimators])
        parent_entropy = entropy(weights)
        total = weights.sum()
        trained = [est for est in self.estimators if est.weight > 0]
        best_per_feature = []
        for j in range(len(trained[0].mean)):
            lo = min(est.minimum[j] for est in trained)
            hi = max(est.maximum[j] for est in trained)
            if not hi > lo:
                continue
            thresholds = np.linspace(lo, hi, n_points + 2)[1:-1]
            # lefts[c, k]: poids estimé de la classe c sous le seuil k
            lefts = np.zeros((len(weights), len(thresholds)))
            for c, est in enumerate(self.estimators):
                if est.weight <= 0:
                    continue
                std = math.sqrt(est.variance[j])
                if std > 0:
                    lefts[c] = est.weight * norm.cdf(thresholds, loc=est.mean[j], scale=std)
                else:
                    lefts[c] = np.where(est.mean[j] <= thresholds, est.weight, 0.0)
            best = None
            for k, threshold in enumerate(thresholds):
                left = lefts[:, k]
                right = weights - left
                children = (left.sum() * entropy(left) + right.sum() * entropy(right)) / total
                gain = parent_entropy - children
                if best is None or gain > best[0]:
                    best = (gain, j, float(threshold), left.copy(), right)
            if best is not None:
                best_per_feature.append(best)
        best_per_feature.sort(key=lambda item: (-item[0], item[1]))
        return best_per_feature

    def to_dict(self) -> Dict:
        return {
            "type": "leaf",
            "depth": self.depth,
            "class_counts": self.class_counts.tolist(),
            "estimators": [est.to_dict() for est in self.estimators],
            "weight_at_last_eval": self.weight_at_last_eval,
        }

    @classmethod
    def from_dict(cls, data: Dict, n_features: int, n_classes: int) -> "_Leaf":
        leaf = cls(n_features, n_classes, data["depth"], np.array(data["class_counts"]))
        leaf.estimators = [WeightedGaussian.from_dict(e) for e in data["estimators"]]
        leaf.weight_at_last_eval = float(data["weight_at_last_eval"])
        return leaf


class _Split:
    def __init__(self, feature: int, threshold: float, left, right, depth: int = 0):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.depth = depth

    def child(self, x: np.ndarray):
        return self.left if x[self.feature] <= self.threshold else self.right

    def to_dict(self) -> Dict:
        return {
            "type": "split",
            "depth": self.depth,
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }


Node = Union[_Leaf, _Split]


def _node_from_dict(data: Dict, n_features: int, n_classes: int) -> Node:
    if data["type"] == "leaf":
        return _Leaf.from_dict(data, n_features, n_classes)
    return _Split(
        int(data["feature"]),
        float(data["threshold"]),
        _node_from_dict(data["left"], n_features, n_classes),
        _node_from_dict(data["right"], n_features, n_classes),
        int(data["depth"]),
    )


@register_classifier
class HoeffdingTree(BaseClassifier):
    """
    Very Fast Decision Tree

    Une feuille tente une coupure toutes les `grace_period` unités de poids;
    elle coupe si le meilleur gain d'information dépasse le second de plus
    que la borne de Hoeffding (n = poids observé, R = log2 C), ou si la borne
    passe sous `tie_threshold`.
    """

    kind = "hoeffding_tree"

    def __init__(self, n_features: int, n_classes: int = 2, grace_period: int = 200,
                 split_confidence: float = 1e-7, tie_threshold: float = 0.05,
                 leaf_prediction: str = "nb", n_split_points: int = 10,
                 max_depth: Optional[int] = None):
        super().__init__(n_features, n_classes)
        self.tree_params = HoeffdingTreeParams(
            grace_period, split_confidence, tie_threshold, leaf_prediction, n_split_points, max_depth
        )
        self.tree_params.validate()
        self.root: Node = _Leaf(n_features, n_classes)
        self.n_splits = 0

    def params(self) -> Dict:
        return {**super().params(), **asdict(self.tree_params)}

    def _sort(self, x: np.ndarray) -> _Leaf:
        node = self.root
        while isinstance(node, _Split):
            node = node.child(x)
        return node

    def _learn(self, x: np.ndarray, y: int, weight: float) -> None:
        leaf = self._sort(x)
        leaf.update(x, y, weight)
        if leaf.observed_weight - leaf.weight_at_last_eval >= self.tree_params.grace_period:
            self._attempt_split(leaf)
            leaf.weight_at_last_eval = leaf.observed_weight

    def _attempt_split(self, leaf: _Leaf) -> None:
        params = self.tree_params
        if params.max_depth is not None and leaf.depth >= params.max_depth:
            return
        observed = np.array([est.weight for est in leaf.estimators])
        if np.count_nonzero(observed > 0) < 2:
            return
        candidates = leaf.candidate_splits(params.n_split_points)
        if not candidates:
            return
        best_gain = candidates[0][0]
        second_gain = candidates[1][0] if len(candidates) > 1 else 0.0
        epsilon = hoeffding_bound(math.log2(self.n_classes), params.split_confidence, leaf.observed_weight)
        if best_gain <= 0:
            return
        if best_gain - second_gain > epsilon or epsilon < params.tie_threshold:
            _, feature, threshold, left, right = candidates[0]
            self._replace(leaf, feature, threshold, left, right)
            logger.debug(
                f"Coupure: x[{feature}] <= {threshold:.4f} (gain={best_gain:.4f}, eps={epsilon:.4f})"
            )

    def _replace(self, leaf: _Leaf, feature: int, threshold: float,
                 left_counts: np.ndarray, right_counts: np.ndarray) -> None:
        depth = leaf.depth + 1
        split = _Split(
            feature,
            threshold,
            _Leaf(self.n_features, self.n_classes, depth, left_counts),
            _Leaf(self.n_features, self.n_classes, depth, right_counts),
            leaf.depth,
        )
        self.n_splits += 1
        if self.root is leaf:
            self.root = split
            return
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not isinstance(node, _Split):
                continue
            if node.left is leaf:
                node.left = split
                return
            if node.right is leaf:
                node.right = split
                return
            stack.extend([node.left, node.right])

    def _proba(self, x: np.ndarray) -> np.ndarray:
        return self._sort(x).proba(x, self.tree_params.leaf_prediction)

    def _state_dict(self) -> Dict:
        return {"root": self.root.to_dict(), "n_splits": self.n_splits}

    def _load_state(self, state: Dict) -> None:
        self.root = _node_from_dict(state["root"], self.n_features, self.n_classes)
        self.n_splits = int(state["n_splits"])
