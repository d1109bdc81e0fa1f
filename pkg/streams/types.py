"""
Stream Types
Instances, lots archivés et scénarios multi-flux
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence

import numpy as np


class StreamError(Exception):
    """Exception de base du module streams"""
    pass


class StreamParseError(StreamError):
    """Erreur de lecture d'un fichier CSV (ligne et colonne en base 1)"""

    def __init__(self, message: str, row: int, column: Optional[int] = None):
        super().__init__(message)
        self.row = row
        self.column = column


class ScenarioError(StreamError):
    """Erreur de configuration ou de construction de scénario"""
    pass


def _as_features(values) -> np.ndarray:
    features = np.array(values, dtype=float).reshape(-1)
    if features.size == 0:
        raise StreamError("Une instance doit avoir au moins une caractéristique.")
    if not np.all(np.isfinite(features)):
        raise StreamError("Les caractéristiques doivent être finies.")
    features.setflags(write=False)
    return features


@dataclass(frozen=True, eq=False)
class Instance:
    """Une observation d'un flux: x_t, y_t (optionnel) et t"""
    features: np.ndarray
    label: Optional[int] = None
    timestamp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "features", _as_features(self.features))
        if self.label is not None:
            object.__setattr__(self, "label", int(self.label))

    @property
    def dimension(self) -> int:
        return int(self.features.shape[0])

    @property
    def is_labeled(self) -> bool:
        return self.label is not None


@dataclass(frozen=True, eq=False)
class InstanceStream:
    """
    Séquence ordonnée d'instances stockée en colonnes
    X: (n, d), y: (n,) ou None, timestamps: (n,) strictement croissants
    """
    X: np.ndarray
    y: Optional[np.ndarray]
    timestamps: np.ndarray
    n_classes: int

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim != 2:
            raise StreamError("X doit être une matrice (n, d).")
        if not np.all(np.isfinite(X)):
            raise StreamError("Les caractéristiques doivent être finies.")
        timestamps = np.array(self.timestamps, dtype=np.int64).reshape(-1)
        if timestamps.shape[0] != X.shape[0]:
            raise StreamError("Un timestamp par ligne est requis.")
        if timestamps.size > 1 and np.any(np.diff(timestamps) <= 0):
            raise StreamError("Les timestamps doivent être strictement croissants.")
        y = None
        if self.y is not None:
            y = np.array(self.y, dtype=np.int64).reshape(-1)
            if y.shape[0] != X.shape[0]:
                raise StreamError("Une étiquette par ligne est requise.")
            if y.size and (y.min() < 0 or y.max() >= self.n_classes):
                raise StreamError(f"Étiquettes hors de {{0..{self.n_classes - 1}}}.")
            y.setflags(write=False)
        X.setflags(write=False)
        timestamps.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "timestamps", timestamps)

    @classmethod
    def from_arrays(cls, X, y=None, n_classes: Optional[int] = None, timestamps=None) -> "InstanceStream":
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if timestamps is None:
            timestamps = np.arange(X.shape[0])
        if n_classes is None:
            n_classes = int(np.max(y)) + 1 if y is not None and len(y) else 2
        return cls(X, y, timestamps, n_classes)

    @classmethod
    def from_instances(cls, instances: Sequence[Instance], n_classes: int) -> "InstanceStream":
        if not instances:
            raise StreamError("Séquence d'instances vide.")
        X = np.vstack([inst.features for inst in instances])
        labels = [inst.label for inst in instances]
        if all(label is None for label in labels):
            y = None
        elif any(label is None for label in labels):
            raise StreamError("Un flux est soit entièrement étiqueté, soit pas du tout.")
        else:
            y = np.array(labels)
        return cls(X, y, [inst.timestamp for inst in instances], n_classes)

    def __len__(self) -> int:
        return int(self.X.shape[0])

    def __getitem__(self, index: int) -> Instance:
        label = None if self.y is None else int(self.y[index])
        return Instance(self.X[index], label, int(self.timestamps[index]))

    def __iter__(self) -> Iterator[Instance]:
        for index in range(len(self)):
            yield self[index]

    @property
    def dimension(self) -> int:
        return int(self.X.shape[1])

    @property
    def is_labeled(self) -> bool:
        return self.y is not None

    def slice(self, start: int, stop: Optional[int] = None) -> "InstanceStream":
        y = None if self.y is None else self.y[start:stop]
        return InstanceStream(self.X[start:stop], y, self.timestamps[start:stop], self.n_classes)

    def take(self, indices) -> "InstanceStream":
        indices = np.asarray(indices, dtype=np.int64)
        y = None if self.y is None else self.y[indices]
        return InstanceStream(self.X[indices], y, self.timestamps[indices], self.n_classes)

    def without_labels(self) -> "InstanceStream":
        return InstanceStream(self.X, None, self.timestamps, self.n_classes)

    def batch(self, start: int, length: int) -> "DataBatch":
        """Lot archivé D de `length` lignes à partir de `start`"""
        part = self.slice(start, start + length)
        return DataBatch(part.X, part.y, part.timestamps, part.n_classes)


@dataclass(frozen=True, eq=False)
class DataBatch:
    """Lot archivé D_Si / D_T de L_n lignes (L_n >= 2)"""
    X: np.ndarray
    y: Optional[np.ndarray] = None
    timestamps: Optional[np.ndarray] = None
    n_classes: int = 2

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise StreamError("Un lot doit être une matrice (L_n, d).")
        if X.shape[0] < 2:
            raise StreamError("Un lot doit contenir au moins 2 lignes.")
        if not np.all(np.isfinite(X)):
            raise StreamError("Les caractéristiques doivent être finies.")
        timestamps = np.arange(X.shape[0]) if self.timestamps is None else np.array(self.timestamps, dtype=np.int64)
        if timestamps.shape[0] != X.shape[0]:
            raise StreamError("Un timestamp par ligne est requis.")
        if np.any(np.diff(timestamps) <= 0):
            raise StreamError("L'ordre du lot doit préserver les timestamps.")
        y = None
        if self.y is not None:
            y = np.array(self.y, dtype=np.int64).reshape(-1)
            if y.shape[0] != X.shape[0]:
                raise StreamError("Une étiquette par ligne est requise.")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "timestamps", timestamps)

    @classmethod
    def from_instances(cls, instances: Sequence[Instance], n_classes: int = 2) -> "DataBatch":
        stream = InstanceStream.from_instances(instances, n_classes)
        return cls(stream.X, stream.y, stream.timestamps, n_classes)

    def __len__(self) -> int:
        return int(self.X.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.X.shape[1])

    @property
    def is_labeled(self) -> bool:
        return self.y is not None

    def with_features(self, X: np.ndarray) -> "DataBatch":
        """Même lot (étiquettes et timestamps conservés) avec de nouvelles caractéristiques"""
        return DataBatch(X, self.y, self.timestamps, self.n_classes)


@dataclass
class ScenarioConfig:
    """Configuration d'un scénario synthétique multi-flux"""
    kind: str = "SEA"
    n_sources: int = 3
    samples_per_stream: int = 25000
    change_points: Optional[List[int]] = None
    drift_style: str = "abrupt"
    drift_width: int = 1000
    noise: Optional[float] = None
    n_features: Optional[int] = None
    n_classes: int = 2
    sizes: Optional[List[int]] = None
    seed: int = 0
    params: dict = field(default_factory=dict)

    @property
    def total_length(self) -> int:
        return self.samples_per_stream * (self.n_sources + 1)

    def validate(self) -> None:
        if self.n_sources < 1:
            raise ScenarioError("n_sources doit être >= 1.")
        if self.samples_per_stream < 2:
            raise ScenarioError("samples_per_stream doit être >= 2.")
        if self.drift_style not in ("abrupt", "gradual"):
            raise ScenarioError(f"Style de dérive inconnu: {self.drift_style}")
        points = list(self.change_points or [])
        if any(b <= a for a, b in zip(points, points[1:])):
            raise ScenarioError("Les points de changement doivent être strictement croissants.")
        if points and (points[0] <= 0 or points[-1] >= self.total_length):
            raise ScenarioError(
                f"Point de changement hors du flux (longueur {self.total_length})."
            )
        if self.noise is not None and not 0.0 <= self.noise < 1.0:
            raise ScenarioError("noise doit être dans [0, 1).")


@dataclass(frozen=True, eq=False)
class Multistream:
    """
    N flux sources étiquetés et un flux cible non étiqueté
    Les étiquettes cibles sont réservées à l'évaluation.
    """
    sources: List[InstanceStream]
    target: InstanceStream
    held_out_labels: np.ndarray

    def __post_init__(self):
        if not self.sources:
            raise ScenarioError("Au moins un flux source est requis.")
        if self.target.is_labeled:
            raise ScenarioError("Le flux cible ne doit pas porter d'étiquettes.")
        if any(not source.is_labeled for source in self.sources):
            raise ScenarioError("Les flux sources doivent être étiquetés.")
        dims = {source.dimension for source in self.sources} | {self.target.dimension}
        if len(dims) != 1:
            raise ScenarioError("Tous les flux doivent partager la même dimension.")
        if len(self.held_out_labels) != len(self.target):
            raise ScenarioError("Une étiquette réservée par instance cible est requise.")

    @property
    def n_sources(self) -> int:
        return len(self.sources)

    @property
    def dimension(self) -> int:
        return self.target.dimension

    @property
    def n_classes(self) -> int:
        return self.target.n_classes
