"""
Experiment Configuration
Configuration d'expérience, défauts par jeu de données et fichiers de configuration
"""

import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Mapping, Optional

from dotenv import dotenv_values

from gmm import EmConfig
from obal_engine import EngineConfig
from streams import GENERATOR_DEFAULTS, ScenarioConfig, resolve_samples_per_stream

logger = logging.getLogger(__name__)


class ConfigError(Exception):
    """Configuration d'expérience invalide"""
    pass


@dataclass(frozen=True)
class DatasetDefaults:
    """L_n, I_max et |P| par jeu de données"""
    window_size: int
    max_iterations: int
    pool_size: int


DATASET_DEFAULTS: Dict[str, DatasetDefaults] = {
    "SEA": DatasetDefaults(200, 3, 5),
    "TREE": DatasetDefaults(200, 3, 5),
    "RBF": DatasetDefaults(300, 4, 10),
    "HYPERPLANE": DatasetDefaults(400, 3, 5),
    "WEATHER": DatasetDefaults(100, 4, 5),
    "KITTI": DatasetDefaults(100, 5, 2),
    "CNNIBN": DatasetDefaults(200, 3, 5),
    "BBC": DatasetDefaults(300, 3, 10),
}

FALLBACK_DEFAULTS = DatasetDefaults(200, 3, 5)

# variante -> (gestion des dérives, alignement, repondération)
VARIANTS: Dict[str, Dict[str, bool]] = {
    "v1": {"drift_handling": False, "align": False, "reweight": False},
    "v2": {"drift_handling": True, "align": False, "reweight": False},
    "v3": {"drift_handling": True, "align": True, "reweight": False},
    "full": {"drift_handling": True, "align": True, "reweight": True},
}

DEFAULT_SEEDS = list(range(10))


@dataclass
class ExperimentConfig:
    """
    Scénario, paramètres du moteur, variante, graines et chemins de sortie

    Les paramètres à None prennent les valeurs par défaut du jeu de données.
    """
    dataset: str = "SEA"
    csv_path: Optional[str] = None
    schema: Optional[str] = None
    n_sources: int = 3
    samples_per_stream: Optional[int] = None
    sizes: Optional[List[int]] = None
    change_points: Optional[List[int]] = None
    drift_style: str = "abrupt"
    drift_width: int = 1000
    noise: Optional[float] = None
    n_features: Optional[int] = None
    window_size: Optional[int] = None
    max_iterations: Optional[int] = None
    pool_size: Optional[int] = None
    n_components: Optional[int] = None
    z_alpha: float = 3.0
    eq11_literal: bool = False
    target_patience: Optional[int] = None
    pooled_sigma: bool = True
    base_learner: str = "hoeffding_tree"
    variant: str = "full"
    seeds: List[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    report: Optional[str] = None
    events: Optional[str] = None
    log_predictions: bool = False
    trajectory_window: int = 1000

    @property
    def is_synthetic(self) -> bool:
        return self.csv_path is None

    @property
    def defaults(self) -> DatasetDefaults:
        return DATASET_DEFAULTS.get(self.dataset.upper(), FALLBACK_DEFAULTS)

    def resolved(self) -> "ExperimentConfig":
        """Copie avec les valeurs par défaut du jeu de données appliquées"""
        defaults = self.defaults
        return replace(
            self,
            dataset=self.dataset.upper(),
            window_size=self.window_size or defaults.window_size,
            max_iterations=self.max_iterations or defaults.max_iterations,
            pool_size=self.pool_size or defaults.pool_size,
            seeds=list(self.seeds),
        )

    def validate(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigError(f"Variante inconnue: {self.variant} (attendu: {', '.join(VARIANTS)})")
        if not self.seeds:
            raise ConfigError("Au moins une graine est requise.")
        if self.n_sources < 1:
            raise ConfigError("n_sources doit être >= 1.")
        if self.is_synthetic and self.dataset.upper() not in GENERATOR_DEFAULTS:
            raise ConfigError(
                f"Jeu de données '{self.dataset}' sans générateur: fournir CSV_PATH et SCHEMA."
            )
        if not self.is_synthetic and not self.schema:
            raise ConfigError("Un schéma CSV est requis avec CSV_PATH.")
        if self.drift_style not in ("abrupt", "gradual"):
            raise ConfigError(f"Style de dérive inconnu: {self.drift_style}")
        if self.trajectory_window < 1:
            raise ConfigError("trajectory_window doit être >= 1.")
        resolved = self.resolved()
        if resolved.window_size < 2 or resolved.max_iterations < 1 or resolved.pool_size < 1:
            raise ConfigError("L_n >= 2, I_max >= 1 et |P| >= 1 sont requis.")
        if VARIANTS[self.variant]["reweight"] and resolved.window_size <= resolved.max_iterations:
            raise ConfigError("L_n doit être strictement supérieur à I_max.")

    def engine_config(self, seed: int) -> EngineConfig:
        resolved = self.resolved()
        return EngineConfig(
            window_size=resolved.window_size,
            max_iterations=resolved.max_iterations,
            pool_size=resolved.pool_size,
            n_components=self.n_components,
            em=EmConfig(seed=seed),
            z_alpha=self.z_alpha,
            eq11_literal=self.eq11_literal,
            target_patience=self.target_patience,
            pooled_sigma=self.pooled_sigma,
            base_learner=self.base_learner,
            seed=seed,
            **VARIANTS[self.variant],
        )

    def scenario_config(self, seed: int) -> ScenarioConfig:
        kind = self.dataset.upper()
        return ScenarioConfig(
            kind=kind,
            n_sources=self.n_sources,
            samples_per_stream=resolve_samples_per_stream(kind, self.samples_per_stream),
            change_points=self.change_points,
            drift_style=self.drift_style,
            drift_width=self.drift_width,
            noise=self.noise,
            n_features=self.n_features,
            sizes=self.sizes,
            seed=seed,
        )


# ==================== FICHIERS DE CONFIGURATION ====================

_INT_KEYS = {"N_SOURCES", "SAMPLES_PER_STREAM", "DRIFT_WIDTH", "N_FEATURES", "L_N", "I_MAX",
             "POOL_SIZE", "N_COMPONENTS", "TRAJECTORY_WINDOW", "TARGET_PATIENCE"}
_FLOAT_KEYS = {"NOISE", "Z_ALPHA"}
_BOOL_KEYS = {"EQ11_LITERAL", "POOLED_SIGMA", "LOG_PREDICTIONS"}
_LIST_KEYS = {"SIZES", "CHANGE_POINTS", "SEEDS"}

KEY_TO_FIELD = {
    "DATASET": "dataset",
    "GENERATOR": "dataset",
    "CSV_PATH": "csv_path",
    "SCHEMA": "schema",
    "N_SOURCES": "n_sources",
    "SAMPLES_PER_STREAM": "samples_per_stream",
    "SIZES": "sizes",
    "CHANGE_POINTS": "change_points",
    "DRIFT_STYLE": "drift_style",
    "DRIFT_WIDTH": "drift_width",
    "NOISE": "noise",
    "N_FEATURES": "n_features",
    "L_N": "window_size",
    "I_MAX": "max_iterations",
    "POOL_SIZE": "pool_size",
    "N_COMPONENTS": "n_components",
    "Z_ALPHA": "z_alpha",
    "EQ11_LITERAL": "eq11_literal",
    "TARGET_PATIENCE": "target_patience",
    "POOLED_SIGMA": "pooled_sigma",
    "BASE_LEARNER": "base_learner",
    "VARIANT": "variant",
    "SEEDS": "seeds",
    "REPORT": "report",
    "EVENTS": "events",
    "LOG_PREDICTIONS": "log_predictions",
    "TRAJECTORY_WINDOW": "trajectory_window",
}


def parse_bool(value: str) -> bool:
    return str(value).strip().lower() in ("1", "true", "yes", "oui", "on")


def parse_int_list(value: str) -> List[int]:
    """'0,1,2' ou '0-9' (intervalle inclusif)"""
    value = value.strip()
    if "-" in value and "," not in value and not value.startswith("-"):
        start, _, stop = value.partition("-")
        return list(range(int(start), int(stop) + 1))
    return [int(token) for token in value.replace(" ", ",").split(",") if token.strip()]


def _parse_value(key: str, raw: str) -> Any:
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            return parse_bool(raw)
        if key in _LIST_KEYS:
            return parse_int_list(raw)
    except ValueError:
        raise ConfigError(f"Valeur invalide pour {key}: '{raw}'")
    return raw.strip()


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Lit un fichier de configuration clé-valeur (syntaxe dotenv)

    Returns:
        Dictionnaire champ -> valeur, chemins relatifs résolus par rapport au fichier
    """
    if not os.path.exists(path):
        raise ConfigError(f"Fichier de configuration introuvable: {path}")
    base_dir = os.path.dirname(os.path.abspath(path))
    overrides: Dict[str, Any] = {}
    for key, raw in dotenv_values(path).items():
        key = key.upper()
        if key not in KEY_TO_FIELD:
            raise ConfigError(f"Clé de configuration inconnue: {key}")
        if raw is None or raw.strip() == "":
            continue
        value = _parse_value(key, raw)
        if key in ("CSV_PATH", "SCHEMA") and not os.path.isabs(value):
            value = os.path.join(base_dir, value)
        overrides[KEY_TO_FIELD[key]] = value
    return overrides


def build_config(flag_values: Optional[Mapping[str, Any]] = None, config_path: Optional[str] = None) -> ExperimentConfig:
    """
    Défauts < options de ligne de commande < fichier de configuration

    Args:
        flag_values: champs d'ExperimentConfig fournis en ligne de commande (None ignorés)
        config_path: fichier clé-valeur optionnel
    """
    known = {f.name for f in fields(ExperimentConfig)}
    values: Dict[str, Any] = {}
    for name, value in (flag_values or {}).items():
        if name not in known:
            raise ConfigError(f"Paramètre inconnu: {name}")
        if value is not None:
            values[name] = value
    if config_path:
        values.update(load_config_file(config_path))
    config = ExperimentConfig(**values)
    config.validate()
    return config
