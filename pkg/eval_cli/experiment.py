"""
Experiment Runner
Exécution d'OBAL (ou d'une variante) sur un scénario pour chaque graine,
notation préquentielle et rapports CSV
"""

import logging
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from obal_engine import EventLog, RunResult, run_obal
from streams import Multistream, load_csv_schema, load_csv_stream, scenario_from_dataset, synthetic_scenario

from .config import ExperimentConfig
from .metrics import TrajectoryPoint, accuracy_trajectory, mean_std, prequential_accuracy

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "variant", "seed", "accuracy", "std_over_seeds", "accuracy_excluding_stale", "n_predictions",
    "n_stale", "source_drifts", "target_drifts", "reinits", "pool_evictions",
]
FLOAT_FORMAT = "%.4f"


@dataclass
class SeedResult:
    """Résultat d'une exécution (une graine)"""
    seed: int
    accuracy: float
    accuracy_excluding_stale: float
    n_predictions: int
    n_stale: int
    source_drifts: int
    target_drifts: int
    reinits: int
    pool_evictions: int
    max_pool_size: int
    trajectory: List[TrajectoryPoint] = field(default_factory=list)
    wall_clock: float = 0.0


@dataclass
class Report:
    """Exactitudes par graine, moyenne ± écart-type sur les graines, trajectoires"""
    config: ExperimentConfig
    results: List[SeedResult]
    wall_clock: float = 0.0

    @property
    def variant(self) -> str:
        return self.config.variant

    @property
    def accuracies(self) -> List[float]:
        return [r.accuracy for r in self.results]

    @property
    def mean(self) -> float:
        return mean_std(self.accuracies)[0]

    @property
    def std(self) -> float:
        return mean_std(self.accuracies)[1]

    @property
    def mean_excluding_stale(self) -> float:
        return mean_std([r.accuracy_excluding_stale for r in self.results])[0]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for r in self.results:
            rows.append({
                "variant": self.variant, "seed": str(r.seed), "accuracy": r.accuracy,
                "std_over_seeds": np.nan, "accuracy_excluding_stale": r.accuracy_excluding_stale,
                "n_predictions": r.n_predictions, "n_stale": r.n_stale,
                "source_drifts": r.source_drifts, "target_drifts": r.target_drifts,
                "reinits": r.reinits, "pool_evictions": r.pool_evictions,
            })
        rows.append({
            "variant": self.variant, "seed": "summary", "accuracy": self.mean,
            "std_over_seeds": self.std, "accuracy_excluding_stale": self.mean_excluding_stale,
            "n_predictions": sum(r.n_predictions for r in self.results),
            "n_stale": sum(r.n_stale for r in self.results),
            "source_drifts": sum(r.source_drifts for r in self.results),
            "target_drifts": sum(r.target_drifts for r in self.results),
            "reinits": sum(r.reinits for r in self.results),
            "pool_evictions": sum(r.pool_evictions for r in self.results),
        })
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)

    def trajectory_frame(self) -> pd.DataFrame:
        rows = [
            {"seed": r.seed, "window": p.window, "accuracy": p.accuracy, "n": p.n}
            for r in self.results for p in r.trajectory
        ]
        return pd.DataFrame(rows, columns=["seed", "window", "accuracy", "n"])

    def write_csv(self, path: str) -> List[str]:
        """Écrit le rapport et `<rapport>_trajectory.csv`; renvoie les chemins"""
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        stem, ext = os.path.splitext(path)
        trajectory_path = f"{stem}_trajectory{ext or '.csv'}"
        self.trajectory_frame().to_csv(trajectory_path, index=False, float_format=FLOAT_FORMAT,
                                       lineterminator="\n")
        logger.info(f"✅ Rapport écrit: {path}")
        return [path, trajectory_path]


def build_scenario(config: ExperimentConfig, seed: int) -> Multistream:
    """Scénario synthétique (graine) ou découpage d'un flux CSV"""
    if config.is_synthetic:
        return synthetic_scenario(config.scenario_config(seed))
    dataset = load_csv_stream(config.csv_path, load_csv_schema(config.schema))
    return scenario_from_dataset(dataset, config.n_sources, config.samples_per_stream, config.sizes)


def events_path_for(path: Optional[str], seed: int, n_seeds: int) -> Optional[str]:
    if not path or n_seeds == 1:
        return path
    stem, ext = os.path.splitext(path)
    return f"{stem}_seed{seed}{ext or '.ndjson'}"


def score_run(run: RunResult, held_out_labels: np.ndarray, window: int = 1000) -> Dict:
    """Notation d'une exécution (les étiquettes du lot d'initialisation sont exclues)"""
    labels = np.asarray(held_out_labels)[run.offset:]
    fresh = ~run.stale
    return {
        "accuracy": prequential_accuracy(run.predictions, labels),
        "accuracy_excluding_stale": prequential_accuracy(run.predictions, labels, fresh),
        "trajectory": accuracy_trajectory(run.predictions, labels, window),
    }


def run_single(config: ExperimentConfig, seed: int) -> SeedResult:
    """Une graine: scénario, exécution en ligne, notation"""
    started = time.perf_counter()
    scenario = build_scenario(config, seed)
    events_path = events_path_for(config.events, seed, len(config.seeds))
    with EventLog(events_path, log_predictions=config.log_predictions, keep_records=False) as events:
        # le moteur ne reçoit que les flux, jamais les étiquettes réservées
        run = run_obal(scenario.sources, scenario.target, config.engine_config(seed), events)
    scores = score_run(run, scenario.held_out_labels, config.trajectory_window)
    result = SeedResult(
        seed=seed,
        accuracy=scores["accuracy"],
        accuracy_excluding_stale=scores["accuracy_excluding_stale"],
        n_predictions=run.n_predictions,
        n_stale=run.n_stale,
        source_drifts=run.source_drifts,
        target_drifts=run.target_drifts,
        reinits=run.reinits,
        pool_evictions=run.pool_evictions,
        max_pool_size=run.max_pool_size,
        trajectory=scores["trajectory"],
        wall_clock=time.perf_counter() - started,
    )
    logger.info(f"Graine {seed} ({config.variant}): exactitude {result.accuracy:.2f}%")
    return result


def run_experiment(config: ExperimentConfig) -> Report:
    """
    Exécute la configuration pour chaque graine

    Returns:
        Report (et écrit le CSV si `config.report` est défini)
    """
    config.validate()
    config = config.resolved()
    started = time.perf_counter()
    results = [run_single(config, seed) for seed in config.seeds]
    report = Report(config, results, time.perf_counter() - started)
    logger.info(
        f"✅ {config.dataset} / {config.variant}: {report.mean:.2f} ± {report.std:.2f} "
        f"sur {len(results)} graine(s)"
    )
    if config.report:
        report.write_csv(config.report)
    return report
