"""
Parameter Sweep
Un paramètre varie, les autres restent fixés; une ligne de tableau par valeur
"""

import logging
import os
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import pandas as pd

from .config import ConfigError, ExperimentConfig
from .experiment import FLOAT_FORMAT, Report, run_experiment

logger = logging.getLogger(__name__)

SWEEP_PARAMETERS = {
    "L_n": "window_size",
    "I_max": "max_iterations",
    "P": "pool_size",
    "pool_size": "pool_size",
    "n_sources": "n_sources",
}

SWEEP_COLUMNS = [
    "parameter", "value", "variant", "mean_accuracy", "std_over_seeds",
    "mean_accuracy_excluding_stale", "n_seeds", "max_pool_size", "source_drifts", "target_drifts",
]


def resolve_parameter(parameter: str) -> str:
    for name, field_name in SWEEP_PARAMETERS.items():
        if parameter.lower() in (name.lower(), field_name):
            return field_name
    raise ConfigError(f"Paramètre de balayage inconnu: {parameter} (attendu: L_n, I_max, P, n_sources)")


@dataclass
class SweepTable:
    parameter: str
    rows: List[Tuple[int, Report]]

    def to_frame(self) -> pd.DataFrame:
        records = []
        for value, report in self.rows:
            records.append({
                "parameter": self.parameter,
                "value": value,
                "variant": report.variant,
                "mean_accuracy": report.mean,
                "std_over_seeds": report.std,
                "mean_accuracy_excluding_stale": report.mean_excluding_stale,
                "n_seeds": len(report.results),
                "max_pool_size": max(r.max_pool_size for r in report.results),
                "source_drifts": sum(r.source_drifts for r in report.results),
                "target_drifts": sum(r.target_drifts for r in report.results),
            })
        return pd.DataFrame(records, columns=SWEEP_COLUMNS)

    def write_csv(self, path: str) -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"✅ Tableau de balayage écrit: {path}")
        return path


def parameter_sweep(base_config: ExperimentConfig, parameter: str, values: Sequence[int]) -> SweepTable:
    """
    Exécute une expérience par valeur du paramètre

    Args:
        base_config: configuration commune
        parameter: L_n, I_max, P (|P|) ou n_sources
        values: valeurs à tester (non vide)
    """
    field_name = resolve_parameter(parameter)
    if not values:
        raise ConfigError("Au moins une valeur de balayage est requise.")
    rows = []
    for value in values:
        config = replace(base_config, report=None, events=None, **{field_name: int(value)})
        logger.info(f"Balayage {parameter}={value}")
        rows.append((int(value), run_experiment(config)))
    return SweepTable(parameter, rows)
