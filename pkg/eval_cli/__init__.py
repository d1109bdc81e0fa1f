"""
Eval CLI Module
Expériences, métriques préquentielles, balayages et interface en ligne de commande
"""

from .config import (
    ConfigError,
    DatasetDefaults,
    DATASET_DEFAULTS,
    FALLBACK_DEFAULTS,
    VARIANTS,
    DEFAULT_SEEDS,
    ExperimentConfig,
    parse_bool,
    parse_int_list,
    load_config_file,
    build_config
)

from .metrics import (
    EvaluationError,
    TrajectoryPoint,
    prequential_accuracy,
    accuracy_trajectory,
    trajectory_mean,
    mean_std
)

from .experiment import (
    REPORT_COLUMNS,
    SeedResult,
    Report,
    build_scenario,
    score_run,
    run_single,
    run_experiment
)

from .sweep import (
    SWEEP_PARAMETERS,
    SweepTable,
    parameter_sweep
)

__all__ = [
    "ConfigError",
    "DatasetDefaults",
    "DATASET_DEFAULTS",
    "FALLBACK_DEFAULTS",
    "VARIANTS",
    "DEFAULT_SEEDS",
    "ExperimentConfig",
    "parse_bool",
    "parse_int_list",
    "load_config_file",
    "build_config",
    "EvaluationError",
    "TrajectoryPoint",
    "prequential_accuracy",
    "accuracy_trajectory",
    "trajectory_mean",
    "mean_std",
    "REPORT_COLUMNS",
    "SeedResult",
    "Report",
    "build_scenario",
    "score_run",
    "run_single",
    "run_experiment",
    "SWEEP_PARAMETERS",
    "SweepTable",
    "parameter_sweep"
]
