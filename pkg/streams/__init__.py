"""
Streams Module
Génération, chargement et découpage des flux de données
"""

from .types import (
    StreamError,
    StreamParseError,
    ScenarioError,
    Instance,
    InstanceStream,
    DataBatch,
    ScenarioConfig,
    Multistream
)

from .generators import (
    GENERATOR_DEFAULTS,
    generate_synthetic,
    resolve_samples_per_stream,
    sea_label,
    hyperplane_label,
    default_change_points
)

from .loader import (
    CsvSchema,
    load_csv_schema,
    load_csv_stream
)

from .scenario import (
    gaussian_log_scores,
    build_multistream_scenario,
    synthetic_scenario,
    scenario_from_dataset
)

__all__ = [
    "StreamError",
    "StreamParseError",
    "ScenarioError",
    "Instance",
    "InstanceStream",
    "DataBatch",
    "ScenarioConfig",
    "Multistream",
    "GENERATOR_DEFAULTS",
    "generate_synthetic",
    "resolve_samples_per_stream",
    "sea_label",
    "hyperplane_label",
    "default_change_points",
    "CsvSchema",
    "load_csv_schema",
    "load_csv_stream",
    "gaussian_log_scores",
    "build_multistream_scenario",
    "synthetic_scenario",
    "scenario_from_dataset"
]
