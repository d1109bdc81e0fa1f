"""
Command Line Interface
Sous-commandes run, sweep, generate et inspect
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import pandas as pd
from dotenv import load_dotenv

from adacosa import AdaCosaError
from drift import DetectorError
from gmm import GmmError
from learners import BASE_LEARNERS, LearnerError
from linalg_align import AlignmentError
from obal_engine import EngineError, summarize_event_log
from streams import StreamError

from .config import VARIANTS, ConfigError, ExperimentConfig, build_config
from .experiment import build_scenario, run_experiment
from .sweep import SWEEP_PARAMETERS, parameter_sweep

logger = logging.getLogger(__name__)

HANDLED_ERRORS = (ConfigError, StreamError, AlignmentError, LearnerError, GmmError, DetectorError,
                  AdaCosaError, EngineError)

# option -> champ d'ExperimentConfig
_FLAG_FIELDS = {
    "dataset": "dataset", "csv": "csv_path", "schema": "schema", "n_sources": "n_sources",
    "samples_per_stream": "samples_per_stream", "sizes": "sizes", "change_points": "change_points",
    "drift_style": "drift_style", "drift_width": "drift_width", "noise": "noise",
    "n_features": "n_features", "window_size": "window_size", "max_iterations": "max_iterations",
    "pool_size": "pool_size", "n_components": "n_components", "z_alpha": "z_alpha",
    "eq11_literal": "eq11_literal", "target_patience": "target_patience", "pooled_sigma": "pooled_sigma",
    "base_learner": "base_learner", "variant": "variant",
    "seed": "seeds", "events": "events", "log_predictions": "log_predictions",
    "trajectory_window": "trajectory_window",
}


def output_dir() -> str:
    return os.getenv("OBAL_OUTPUT_DIR", "outputs")


def _add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    scenario = parser.add_argument_group("scénario")
    scenario.add_argument("--config", help="fichier clé-valeur (prioritaire sur les options)")
    scenario.add_argument("--dataset", help="SEA, TREE, RBF, HYPERPLANE ou nom d'un jeu CSV")
    scenario.add_argument("--csv", help="fichier CSV du flux réel")
    scenario.add_argument("--schema", help="schéma du fichier CSV")
    scenario.add_argument("--n-sources", type=int)
    scenario.add_argument("--samples-per-stream", type=int)
    scenario.add_argument("--sizes", type=int, nargs="+")
    scenario.add_argument("--change-points", type=int, nargs="+")
    scenario.add_argument("--drift-style", choices=["abrupt", "gradual"])
    scenario.add_argument("--drift-width", type=int)
    scenario.add_argument("--noise", type=float)
    scenario.add_argument("--n-features", type=int)

    engine = parser.add_argument_group("moteur")
    engine.add_argument("--window-size", "--L-n", dest="window_size", type=int, help="L_n")
    engine.add_argument("--max-iterations", "--I-max", dest="max_iterations", type=int, help="I_max")
    engine.add_argument("--pool-size", type=int, help="|P|")
    engine.add_argument("--n-components", type=int, help="K (sélection BIC si absent)")
    engine.add_argument("--z-alpha", type=float)
    engine.add_argument("--eq11-literal", action="store_true", default=None,
                        help="test unilatéral μ_det − μ_ref")
    engine.add_argument("--target-patience", type=int,
                        help="tests positifs consécutifs avant dérive cible (défaut L_n // 2)")
    engine.add_argument("--reference-sigma", dest="pooled_sigma", action="store_false", default=None,
                        help="σ = écart-type de W_ref seul")
    engine.add_argument("--base-learner", choices=sorted(BASE_LEARNERS))
    engine.add_argument("--variant", choices=list(VARIANTS))
    engine.add_argument("--events", help="journal d'événements NDJSON")
    engine.add_argument("--log-predictions", action="store_true", default=None)
    engine.add_argument("--trajectory-window", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="obal", description="Classification en ligne multi-flux (OBAL)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="exécute une expérience et écrit le rapport CSV")
    _add_experiment_arguments(run)
    run.add_argument("--seed", type=int, nargs="+", required=True)
    run.add_argument("--out", required=True, help="chemin du rapport CSV")
    run.add_argument("--db", help="URL SQLAlchemy du registre des expériences")

    sweep = subparsers.add_parser("sweep", help="balayage d'un paramètre")
    _add_experiment_arguments(sweep)
    sweep.add_argument("--seed", type=int, nargs="+")
    sweep.add_argument("--parameter", required=True, choices=sorted(SWEEP_PARAMETERS))
    sweep.add_argument("--values", type=int, nargs="+", required=True)
    sweep.add_argument("--out", help="chemin du tableau CSV")

    generate = subparsers.add_parser("generate", help="écrit un scénario sur disque")
    _add_experiment_arguments(generate)
    generate.add_argument("--seed", type=int, nargs="+")
    generate.add_argument("--out-dir", help="répertoire de sortie")

    inspect = subparsers.add_parser("inspect", help="résume un journal d'événements ou le registre")
    target = inspect.add_mutually_exclusive_group(required=True)
    target.add_argument("--events", help="journal NDJSON")
    target.add_argument("--runs", action="store_true", help="liste les exécutions enregistrées")
    inspect.add_argument("--run-id", type=int, help="détail d'une exécution")
    inspect.add_argument("--db", help="URL SQLAlchemy du registre")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    flag_values: Dict[str, Any] = {}
    for flag, field_name in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            flag_values[field_name] = list(value) if isinstance(value, list) else value
    return build_config(flag_values, getattr(args, "config", None))


# ==================== COMMANDES ====================

def command_run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    config.report = args.out
    report = run_experiment(config)
    if args.db:
        from database import get_db_session, init_database, save_report
        init_database(args.db)
        db = get_db_session(args.db)
        try:
            run = save_report(db, report)
            logger.info(f"✅ Exécution enregistrée (id={run.id})")
        finally:
            db.close()
    print(f"{report.config.dataset} {report.variant}: {report.mean:.2f} ± {report.std:.2f}")
    return 0


def command_sweep(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    table = parameter_sweep(config, args.parameter, args.values)
    path = args.out or os.path.join(output_dir(), f"sweep_{config.dataset.lower()}_{args.parameter}.csv")
    table.write_csv(path)
    print(table.to_frame().to_string(index=False))
    return 0


def write_scenario(config: ExperimentConfig, seed: int, directory: str) -> List[str]:
    """
    Écrit source_<i>.csv, target.csv (sans étiquette) et target_labels.csv

    Returns:
        Chemins écrits
    """
    scenario = build_scenario(config.resolved(), seed)
    os.makedirs(directory, exist_ok=True)
    columns = [f"x{j}" for j in range(scenario.dimension)]
    paths = []
    for i, source in enumerate(scenario.sources):
        frame = pd.DataFrame(source.X, columns=columns)
        frame["label"] = source.y
        paths.append(os.path.join(directory, f"source_{i}.csv"))
        frame.to_csv(paths[-1], index=False, lineterminator="\n")
    paths.append(os.path.join(directory, "target.csv"))
    pd.DataFrame(scenario.target.X, columns=columns).to_csv(paths[-1], index=False, lineterminator="\n")
    paths.append(os.path.join(directory, "target_labels.csv"))
    pd.DataFrame({"label": scenario.held_out_labels}).to_csv(paths[-1], index=False, lineterminator="\n")
    logger.info(f"✅ Scénario écrit dans {directory} ({scenario.n_sources} sources)")
    return paths


def command_generate(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    directory = args.out_dir or os.path.join(output_dir(), f"scenario_{config.dataset.lower()}")
    for path in write_scenario(config, config.seeds[0], directory):
        print(path)
    return 0


def command_inspect(args: argparse.Namespace) -> int:
    if args.events:
        if not os.path.exists(args.events):
            raise ConfigError(f"Journal introuvable: {args.events}")
        print(json.dumps(summarize_event_log(args.events), indent=2, sort_keys=True))
        return 0
    from database import get_db_session, get_run_summary, get_runs, init_database
    init_database(args.db)
    db = get_db_session(args.db)
    try:
        if args.run_id is not None:
            summary = get_run_summary(db, args.run_id)
            if not summary:
                raise ConfigError(f"Exécution inconnue: {args.run_id}")
            print(json.dumps(summary, indent=2, sort_keys=True, default=str))
            return 0
        for run in get_runs(db):
            mean = "nan" if run.mean_accuracy is None else f"{run.mean_accuracy:.2f}"
            std = "nan" if run.std_over_seeds is None else f"{run.std_over_seeds:.2f}"
            print(f"{run.id}\t{run.dataset}\t{run.variant}\t{mean} ± {std}\t{run.created_at:%Y-%m-%d %H:%M}")
    finally:
        db.close()
    return 0


COMMANDS = {
    "run": command_run,
    "sweep": command_sweep,
    "generate": command_generate,
    "inspect": command_inspect,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Point d'entrée principal"""
    load_dotenv()
    logging.basicConfig(
        level=os.getenv("OBAL_LOG_LEVEL", "INFO").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except HANDLED_ERRORS as e:
        logger.error(f"❌ {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
