"""
Database CRUD Operations
Opérations du registre: enregistrement des rapports, listes et statistiques
"""

import json
import math
from typing import Any, Dict, List, Optional

from sqlalchemy import desc, func
from sqlalchemy.orm import Session

from .models import DriftEventRecord, ExperimentRun, SeedResultRecord


def _nullable(value: float) -> Optional[float]:
    return None if value is None or math.isnan(value) else float(value)


# ==================== RUN OPERATIONS ====================

def save_report(db: Session, report) -> ExperimentRun:
    """
    Enregistre un rapport d'expérience (exécution, graines, dérives)

    Args:
        db: session
        report: eval_cli.Report (configuration résolue)
    """
    config = report.config
    run = ExperimentRun(
        dataset=config.dataset,
        variant=config.variant,
        window_size=config.window_size,
        max_iterations=config.max_iterations,
        pool_size=config.pool_size,
        n_sources=config.n_sources,
        base_learner=config.base_learner,
        mean_accuracy=_nullable(report.mean),
        std_over_seeds=_nullable(report.std),
        wall_clock=report.wall_clock,
        config_json=json.dumps({k: v for k, v in vars(config).items()}, sort_keys=True, default=str),
    )
    for result in report.results:
        run.seed_results.append(SeedResultRecord(
            seed=result.seed,
            accuracy=_nullable(result.accuracy),
            accuracy_excluding_stale=_nullable(result.accuracy_excluding_stale),
            n_predictions=result.n_predictions,
            n_stale=result.n_stale,
            reinits=result.reinits,
            pool_evictions=result.pool_evictions,
            wall_clock=result.wall_clock,
        ))
        run.drift_events.append(DriftEventRecord(seed=result.seed, kind="source", count=result.source_drifts))
        run.drift_events.append(DriftEventRecord(seed=result.seed, kind="target", count=result.target_drifts,
                                                 is_target=True))
    db.add(run)
    db.commit()
    db.refresh(run)
    return run


def get_runs(db: Session, dataset: Optional[str] = None, limit: int = 50) -> List[ExperimentRun]:
    """Récupère les dernières exécutions (filtre optionnel par jeu de données)"""
    query = db.query(ExperimentRun)
    if dataset:
        query = query.filter(ExperimentRun.dataset == dataset.upper())
    return query.order_by(desc(ExperimentRun.created_at), desc(ExperimentRun.id)).limit(limit).all()


def get_run_by_id(db: Session, run_id: int) -> Optional[ExperimentRun]:
    return db.query(ExperimentRun).filter(ExperimentRun.id == run_id).first()


# ==================== ANALYTICS ====================

def get_drift_statistics(db: Session, run_id: int) -> Dict[str, Any]:
    """
    Total et moyenne par graine des dérives, par type
    """
    rows = db.query(
        DriftEventRecord.kind,
        func.sum(DriftEventRecord.count).label("total"),
        func.avg(DriftEventRecord.count).label("mean"),
    ).filter(DriftEventRecord.run_id == run_id).group_by(DriftEventRecord.kind).all()
    return {kind: {"total": int(total or 0), "mean_per_seed": float(mean or 0.0)} for kind, total, mean in rows}


def get_run_summary(db: Session, run_id: int) -> Dict[str, Any]:
    """Résumé complet d'une exécution"""
    run = get_run_by_id(db, run_id)
    if run is None:
        return {}
    seeds = db.query(SeedResultRecord).filter(SeedResultRecord.run_id == run_id)\
        .order_by(SeedResultRecord.seed).all()
    return {
        "id": run.id,
        "dataset": run.dataset,
        "variant": run.variant,
        "parameters": {"L_n": run.window_size, "I_max": run.max_iterations, "P": run.pool_size,
                       "n_sources": run.n_sources, "base_learner": run.base_learner},
        "mean_accuracy": run.mean_accuracy,
        "std_over_seeds": run.std_over_seeds,
        "n_seeds": len(seeds),
        "accuracies": {s.seed: s.accuracy for s in seeds},
        "drifts": get_drift_statistics(db, run_id),
        "created_at": run.created_at.isoformat() if run.created_at else None,
    }
