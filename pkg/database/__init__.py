"""
Database Module
Registre SQLite des expériences
"""

from .models import (
    ExperimentRun,
    SeedResultRecord,
    DriftEventRecord,
    DATABASE_URL,
    get_engine,
    init_database,
    get_db,
    get_db_session,
    Base
)

from .crud import (
    # Run operations
    save_report,
    get_runs,
    get_run_by_id,

    # Analytics
    get_drift_statistics,
    get_run_summary
)

__all__ = [
    # Models
    "ExperimentRun",
    "SeedResultRecord",
    "DriftEventRecord",
    "DATABASE_URL",
    "get_engine",
    "init_database",
    "get_db",
    "get_db_session",
    "Base",

    # CRUD
    "save_report",
    "get_runs",
    "get_run_by_id",
    "get_drift_statistics",
    "get_run_summary"
]
