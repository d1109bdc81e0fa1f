"""
Database Models - SQLite with SQLAlchemy
Modèles du registre des expériences: exécutions, résultats par graine, dérives
"""

import logging
import os
from datetime import datetime
from functools import lru_cache
from typing import Optional

from sqlalchemy import Boolean, Column, DateTime, Float, ForeignKey, Integer, String, Text, create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, declarative_base, relationship, sessionmaker

logger = logging.getLogger(__name__)

# Base de données SQLite par défaut
DATABASE_URL = os.getenv("OBAL_DATABASE_URL", "sqlite:///obal_runs.db")

Base = declarative_base()


class ExperimentRun(Base):
    """
    Une exécution d'expérience (une configuration, plusieurs graines)
    """
    __tablename__ = "experiment_runs"

    id = Column(Integer, primary_key=True, index=True)
    dataset = Column(String(50), nullable=False, index=True)
    variant = Column(String(10), nullable=False, index=True)
    window_size = Column(Integer, nullable=False)
    max_iterations = Column(Integer, nullable=False)
    pool_size = Column(Integer, nullable=False)
    n_sources = Column(Integer, nullable=False)
    base_learner = Column(String(30), nullable=False)
    mean_accuracy = Column(Float, nullable=True)
    std_over_seeds = Column(Float, nullable=True)
    wall_clock = Column(Float, default=0.0)
    config_json = Column(Text, nullable=True)
    created_at = Column(DateTime, default=datetime.utcnow, index=True)

    # Relations
    seed_results = relationship("SeedResultRecord", back_populates="run", cascade="all, delete-orphan")
    drift_events = relationship("DriftEventRecord", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<ExperimentRun(dataset='{self.dataset}', variant='{self.variant}', mean={self.mean_accuracy})>"


class SeedResultRecord(Base):
    """
    Résultat d'une graine
    """
    __tablename__ = "seed_results"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("experiment_runs.id"), nullable=False)
    seed = Column(Integer, nullable=False)
    accuracy = Column(Float, nullable=True)
    accuracy_excluding_stale = Column(Float, nullable=True)
    n_predictions = Column(Integer, default=0)
    n_stale = Column(Integer, default=0)
    reinits = Column(Integer, default=0)
    pool_evictions = Column(Integer, default=0)
    wall_clock = Column(Float, default=0.0)

    # Relations
    run = relationship("ExperimentRun", back_populates="seed_results")

    def __repr__(self):
        return f"<SeedResultRecord(seed={self.seed}, accuracy={self.accuracy})>"


class DriftEventRecord(Base):
    """
    Nombre de dérives détectées, par graine et par type (source/cible)
    """
    __tablename__ = "drift_events"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("experiment_runs.id"), nullable=False)
    seed = Column(Integer, nullable=False)
    kind = Column(String(10), nullable=False)  # 'source' ou 'target'
    count = Column(Integer, default=0)
    is_target = Column(Boolean, default=False)

    # Relations
    run = relationship("ExperimentRun", back_populates="drift_events")

    def __repr__(self):
        return f"<DriftEventRecord(seed={self.seed}, kind='{self.kind}', count={self.count})>"


@lru_cache(maxsize=None)
def get_engine(url: Optional[str] = None) -> Engine:
    """Moteur SQLAlchemy (un par URL)"""
    return create_engine(url or DATABASE_URL, echo=False)


def init_database(url: Optional[str] = None) -> Engine:
    """Initialise la base de données et crée les tables"""
    engine = get_engine(url)
    Base.metadata.create_all(bind=engine)
    logger.info(f"✅ Base de données initialisée: {engine.url}")
    return engine


def get_db_session(url: Optional[str] = None) -> Session:
    """Retourne une nouvelle session de base de données"""
    return sessionmaker(autocommit=False, autoflush=False, bind=get_engine(url))()


def get_db(url: Optional[str] = None):
    """Générateur de session de base de données"""
    db = get_db_session(url)
    try:
        yield db
    finally:
        db.close()
