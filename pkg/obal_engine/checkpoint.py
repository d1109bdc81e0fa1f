"""
Engine Checkpoints
Sauvegarde et reprise de l'état complet du moteur (document JSON versionné)
"""

import json
import logging
import os
from typing import Optional

from .engine import ObalEngine
from .events import EventLog
from .pool import EngineError

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "obal-engine"
CHECKPOINT_VERSION = 1


def save_checkpoint(engine: ObalEngine, path: str) -> str:
    """Écrit l'état du moteur dans `path` et renvoie le chemin"""
    document = {"format": CHECKPOINT_FORMAT, "version": CHECKPOINT_VERSION, "engine": engine.to_dict()}
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, sort_keys=True)
    logger.info(f"✅ Checkpoint écrit: {path}")
    return path


def load_checkpoint(path: str, events: Optional[EventLog] = None) -> ObalEngine:
    """Recharge un moteur sauvegardé par save_checkpoint"""
    if not os.path.exists(path):
        raise EngineError(f"Checkpoint introuvable: {path}")
    with open(path, encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as e:
            raise EngineError(f"Checkpoint illisible: {e}")
    if document.get("format") != CHECKPOINT_FORMAT:
        raise EngineError("Document de checkpoint non reconnu.")
    if document.get("version") != CHECKPOINT_VERSION:
        raise EngineError(f"Version de checkpoint non supportée: {document.get('version')}")
    return ObalEngine.from_dict(document["engine"], events)
