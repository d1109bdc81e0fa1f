"""
Classifier Snapshots
Documents JSON versionnés pour la persistance du pool
"""

import json
from typing import Dict

from .base import BaseClassifier, LearnerError

SNAPSHOT_FORMAT = "obal-classifier"
SNAPSHOT_VERSION = 1


def snapshot_to_dict(classifier: BaseClassifier) -> Dict:
    return {"format": SNAPSHOT_FORMAT, "version": SNAPSHOT_VERSION, "classifier": classifier.to_dict()}


def snapshot_from_dict(document: Dict) -> BaseClassifier:
    if document.get("format") != SNAPSHOT_FORMAT:
        raise LearnerError("Document de classifieur non reconnu.")
    if document.get("version") != SNAPSHOT_VERSION:
        raise LearnerError(f"Version de snapshot non supportée: {document.get('version')}")
    return BaseClassifier.from_dict(document["classifier"])


def dumps(classifier: BaseClassifier) -> str:
    return json.dumps(snapshot_to_dict(classifier), sort_keys=True)


def loads(text: str) -> BaseClassifier:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise LearnerError(f"Snapshot illisible: {e}")
    return snapshot_from_dict(document)
