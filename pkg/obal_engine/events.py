"""
Event Log
Journal NDJSON des prédictions, dérives, réinitialisations et évictions
"""

import json
import logging
import os
from collections import Counter
from enum import Enum
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)


class EventType(Enum):
    PREDICTION = "prediction"
    SOURCE_DRIFT = "source_drift"
    TARGET_DRIFT = "target_drift"
    REINIT = "reinit"
    POOL_EVICT = "pool_evict"


def stream_name(stream: Optional[int]) -> str:
    return "target" if stream is None else f"source_{stream}"


class EventLog:
    """
    Enregistrements {t, stream, event, payload}, un objet JSON par ligne

    Sans chemin, les enregistrements restent en mémoire uniquement.
    """

    def __init__(self, path: Optional[str] = None, log_predictions: bool = False, keep_records: bool = True):
        self.path = path
        self.log_predictions = log_predictions
        self.keep_records = keep_records
        self.records: List[Dict] = []
        self.counts: Counter = Counter()
        self._handle = None
        if path:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self._handle = open(path, "w", encoding="utf-8")

    def emit(self, t: int, stream: Optional[int], event: EventType, payload: Optional[Dict] = None) -> None:
        self.counts[event.value] += 1
        if event is EventType.PREDICTION and not self.log_predictions:
            return
        record = {"t": int(t), "stream": stream_name(stream), "event": event.value, "payload": payload or {}}
        if self.keep_records:
            self.records.append(record)
        if self._handle is not None:
            self._handle.write(json.dumps(record, sort_keys=True) + "\n")

    def count(self, event: EventType) -> int:
        return self.counts[event.value]

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def __enter__(self) -> "EventLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_event_log(path: str) -> List[Dict]:
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def summarize_event_log(path: str) -> Dict:
    """Comptes par type d'événement et par flux"""
    records = read_event_log(path)
    by_event = Counter(r["event"] for r in records)
    by_stream: Dict[str, Counter] = {}
    for record in records:
        by_stream.setdefault(record["stream"], Counter())[record["event"]] += 1
    return {
        "n_records": len(records),
        "events": dict(sorted(by_event.items())),
        "streams": {name: dict(sorted(c.items())) for name, c in sorted(by_stream.items())},
        "first_t": records[0]["t"] if records else None,
        "last_t": records[-1]["t"] if records else None,
    }
