"""
CSV Stream Loader
Lecture de flux réels (Weather, Kitti, CNNIBN, BBC...) depuis des fichiers CSV
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from .types import InstanceStream, StreamError, StreamParseError

logger = logging.getLogger(__name__)

Column = Union[str, int]


@dataclass
class CsvSchema:
    """
    Schéma d'un fichier CSV
    Les colonnes sont désignées par nom (avec en-tête) ou par position (sans en-tête).
    """
    feature_columns: List[Column]
    label_column: Optional[Column] = None
    class_map: Optional[Dict[str, int]] = None
    has_header: bool = True
    n_classes: Optional[int] = None

    @property
    def labeled(self) -> bool:
        return self.label_column is not None


def _parse_column(token: str, has_header: bool) -> Column:
    token = token.strip()
    if not has_header:
        try:
            return int(token)
        except ValueError:
            raise StreamError(f"Sans en-tête, les colonnes sont des positions entières: {token}")
    return token


def load_csv_schema(path: str) -> CsvSchema:
    """
    Charge un schéma depuis un fichier clé-valeur (syntaxe dotenv)

    Clés: FEATURE_COLUMNS, LABEL_COLUMN, CLASS_MAP (token:index,...), HEADER
    """
    if not os.path.exists(path):
        raise StreamError(f"Schéma introuvable: {path}")
    values = {k.upper(): (v or "") for k, v in dotenv_values(path).items()}
    has_header = values.get("HEADER", "true").strip().lower() in ("1", "true", "yes", "oui")
    if not values.get("FEATURE_COLUMNS"):
        raise StreamError("FEATURE_COLUMNS est requis dans le schéma.")
    features = [_parse_column(tok, has_header) for tok in values["FEATURE_COLUMNS"].split(",") if tok.strip()]
    label = values.get("LABEL_COLUMN", "").strip()
    class_map = None
    if values.get("CLASS_MAP"):
        class_map = {}
        for pair in values["CLASS_MAP"].split(","):
            token, _, index = pair.partition(":")
            try:
                class_map[token.strip()] = int(index)
            except ValueError:
                raise StreamError(f"CLASS_MAP invalide: '{pair.strip()}' (attendu token:index)")
    return CsvSchema(
        feature_columns=features,
        label_column=_parse_column(label, has_header) if label else None,
        class_map=class_map,
        has_header=has_header,
    )


def _column_position(frame: pd.DataFrame, column: Column) -> int:
    if column not in frame.columns:
        raise StreamError(f"Colonne absente du fichier: {column}")
    return int(list(frame.columns).index(column))


def load_csv_stream(path: str, schema: CsvSchema) -> InstanceStream:
    """
    Charge un flux CSV; l'ordre des lignes devient l'ordre temporel

    Args:
        path: chemin du fichier (séparateur virgule, décimales avec point)
        schema: colonnes de caractéristiques, colonne d'étiquette optionnelle

    Returns:
        InstanceStream (étiquettes dans {0..C-1} ou absentes)

    Raises:
        StreamError: fichier manquant, vide ou mal formé
        StreamParseError: cellule non numérique ou classe inconnue (ligne, colonne)
    """
    if not os.path.exists(path):
        raise StreamError(f"Fichier introuvable: {path}")

    try:
        frame = pd.read_csv(
            path,
            header=0 if schema.has_header else None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise StreamError(f"Fichier vide: {path}")
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise StreamError(f"CSV illisible: {path} ({e})")
    if frame.empty:
        raise StreamError(f"Fichier vide: {path}")

    positions = [_column_position(frame, col) for col in schema.feature_columns]
    raw = frame.iloc[:, positions].to_numpy()
    X = np.empty(raw.shape, dtype=float)
    for row in range(raw.shape[0]):
        for j in range(raw.shape[1]):
            try:
                X[row, j] = float(raw[row, j])
            except ValueError:
                raise StreamParseError(
                    f"Valeur non numérique '{raw[row, j]}' ligne {row + 1}, colonne {positions[j] + 1}",
                    row=row + 1,
                    column=positions[j] + 1,
                )
            if not np.isfinite(X[row, j]):
                raise StreamParseError(
                    f"Valeur non finie ligne {row + 1}, colonne {positions[j] + 1}",
                    row=row + 1,
                    column=positions[j] + 1,
                )

    y = None
    n_classes = schema.n_classes or 2
    if schema.labeled:
        label_pos = _column_position(frame, schema.label_column)
        tokens = [str(tok).strip() for tok in frame.iloc[:, label_pos]]
        class_map = schema.class_map
        if class_map is None:
            class_map = {token: index for index, token in enumerate(sorted(set(tokens)))}
        y = np.empty(len(tokens), dtype=np.int64)
        for row, token in enumerate(tokens):
            if token not in class_map:
                raise StreamParseError(
                    f"Classe inconnue '{token}' ligne {row + 1}, colonne {label_pos + 1}",
                    row=row + 1,
                    column=label_pos + 1,
                )
            y[row] = class_map[token]
        n_classes = schema.n_classes or max(max(class_map.values()) + 1, 2)

    logger.info(f"✅ Flux CSV chargé: {path} ({X.shape[0]} lignes, d={X.shape[1]})")
    return InstanceStream.from_arrays(X, y, n_classes=n_classes)
