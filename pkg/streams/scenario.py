"""
Multistream Scenario Builder
Découpage d'un jeu de données en N sources + 1 cible avec décalage de covariables
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from .generators import generate_synthetic
from .types import InstanceStream, Multistream, ScenarioConfig, ScenarioError

logger = logging.getLogger(__name__)


def gaussian_log_scores(X: np.ndarray) -> np.ndarray:
    """
    Log du score gaussien P(x) de chaque instance
    Produit des densités par caractéristique (moyenne et variance du jeu complet);
    les constantes de normalisation sont omises, l'ordre est inchangé.
    """
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=0)
    var = X.var(axis=0)
    var = np.where(var > 0, var, 1.0)
    return -0.5 * np.sum((X - mean) ** 2 / var, axis=1)


def build_multistream_scenario(dataset: InstanceStream, n_sources: int, sizes: Sequence[int]) -> Multistream:
    """
    Construit un scénario multi-flux par tri décroissant du score gaussien

    Args:
        dataset: flux étiqueté complet
        n_sources: nombre N de flux sources
        sizes: tailles des N sources; une (N+1)-ième valeur optionnelle fixe la
            taille de la cible (sinon la cible reçoit tout le reste)

    Returns:
        Multistream: source i = i-ème bloc contigu de l'ordre trié, chaque flux
        remis dans l'ordre chronologique; étiquettes cibles mises de côté
    """
    if n_sources < 1:
        raise ScenarioError("n_sources doit être >= 1.")
    if not dataset.is_labeled:
        raise ScenarioError("Le jeu de données doit être étiqueté.")
    sizes = [int(s) for s in sizes]
    if len(sizes) not in (n_sources, n_sources + 1):
        raise ScenarioError(f"{n_sources} tailles attendues (ou {n_sources + 1} avec la cible).")
    if any(s < 1 for s in sizes):
        raise ScenarioError("Les tailles doivent être positives.")
    source_total = sum(sizes[:n_sources])
    if source_total > len(dataset):
        raise ScenarioError(f"Tailles ({source_total}) supérieures au jeu de données ({len(dataset)}).")
    target_size = sizes[n_sources] if len(sizes) > n_sources else len(dataset) - source_total
    if target_size <= 0:
        raise ScenarioError("Le flux cible serait vide.")
    if source_total + target_size > len(dataset):
        raise ScenarioError("Tailles (cible incluse) supérieures au jeu de données.")

    order = np.argsort(-gaussian_log_scores(dataset.X), kind="stable")
    bounds = np.cumsum([0] + sizes[:n_sources] + [target_size])
    blocks = [np.sort(order[bounds[k]:bounds[k + 1]]) for k in range(n_sources + 1)]

    sources = [dataset.take(block) for block in blocks[:n_sources]]
    target_full = dataset.take(blocks[n_sources])
    scenario = Multistream(
        sources=sources,
        target=target_full.without_labels(),
        held_out_labels=np.array(target_full.y),
    )
    logger.info(
        f"Scénario construit: {n_sources} sources {sizes[:n_sources]}, cible {target_size} instances"
    )
    return scenario


def synthetic_scenario(config: ScenarioConfig) -> Multistream:
    """Génère un flux synthétique puis le découpe en multi-flux"""
    dataset = generate_synthetic(config.kind, config)
    sizes: List[int] = list(config.sizes) if config.sizes else [config.samples_per_stream] * config.n_sources
    return build_multistream_scenario(dataset, config.n_sources, sizes)


def scenario_from_dataset(dataset: InstanceStream, n_sources: int, samples_per_stream: Optional[int] = None,
                          sizes: Optional[Sequence[int]] = None) -> Multistream:
    """Découpage d'un flux réel en N + 1 parts égales (ou selon `sizes`)"""
    if sizes is None:
        per_stream = samples_per_stream or len(dataset) // (n_sources + 1)
        sizes = [per_stream] * (n_sources + 1)
    return build_multistream_scenario(dataset, n_sources, sizes)
