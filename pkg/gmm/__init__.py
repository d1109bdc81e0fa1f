"""
GMM Module
Mélanges gaussiens par EM et vraisemblance du composant dominant
"""

from .mixture import (
    GmmError,
    EmConfig,
    GmmModel,
    fit_gmm,
    select_components,
    floor_covariance
)

__all__ = [
    "GmmError",
    "EmConfig",
    "GmmModel",
    "fit_gmm",
    "select_components",
    "floor_covariance"
]
