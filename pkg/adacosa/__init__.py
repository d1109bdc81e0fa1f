"""
AdaCOSA Module
Initialisation par alignement de covariance et repondération adaptative
"""

from .initializer import (
    AdaCosaError,
    AdaCosaConfig,
    InitResult,
    compute_beta,
    update_correlation_weight,
    adacosa_init,
    ensemble_init_predict
)

__all__ = [
    "AdaCosaError",
    "AdaCosaConfig",
    "InitResult",
    "compute_beta",
    "update_correlation_weight",
    "adacosa_init",
    "ensemble_init_predict"
]
