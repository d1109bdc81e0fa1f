"""
Linear Alignment Module
Alignement de covariance (CORAL) pondéré
"""

from .coral import (
    AlignmentError,
    AlignmentTransform,
    AlignmentFrame,
    regularized_covariance,
    coral_transform,
    apply_alignment,
    align_row,
    alignment_objective,
    covariance_fingerprint
)

__all__ = [
    "AlignmentError",
    "AlignmentTransform",
    "AlignmentFrame",
    "regularized_covariance",
    "coral_transform",
    "apply_alignment",
    "align_row",
    "alignment_objective",
    "covariance_fingerprint"
]
