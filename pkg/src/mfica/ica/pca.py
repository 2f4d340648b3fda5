"""Baseline without rotation: the whitened principal component scores."""

from typing import Optional

import numpy as np

from ..fpca import WhitenedScores
from .base import RotationEstimate, RotationMethod, UnmixingModel


class PcaMethod(RotationMethod):
    """Identity rotation, Psi = I."""

    def __init__(self):
        super().__init__(name="pca", description="Projection onto the first d eigenfunctions")

    def estimate(self, w: WhitenedScores) -> RotationEstimate:
        return RotationEstimate(psi=np.eye(w.d))


def fit_pca(w: WhitenedScores, column_means: Optional[np.ndarray] = None) -> UnmixingModel:
    return PcaMethod().fit(w, column_means)
