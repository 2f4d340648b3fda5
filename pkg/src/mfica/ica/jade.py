"""Joint approximate diagonalization of the fourth-order cumulant matrices."""

from typing import Optional

import numpy as np

from ..fpca import WhitenedScores
from ..matalg import joint_diagonalize
from .base import RotationEstimate, RotationMethod, UnmixingModel
from .cumulants import jade_cumulants


class JadeMethod(RotationMethod):
    """Rotation that jointly diagonalizes all cross-cumulant matrices C^{kl}."""

    def __init__(self, tol: float = 1e-8, max_sweeps: int = 100):
        super().__init__(
            name="jade",
            description="Jacobi joint diagonalization of the cumulant matrices C^{kl}, k <= l",
        )
        self.tol = tol
        self.max_sweeps = max_sweeps

    def to_dict(self):
        payload = super().to_dict()
        payload.update({"tol": self.tol, "max_sweeps": self.max_sweeps})
        return payload

    def estimate(self, w: WhitenedScores) -> RotationEstimate:
        if w.d == 1:
            return RotationEstimate(psi=np.eye(1))
        stack = np.stack([cum.data for cum in jade_cumulants(w, weighted=True)])
        result = joint_diagonalize(stack, tol=self.tol, max_sweeps=self.max_sweeps)
        return RotationEstimate(psi=result.rotation, joint_diag=result)


def fit_jade(
    w: WhitenedScores,
    column_means: Optional[np.ndarray] = None,
    tol: float = 1e-8,
    max_sweeps: int = 100,
) -> UnmixingModel:
    """Fit JADE on whitened scores.

    Non-convergence is reported through ``jd_converged`` on the model and a
    ConvergenceWarning.
    """
    return JadeMethod(tol=tol, max_sweeps=max_sweeps).fit(w, column_means)
