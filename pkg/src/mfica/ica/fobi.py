"""Fourth-order blind identification: eigenvectors of the FOBI matrix."""

import warnings
from typing import Optional

import numpy as np

from ..exceptions import EigenGapWarning
from ..fpca import WhitenedScores
from ..matalg import sym_eig
from .base import RotationEstimate, RotationMethod, UnmixingModel
from .cumulants import fobi_matrix

# Adjacent FOBI eigenvalues closer than this fraction of (d + 2) count as tied.
FOBI_GAP_TOL = 1e-4


class FobiMethod(RotationMethod):
    """Rotation given by the eigenvectors of the FOBI matrix, eigenvalues descending."""

    def __init__(self, gap_tol: float = FOBI_GAP_TOL):
        super().__init__(
            name="fobi",
            description="Eigenvectors of (1/n) sum ||x||^2 x x^T - (d + 2) I",
        )
        self.gap_tol = gap_tol

    def to_dict(self):
        payload = super().to_dict()
        payload["gap_tol"] = self.gap_tol
        return payload

    def estimate(self, w: WhitenedScores) -> RotationEstimate:
        eig = sym_eig(fobi_matrix(w), warn_ties=True)
        gaps = -np.diff(eig.values)
        # Eigenvalues of the uncorrected moment matrix sit around d + 2.
        scale = w.d + 2
        near_tie = bool(gaps.size and gaps.min() < self.gap_tol * scale)
        gap_warning = eig.has_ties or near_tie
        # exact ties were already reported by sym_eig
        if near_tie and not eig.has_ties:
            warnings.warn(
                f"FOBI eigenvalues are nearly tied (smallest gap {gaps.min():.3g}); "
                "components with equal kurtosis are not separated",
                EigenGapWarning,
                stacklevel=3,
            )
        return RotationEstimate(
            psi=eig.vectors,
            fobi_eigenvalues=eig.values,
            gap_warning=gap_warning,
        )


def fit_fobi(
    w: WhitenedScores, column_means: Optional[np.ndarray] = None, gap_tol: float = FOBI_GAP_TOL
) -> UnmixingModel:
    """Fit FOBI on whitened scores.

    Raises:
        InputError: If n <= d
    """
    return FobiMethod(gap_tol=gap_tol).fit(w, column_means)
