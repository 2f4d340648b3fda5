"""Fourth-order cumulant matrices of whitened scores."""

from typing import List

import numpy as np

from ..exceptions import InputError
from ..fpca import WhitenedScores
from .base import CumulantMatrix


def _check_nonempty(w: WhitenedScores) -> np.ndarray:
    x = np.asarray(w.data, dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise InputError(f"whitened scores must be a non-empty n x d matrix, got shape {x.shape}")
    return x


def _weighted_moment(x: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """(1/n) sum_i weights_i x_i x_i^T, accumulated in row order."""
    out = (x * weights[:, None]).T @ x / x.shape[0]
    return (out + out.T) / 2.0


def fobi_matrix(w: WhitenedScores) -> np.ndarray:
    """(1/n) sum_i ||x_i||^2 x_i x_i^T - (d + 2) I_d."""
    x = _check_nonempty(w)
    d = x.shape[1]
    return _weighted_moment(x, np.einsum("ij,ij->i", x, x)) - (d + 2) * np.eye(d)


def jade_cumulant(w: WhitenedScores, k: int, l: int) -> CumulantMatrix:
    """Cross-cumulant matrix for the coordinate pair (k, l), 0-based.

    (1/n) sum_i x_ik x_il x_i x_i^T - delta_kl I_d - e_k e_l^T - e_l e_k^T
    """
    x = _check_nonempty(w)
    d = x.shape[1]
    for name, idx in (("k", k), ("l", l)):
        if not isinstance(idx, (int, np.integer)) or not 0 <= idx < d:
            raise InputError(f"index {name}={idx} out of range 0..{d - 1}")
    data = _weighted_moment(x, x[:, k] * x[:, l])
    data[k, l] -= 1.0
    data[l, k] -= 1.0
    if k == l:
        data -= np.eye(d)
    return CumulantMatrix(k=int(k), l=int(l), data=data)


def jade_cumulants(w: WhitenedScores, weighted: bool = True) -> List[CumulantMatrix]:
    """All cumulant matrices with k <= l, in row-major pair order.

    With ``weighted`` the k < l matrices are scaled by sqrt(2), so the summed squared
    diagonals over this family equal those over the full d^2 family.
    """
    x = _check_nonempty(w)
    d = x.shape[1]
    mats = []
    for k in range(d):
        for l in range(k, d):
            cum = jade_cumulant(w, k, l)
            if weighted and k != l:
                cum = CumulantMatrix(k=k, l=l, data=np.sqrt(2.0) * cum.data)
            mats.append(cum)
    return mats
