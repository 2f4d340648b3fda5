"""Separation quality and score selection.

The minimum distance index of a square matrix R is

    D(R) = (p - 1)^{-1/2} inf_C ||C R - I||_F

over matrices C with exactly one nonzero entry per row and column. For a fixed
assignment the optimal scale of each row is closed-form, which leaves
D(R)^2 = (p - max_pi sum_m g[pi(m), m]) / (p - 1) with g[r, m] = R[r, m]^2 / ||R_r||^2.
"""

import itertools
from dataclasses import dataclass
from typing import Union

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment

from .exceptions import InputError
from .ica.base import ScoreMatrix, UnmixingModel

# Largest dimension for which the index is computed by enumerating permutations.
MAX_ENUMERATION_DIM = 8
# Loadings above this magnitude are flagged in loading tables.
HIGHLIGHT_THRESHOLD = 0.6

ScoreLike = Union[ScoreMatrix, np.ndarray]


@dataclass(frozen=True, eq=False)
class GainSummary:
    """Gain W Omega, its block collapse R and the minimum distance index of R."""

    gain: np.ndarray
    collapsed: np.ndarray
    mdi: float


def block_collapse(gain: np.ndarray, p: int, K: int) -> np.ndarray:
    """R[m, j] = sum over the K columns of block j of gain[m, :]^2."""
    gain = np.asarray(gain, dtype=float)
    if gain.ndim != 2 or gain.shape[1] != p * K:
        raise InputError(f"gain must have p*K={p * K} columns, got shape {gain.shape}")
    return np.sum(gain.reshape(gain.shape[0], p, K) ** 2, axis=2)


def _normalized_rows(R: np.ndarray) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] == 0:
        raise InputError(f"minimum distance index needs a non-empty square matrix, got {R.shape}")
    if not np.all(np.isfinite(R)):
        raise InputError("matrix has non-finite entries")
    squares = R ** 2
    norms = squares.sum(axis=1)
    empty = np.flatnonzero(norms == 0.0)
    if empty.size:
        raise InputError(f"row {int(empty[0]) + 1} is all zero: the component carries no signal")
    return squares / norms[:, None]


def _index_from_match(p: int, matched: float) -> float:
    if p == 1:
        return 0.0
    value = (p - matched) / (p - 1)
    return float(np.sqrt(min(max(value, 0.0), 1.0)))


def mdi_by_enumeration(R: np.ndarray) -> float:
    """Minimum distance index by enumerating all row-to-column assignments."""
    g = _normalized_rows(R)
    p = g.shape[0]
    if p > MAX_ENUMERATION_DIM:
        raise InputError(f"enumeration is limited to p <= {MAX_ENUMERATION_DIM}, got p={p}")
    cols = np.arange(p)
    best = max(float(g[list(perm), cols].sum()) for perm in itertools.permutations(range(p)))
    return _index_from_match(p, best)


def mdi_by_assignment(R: np.ndarray) -> float:
    """Minimum distance index via a linear assignment solve (any p)."""
    g = _normalized_rows(R)
    rows, cols = linear_sum_assignment(g, maximize=True)
    return _index_from_match(g.shape[0], float(g[rows, cols].sum()))


def minimum_distance_index(R: np.ndarray, method: str = "auto") -> float:
    """Minimum distance index of a square matrix, in [0, 1].

    Args:
        R: Square matrix without all-zero rows
        method: "enumerate", "assignment", or "auto" (enumeration up to p = 8)

    Raises:
        InputError: For non-square input or an all-zero row
    """
    if method == "enumerate":
        return mdi_by_enumeration(R)
    if method == "assignment":
        return mdi_by_assignment(R)
    if method != "auto":
        raise InputError(f"unknown method {method!r}; expected auto, enumerate or assignment")
    p = np.shape(R)[0] if np.ndim(R) == 2 else 0
    if p <= MAX_ENUMERATION_DIM:
        return mdi_by_enumeration(R)
    return mdi_by_assignment(R)


def gain_summary(W: np.ndarray, omega: np.ndarray, p: int, K: int) -> GainSummary:
    """Gain of an unmixing matrix against a known mixing, collapsed per component."""
    W = np.asarray(W, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if W.shape[1] != omega.shape[0]:
        raise InputError(f"cannot multiply loadings {W.shape} by mixing {omega.shape}")
    gain = W @ omega
    collapsed = block_collapse(gain, p, K)
    return GainSummary(gain=gain, collapsed=collapsed, mdi=minimum_distance_index(collapsed))


def _score_data(scores: ScoreLike) -> np.ndarray:
    data = scores.data if isinstance(scores, ScoreMatrix) else np.asarray(scores, dtype=float)
    if data.ndim != 2:
        raise InputError(f"scores must be an n x d matrix, got shape {data.shape}")
    return data


def fourth_moments(scores: ScoreLike) -> np.ndarray:
    """Sample fourth moment (1/n) sum z^4 of each standardized score column."""
    data = _score_data(scores)
    if data.shape[0] < 4:
        raise InputError(f"need at least 4 observations, got {data.shape[0]}")
    sd = data.std(axis=0)
    sd[sd == 0] = 1.0
    z = (data - data.mean(axis=0)) / sd
    return np.mean(z ** 4, axis=0)


def fourth_moment_rank(scores: ScoreLike) -> np.ndarray:
    """Column indices (0-based) by ascending fourth moment; ties keep index order."""
    return np.argsort(fourth_moments(scores), kind="stable")


def variance_rank(scores: ScoreLike) -> np.ndarray:
    """Column indices (0-based) by descending sample variance; ties keep index order."""
    data = _score_data(scores)
    return np.argsort(-data.var(axis=0), kind="stable")


def select_scores(scores: ScoreMatrix, k: int, rule: str = "kurtosis") -> ScoreMatrix:
    """Keep the first k score columns under a ranking rule.

    ``rule="kurtosis"`` keeps the lightest-tailed scores (lowest fourth moments),
    ``rule="variance"`` the highest-variance ones.
    """
    if not 1 <= k <= scores.d:
        raise InputError(f"k must lie in 1..{scores.d}, got {k}")
    if rule == "kurtosis":
        order = fourth_moment_rank(scores)
    elif rule == "variance":
        order = variance_rank(scores)
    else:
        raise InputError(f"unknown selection rule {rule!r}; expected kurtosis or variance")
    keep = order[:k]
    return ScoreMatrix(
        data=scores.data[:, keep],
        method=scores.method,
        model=scores.model,
        obs_ids=scores.obs_ids,
        columns=scores.column_indices[keep],
    )


def loadings_table(model: UnmixingModel, threshold: float = HIGHLIGHT_THRESHOLD) -> pd.DataFrame:
    """Loadings in long form: one row per (score, component, basis_index), all 1-based."""
    p, K = model.fpca.p, model.fpca.K
    score, component, basis_index = np.meshgrid(
        np.arange(1, model.d + 1), np.arange(1, p + 1), np.arange(1, K + 1), indexing="ij"
    )
    values = model.loadings.reshape(model.d, p, K)
    return pd.DataFrame(
        {
            "score": score.ravel(),
            "component": component.ravel(),
            "basis_index": basis_index.ravel(),
            "loading": values.ravel(),
            "highlight": np.abs(values.ravel()) > threshold,
        }
    )

