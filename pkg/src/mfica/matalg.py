"""Dense symmetric eigensolvers, matrix square roots and Jacobi joint diagonalization."""

import functools
import warnings
from dataclasses import dataclass, field
from typing import List, Sequence, Union

import numpy as np
from scipy.linalg import eigh

from .exceptions import ConvergenceWarning, EigenGapWarning, InputError, RankDeficiencyError

# Relative asymmetry accepted (and removed) before decomposition.
SYMMETRY_TOL = 1e-8
# Relative eigenvalue difference below which two eigenvalues count as tied.
TIE_TOL = 1e-10

MatrixStack = Union[np.ndarray, Sequence[np.ndarray]]


@dataclass(frozen=True, eq=False)
class EigenDecomp:
    """Eigenvalues in non-increasing order with matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray
    has_ties: bool = False

    @property
    def source_dim(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class JointDiagResult:
    """Outcome of a Jacobi joint diagonalization.

    ``rotation`` columns are the joint eigenvectors; ``objective`` is the sum over
    matrices and columns of squared diagonal entries after rotation.
    """

    rotation: np.ndarray
    objective: float
    sweeps: int
    converged: bool
    objective_history: List[float] = field(default_factory=list)
    column_contributions: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def _symmetrized(S: np.ndarray, name: str = "matrix") -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InputError(f"{name} must be square, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise InputError(f"{name} has non-finite entries")
    scale = _max_abs(S)
    if _max_abs(S - S.T) > SYMMETRY_TOL * max(scale, np.finfo(float).tiny):
        raise InputError(f"{name} is not symmetric (asymmetry above {SYMMETRY_TOL:g} relative)")
    return (S + S.T) / 2.0


def sign_normalize(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so each column's largest-magnitude entry is positive.

    Ties in magnitude go to the lowest row index.
    """
    vectors = np.array(vectors, dtype=float, copy=True)
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eig(S: np.ndarray, warn_ties: bool = False) -> EigenDecomp:
    """Full eigendecomposition of a symmetric matrix.

    Eigenvalues are sorted non-increasing. Tied eigenvalues (within TIE_TOL relative)
    are ordered by a lexicographic comparison of their sign-normalized eigenvectors.
    """
    S = _symmetrized(S)
    values, vectors = eigh(S)
    vectors = sign_normalize(vectors)

    scale = max(_max_abs(values), np.finfo(float).tiny)

    def compare(a: int, b: int) -> int:
        if abs(values[a] - values[b]) > TIE_TOL * scale:
            return -1 if values[a] > values[b] else 1
        for x, y in zip(vectors[:, a], vectors[:, b]):
            if x != y:
                return -1 if x > y else 1
        return a - b

    order = sorted(range(values.size), key=functools.cmp_to_key(compare))
    values = values[order]
    vectors = vectors[:, order]
    has_ties = bool(values.size > 1 and np.any(np.abs(np.diff(values)) <= TIE_TOL * scale))
    if has_ties and warn_ties:
        warnings.warn(
            "Tied eigenvalues: the corresponding eigenvectors are not identified",
            EigenGapWarning,
            stacklevel=2,
        )
    return EigenDecomp(values=values, vectors=vectors, has_ties=has_ties)


def sym_sqrt(S: np.ndarray) -> np.ndarray:
    """Symmetric positive semi-definite square root."""
    eig = sym_eig(S)
    scale = max(_max_abs(eig.values), np.finfo(float).tiny)
    if eig.values[-1] < -1e-10 * scale:
        raise InputError(f"matrix is not positive semi-definite (min eigenvalue {eig.values[-1]:.3g})")
    root = np.sqrt(np.clip(eig.values, 0.0, None))
    out = (eig.vectors * root) @ eig.vectors.T
    return (out + out.T) / 2.0


def sym_inv_sqrt(S: np.ndarray, d: int, eps: float) -> np.ndarray:
    """Rank-d inverse square root sum_{k<=d} lambda_k^{-1/2} phi_k phi_k^T.

    Raises:
        RankDeficiencyError: If the d-th eigenvalue does not exceed eps
    """
    eig = sym_eig(S)
    if not 1 <= d <= eig.source_dim:
        raise InputError(f"d must lie in 1..{eig.source_dim}, got {d}")
    if eig.values[d - 1] <= eps:
        raise RankDeficiencyError(
            f"effective rank below d={d}: lambda_d = {eig.values[d - 1]:.6g}", eig.values, eps
        )
    vecs = eig.vectors[:, :d]
    out = (vecs / np.sqrt(eig.values[:d])) @ vecs.T
    return (out + out.T) / 2.0


def _as_stack(mats: MatrixStack) -> np.ndarray:
    stack = np.asarray(mats, dtype=float)
    if stack.ndim == 2:
        stack = stack[None, :, :]
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise InputError(f"expected a stack of square matrices, got shape {stack.shape}")
    if stack.shape[0] == 0:
        raise InputError("at least one matrix is required")
    return stack


def offdiag_objective(mats: MatrixStack, V: np.ndarray) -> float:
    """Joint-diagonality objective w = sum_i sum_k (v_k^T S_i v_k)^2."""
    stack = _as_stack(mats)
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != stack.shape[1]:
        raise InputError(
            f"rotation has shape {V.shape}, incompatible with {stack.shape[1]}x{stack.shape[2]} matrices"
        )
    diag = np.einsum("ak,mab,bk->mk", V, stack, V)
    return float(np.sum(diag ** 2))


def _diag_objective(stack: np.ndarray) -> float:
    return float(np.sum(np.diagonal(stack, axis1=1, axis2=2) ** 2))


def joint_diagonalize(
    mats: MatrixStack, tol: float = 1e-8, max_sweeps: int = 100
) -> JointDiagResult:
    """Orthogonal joint diagonalization by Jacobi (Givens) sweeps.

    Each pairwise rotation angle maximizes the summed squared diagonals of the whole
    family in closed form, so the objective never decreases. Columns of the returned
    rotation are ordered by decreasing contribution to the objective and signed so that
    each column's largest-magnitude entry is positive.

    Args:
        mats: Stack (m, d, d) or sequence of symmetric d x d matrices, d >= 2
        tol: Convergence threshold on rotation angles (radians)
        max_sweeps: Maximum number of full sweeps

    Returns:
        JointDiagResult; ``converged`` is False if max_sweeps ran out
    """
    stack = _as_stack(mats)
    d = stack.shape[1]
    if d < 2:
        raise InputError("joint diagonalization needs matrices of dimension d >= 2")
    if not np.all(np.isfinite(stack)):
        raise InputError("matrices have non-finite entries")
    A = np.stack([_symmetrized(m, name=f"matrix {i}") for i, m in enumerate(stack)])

    V = np.eye(d)
    history = [_diag_objective(A)]
    converged = False
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        rotated = False
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = np.vstack([A[:, p, p] - A[:, q, q], A[:, p, q] + A[:, q, p]])
                gg = g @ g.T
                ton = gg[0, 0] - gg[1, 1]
                toff = gg[0, 1] + gg[1, 0]
                theta = 0.5 * np.arctan2(toff, ton + np.sqrt(ton * ton + toff * toff))
                if abs(theta) <= tol:
                    continue
                rotated = True
                c, s = np.cos(theta), np.sin(theta)
                givens = np.array([[c, -s], [s, c]])
                pair = [p, q]
                V[:, pair] = V[:, pair] @ givens
                A[:, pair, :] = np.einsum("ba,mbj->maj", givens, A[:, pair, :])
                A[:, :, pair] = A[:, :, pair] @ givens
        history.append(_diag_objective(A))
        if not rotated:
            converged = True
            break

    if not converged:
        warnings.warn(
            f"joint diagonalization did not converge within {max_sweeps} sweeps",
            ConvergenceWarning,
            stacklevel=2,
        )

    contributions = np.sum(np.diagonal(A, axis1=1, axis2=2) ** 2, axis=0)
    order = np.argsort(-contributions, kind="stable")
    rotation = sign_normalize(V[:, order])
    return JointDiagResult(
        rotation=rotation,
        objective=history[-1],
        sweeps=sweeps,
        converged=converged,
        objective_history=history,
        column_contributions=contributions[order],
    )
