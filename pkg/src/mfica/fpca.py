"""Multivariate functional PCA in basis coordinates, and whitening."""

import warnings
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from .basis import BasisSpec, CoefMatrix, design_matrix
from .exceptions import EigenGapWarning, InputError, RankDeficiencyError
from .matalg import sym_eig, sym_inv_sqrt, sym_sqrt

# lambda_d - lambda_{d+1} below this fraction of lambda_1 triggers a gap warning.
GAP_TOL = 1e-6
# Default rank gate, relative to lambda_1.
RANK_EPS = 1e-10


@dataclass(frozen=True, eq=False)
class FpcaModel:
    """The d leading eigenpairs of the coefficient covariance in the Gram metric.

    ``phi`` holds eigenfunction coordinates in the original (possibly non-orthonormal)
    basis, so that phi^T (I_p x G) phi = I_d.
    """

    phi: np.ndarray
    lam: np.ndarray
    gram: np.ndarray
    p: int
    K: int
    spectrum: np.ndarray
    eigen_gap_warning: bool = False
    basis: Optional[BasisSpec] = None

    @property
    def d(self) -> int:
        return self.lam.size

    @property
    def metric(self) -> np.ndarray:
        """The block-diagonal metric I_p x G."""
        return metric_matrix(self.gram, self.p)

    def whitening_map(self) -> np.ndarray:
        """d x pK matrix Lambda^{-1/2} Phi^T (I_p x G)."""
        return (self.phi.T @ self.metric) / np.sqrt(self.lam)[:, None]

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "p": self.p,
            "K": self.K,
            "d": self.d,
            "lambda": self.lam.tolist(),
            "phi": self.phi.tolist(),
            "gram": self.gram.tolist(),
            "spectrum": self.spectrum.tolist(),
            "eigen_gap_warning": self.eigen_gap_warning,
        }
        if self.basis is not None:
            payload["basis"] = self.basis.to_dict()
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "FpcaModel":
        K = int(payload["K"])
        basis = BasisSpec.from_dict(payload["basis"]) if "basis" in payload else None
        gram = np.asarray(payload.get("gram", np.eye(K).tolist()), dtype=float)
        return cls(
            phi=np.asarray(payload["phi"], dtype=float).reshape(-1, int(payload["d"])),
            lam=np.asarray(payload["lambda"], dtype=float),
            gram=gram,
            p=int(payload["p"]),
            K=K,
            spectrum=np.asarray(payload.get("spectrum", payload["lambda"]), dtype=float),
            eigen_gap_warning=bool(payload.get("eigen_gap_warning", False)),
            basis=basis,
        )


@dataclass(frozen=True, eq=False)
class WhitenedScores:
    """Coordinates of the standardized observations in the eigenbasis (n x d).

    ``column_means`` holds the training means of the whitened coefficients.
    """

    data: np.ndarray
    model: FpcaModel
    column_means: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


def metric_matrix(gram: np.ndarray, p: int) -> np.ndarray:
    """Block-diagonal I_p x G."""
    return np.kron(np.eye(p), np.asarray(gram, dtype=float))


def _is_identity(gram: np.ndarray) -> bool:
    return bool(np.array_equal(gram, np.eye(gram.shape[0])))


def _check_gram(gram: np.ndarray, K: int) -> np.ndarray:
    gram = np.asarray(gram, dtype=float)
    if gram.shape != (K, K):
        raise InputError(f"Gram matrix has shape {gram.shape}, expected ({K}, {K})")
    return gram


def coefficient_covariance(c: CoefMatrix, gram: np.ndarray) -> np.ndarray:
    """Coefficient covariance in symmetrized metric form.

    Returns (I_p x G^{1/2}) [(1/n) X^T X] (I_p x G^{1/2}); for G = I this is (1/n) X^T X.
    """
    if not c.centered:
        raise InputError("coefficient matrix must be centered before computing its covariance")
    gram = _check_gram(gram, c.K)
    cov = c.data.T @ c.data / c.n
    if not _is_identity(gram):
        root = metric_matrix(sym_sqrt(gram), c.p)
        cov = root @ cov @ root
    return (cov + cov.T) / 2.0


def fpca_reduce(
    c: CoefMatrix,
    gram: np.ndarray,
    d: int,
    eps: Optional[float] = None,
    basis: Optional[BasisSpec] = None,
) -> FpcaModel:
    """Top-d eigenpairs of the coefficient covariance under the Gram metric.

    Args:
        c: Centered coefficient matrix
        gram: K x K Gram matrix of the basis
        d: Number of eigenpairs to keep, 1 <= d <= pK
        eps: Rank gate; defaults to 1e-10 * lambda_1
        basis: Optional basis, stored on the model for evaluation and serialization

    Raises:
        RankDeficiencyError: If lambda_d <= eps
    """
    pk = c.p * c.K
    if not isinstance(d, (int, np.integer)) or not 1 <= d <= pk:
        raise InputError(f"d must be an integer in 1..pK={pk}, got {d}")
    gram = _check_gram(gram, c.K)
    eig = sym_eig(coefficient_covariance(c, gram))
    lam1 = float(eig.values[0])
    if eps is None:
        eps = RANK_EPS * max(lam1, 0.0)
    if eig.values[d - 1] <= eps:
        raise RankDeficiencyError(
            f"effective dimension below d={d}: lambda_d = {eig.values[d - 1]:.6g}",
            eig.values,
            eps,
        )

    vectors = eig.vectors[:, :d]
    if _is_identity(gram):
        phi = vectors.copy()
    else:
        phi = metric_matrix(sym_inv_sqrt(gram, c.K, 0.0), c.p) @ vectors

    gap_warning = bool(d < pk and eig.values[d - 1] - eig.values[d] < GAP_TOL * lam1)
    if gap_warning:
        warnings.warn(
            f"lambda_{d} and lambda_{d + 1} are nearly equal "
            f"({eig.values[d - 1]:.6g} vs {eig.values[d]:.6g}); "
            "the retained eigenspace is unstable",
            EigenGapWarning,
            stacklevel=2,
        )
    return FpcaModel(
        phi=phi,
        lam=eig.values[:d].copy(),
        gram=gram,
        p=c.p,
        K=c.K,
        spectrum=eig.values.copy(),
        eigen_gap_warning=gap_warning,
        basis=basis,
    )


def whiten(c: CoefMatrix, m: FpcaModel) -> WhitenedScores:
    """Standardized eigenbasis coordinates: row i is Lambda^{-1/2} Phi^T (I_p x G) x_i."""
    if not c.centered:
        raise InputError("coefficient matrix must be centered before whitening")
    if c.p != m.p or c.K != m.K:
        raise InputError(
            f"coefficients have p={c.p}, K={c.K} but the model expects p={m.p}, K={m.K}"
        )
    return WhitenedScores(
        data=c.data @ m.whitening_map().T, model=m, column_means=c.column_means.copy()
    )


def eigenfunction_values(m: FpcaModel, basis: BasisSpec, t: np.ndarray) -> np.ndarray:
    """Evaluate the d eigenfunctions on the grid t; shape (d, p, len(t))."""
    if basis.K != m.K:
        raise InputError(f"basis has K={basis.K} but the model expects K={m.K}")
    design = design_matrix(basis, t)
    blocks = m.phi.T.reshape(m.d, m.p, m.K)
    return blocks @ design.T
