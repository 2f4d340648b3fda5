"""Shared ICA types: unmixing models, score matrices and the rotation-method interface."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..basis import CoefMatrix, center_with
from ..exceptions import InputError
from ..fpca import FpcaModel, WhitenedScores
from ..matalg import JointDiagResult


class IcaMethod(Enum):
    """Rotation estimators."""
    PCA = "pca"
    FOBI = "fobi"
    JADE = "jade"


@dataclass(frozen=True, eq=False)
class CumulantMatrix:
    """Fourth cross-cumulant matrix of whitened scores for the coordinate pair (k, l).

    Indices are 0-based.
    """
    k: int
    l: int
    data: np.ndarray


@dataclass(frozen=True, eq=False)
class RotationEstimate:
    """Raw output of a rotation method, before the ordering/sign convention."""
    psi: np.ndarray
    fobi_eigenvalues: Optional[np.ndarray] = None
    joint_diag: Optional[JointDiagResult] = None
    gap_warning: bool = False


@dataclass(frozen=True, eq=False)
class UnmixingModel:
    """Fitted functional ICA model.

    ``loadings`` W (d x pK) maps centered coefficient rows to independent component
    scores: z = W x, with W = Psi^T Lambda^{-1/2} Phi^T (I_p x G).
    """

    psi: np.ndarray
    loadings: np.ndarray
    method: IcaMethod
    fpca: FpcaModel
    component_order: np.ndarray
    column_means: np.ndarray
    fobi_eigenvalues: Optional[np.ndarray] = None
    jd_objective: Optional[float] = None
    jd_converged: Optional[bool] = None
    jd_sweeps: Optional[int] = None
    column_contributions: Optional[np.ndarray] = None
    gap_warning: bool = False

    @property
    def d(self) -> int:
        return self.psi.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "method": self.method.value,
            "d": self.d,
            "psi": self.psi.tolist(),
            "loadings": self.loadings.tolist(),
            "component_order": [int(i) for i in self.component_order],
            "column_means": self.column_means.tolist(),
            "gap_warning": self.gap_warning,
            "fpca": self.fpca.to_dict(),
        }
        if self.fobi_eigenvalues is not None:
            payload["fobi_eigenvalues"] = self.fobi_eigenvalues.tolist()
        if self.jd_objective is not None:
            payload["jd_objective"] = self.jd_objective
            payload["jd_converged"] = self.jd_converged
            payload["jd_sweeps"] = self.jd_sweeps
        if self.column_contributions is not None:
            payload["column_contributions"] = self.column_contributions.tolist()
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "UnmixingModel":
        fobi = payload.get("fobi_eigenvalues")
        contributions = payload.get("column_contributions")
        return cls(
            psi=np.asarray(payload["psi"], dtype=float),
            loadings=np.asarray(payload["loadings"], dtype=float),
            method=IcaMethod(payload["method"]),
            fpca=FpcaModel.from_dict(payload["fpca"]),
            component_order=np.asarray(payload["component_order"], dtype=int),
            column_means=np.asarray(payload["column_means"], dtype=float),
            fobi_eigenvalues=None if fobi is None else np.asarray(fobi, dtype=float),
            jd_objective=payload.get("jd_objective"),
            jd_converged=payload.get("jd_converged"),
            jd_sweeps=payload.get("jd_sweeps"),
            column_contributions=None if contributions is None else np.asarray(contributions),
            gap_warning=bool(payload.get("gap_warning", False)),
        )


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Independent component scores, one row per observation.

    ``columns`` holds the 0-based component index of each column when only a subset
    of the scores is kept.
    """
    data: np.ndarray
    method: IcaMethod
    model: Optional[UnmixingModel] = None
    obs_ids: Tuple[str, ...] = field(default_factory=tuple)
    columns: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    @property
    def column_indices(self) -> np.ndarray:
        if self.columns is None:
            return np.arange(self.d)
        return np.asarray(self.columns, dtype=int)


@dataclass
class RotationMethod(ABC):
    """Base class for the rotation step applied to whitened scores."""

    name: str
    description: str

    def to_dict(self) -> Dict[str, Any]:
        """Describe the method and its settings."""
        return {"name": self.name, "description": self.description}

    @abstractmethod
    def estimate(self, w: WhitenedScores) -> RotationEstimate:
        """Estimate the d x d orthogonal rotation from whitened scores."""
        raise NotImplementedError("RotationMethod subclasses must implement estimate")

    def fit(self, w: WhitenedScores, column_means: Optional[np.ndarray] = None) -> UnmixingModel:
        """Estimate the rotation and assemble the ordered, sign-fixed unmixing model."""
        self.validate_input(w)
        return build_model(IcaMethod(self.name), w, self.estimate(w), column_means)

    def validate_input(self, w: WhitenedScores) -> None:
        """Check that the whitened sample is large enough for the method.

        Raises:
            InputError: If the sample is empty or n <= d
        """
        if w.n == 0:
            raise InputError("whitened scores are empty")
        if w.n <= w.d:
            raise InputError(f"need more observations than dimensions (n={w.n}, d={w.d})")


def unmixing_loadings(m: FpcaModel, psi: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """W = Psi^T Lambda^{-1/2} Phi^T (I_p x G), a d x pK matrix."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (m.d, m.d):
        raise InputError(f"rotation has shape {psi.shape}, expected ({m.d}, {m.d})")
    gram = np.asarray(gram, dtype=float)
    if gram.shape != m.gram.shape:
        raise InputError(f"Gram matrix has shape {gram.shape}, expected {m.gram.shape}")
    metric = np.kron(np.eye(m.p), gram)
    return psi.T @ ((m.phi.T @ metric) / np.sqrt(m.lam)[:, None])


def excess_kurtosis(scores: np.ndarray) -> np.ndarray:
    """Per-column sample excess kurtosis of standardized scores, mean(z^4) - 3."""
    return np.mean(np.asarray(scores, dtype=float) ** 4, axis=0) - 3.0


def build_model(
    method: IcaMethod,
    w: WhitenedScores,
    estimate: RotationEstimate,
    column_means: Optional[np.ndarray] = None,
) -> UnmixingModel:
    """Apply the ordering and sign convention and assemble the unmixing model.

    FOBI components keep the eigenvalue order (descending); JADE components are ordered
    by descending absolute excess kurtosis of their scores. For FOBI and JADE each
    component is signed so its largest-magnitude loading is positive. PCA keeps Psi = I.
    Training means default to the ones carried by ``w``.
    """
    fpca = w.model
    psi = np.asarray(estimate.psi, dtype=float)
    d = psi.shape[0]
    order = np.arange(d)
    if method is IcaMethod.JADE:
        kurt = excess_kurtosis(w.data @ psi)
        order = np.argsort(-np.abs(kurt), kind="stable")
    psi = psi[:, order]

    loadings = unmixing_loadings(fpca, psi, fpca.gram)
    if method is not IcaMethod.PCA:
        pivots = np.argmax(np.abs(loadings), axis=1)
        signs = np.sign(loadings[np.arange(d), pivots])
        signs[signs == 0] = 1.0
        psi = psi * signs
        loadings = loadings * signs[:, None]

    fobi = estimate.fobi_eigenvalues
    jd = estimate.joint_diag
    if column_means is None:
        column_means = w.column_means
    means = np.zeros(fpca.p * fpca.K) if column_means is None else np.asarray(column_means)
    return UnmixingModel(
        psi=psi,
        loadings=loadings,
        method=method,
        fpca=fpca,
        component_order=order,
        column_means=means.astype(float),
        fobi_eigenvalues=None if fobi is None else fobi[order],
        jd_objective=None if jd is None else jd.objective,
        jd_converged=None if jd is None else jd.converged,
        jd_sweeps=None if jd is None else jd.sweeps,
        column_contributions=None if jd is None else jd.column_contributions[order],
        gap_warning=estimate.gap_warning,
    )


def component_scores(c: CoefMatrix, model: UnmixingModel) -> ScoreMatrix:
    """Independent component scores Z = X W^T.

    Data are always centered with the model's training means; data centered with
    their own means are first restored to raw coordinates.
    """
    fpca = model.fpca
    if c.p != fpca.p or c.K != fpca.K:
        raise InputError(
            f"coefficients have p={c.p}, K={c.K} but the model expects p={fpca.p}, K={fpca.K}"
        )
    if not (c.centered and np.array_equal(c.column_means, model.column_means)):
        c = center_with(c, model.column_means)
    return ScoreMatrix(
        data=c.data @ model.loadings.T,
        method=model.method,
        model=model,
        obs_ids=c.obs_ids,
    )
