"""End-to-end functional ICA estimator."""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .basis import (
    BasisSpec,
    CoefMatrix,
    SampledCurveSet,
    center_coefficients,
    fit_coefficients,
    fourier_basis,
)
from .exceptions import InputError, MficaError
from .fpca import FpcaModel, WhitenedScores, fpca_reduce, whiten
from .ica import ScoreMatrix, UnmixingModel, component_scores, get_method

CurveData = Union[SampledCurveSet, CoefMatrix]


@dataclass
class IcaConfig:
    """Settings for basis fitting, dimension reduction and rotation."""

    basis_k: int = 11
    interval: Tuple[float, float] = (0.0, 1.0)
    d: Optional[int] = None  # None means d = p
    method: str = "jade"
    ridge: float = 0.0
    rank_eps: Optional[float] = None
    jd_tol: float = 1e-8
    jd_max_sweeps: int = 100
    verbose: bool = False

    def method_options(self) -> dict:
        if self.method.lower() == "jade":
            return {"tol": self.jd_tol, "max_sweeps": self.jd_max_sweeps}
        return {}


class FunctionalICA:
    """Fit FOBI, JADE or the PCA baseline to multivariate curves.

    Runs basis fitting, centering, Gram-metric FPCA, whitening and the rotation in
    sequence. The training column means are kept on the model, so ``transform`` centers
    new data with them.
    """

    def __init__(self, config: Optional[IcaConfig] = None, verbose: Optional[bool] = None):
        self.config = config or IcaConfig()
        self.verbose = self.config.verbose if verbose is None else verbose
        self.basis: BasisSpec = fourier_basis(self.config.basis_k, self.config.interval)
        self.coefficients_: Optional[CoefMatrix] = None
        self.fpca_: Optional[FpcaModel] = None
        self.whitened_: Optional[WhitenedScores] = None
        self.model_: Optional[UnmixingModel] = None

    def _coefficients(self, data: CurveData) -> CoefMatrix:
        if isinstance(data, SampledCurveSet):
            coefs = fit_coefficients(data, self.basis, ridge=self.config.ridge)
            if self.verbose:
                print(f"🔧 Fitted {coefs.n} x {coefs.data.shape[1]} basis coefficients")
            return coefs
        if isinstance(data, CoefMatrix):
            if data.K != self.basis.K:
                raise InputError(f"coefficients use K={data.K}, estimator expects K={self.basis.K}")
            return data
        raise InputError(f"expected SampledCurveSet or CoefMatrix, got {type(data).__name__}")

    def fit(self, data: CurveData) -> "FunctionalICA":
        """Fit the full pipeline.

        Raises:
            InputError: On malformed input or an unknown method
            NumericalError: On rank deficiency or an unfittable curve
        """
        method = get_method(self.config.method, **self.config.method_options())
        coefs = center_coefficients(self._coefficients(data))
        d = self.config.d if self.config.d is not None else coefs.p
        try:
            fpca = fpca_reduce(coefs, self.basis.gram, d, eps=self.config.rank_eps, basis=self.basis)
            whitened = whiten(coefs, fpca)
            model = method.fit(whitened, coefs.column_means)
        except MficaError as e:
            if self.verbose:
                print(f"❌ {method.name} fit failed: {e}")
            raise

        self.coefficients_ = coefs
        self.fpca_ = fpca
        self.whitened_ = whitened
        self.model_ = model
        if self.verbose:
            print(f"✅ {method.name.upper()} fit: n={coefs.n}, p={coefs.p}, K={coefs.K}, d={d}")
            if fpca.eigen_gap_warning or model.gap_warning:
                print("⚠️  Near-tied eigenvalues: some components are poorly identified")
            if model.jd_converged is False:
                print(f"⚠️  Joint diagonalization stopped after {model.jd_sweeps} sweeps")
        return self

    def transform(self, data: CurveData) -> ScoreMatrix:
        """Independent component scores of (new) data, centered with the training means."""
        if self.model_ is None:
            raise MficaError("FunctionalICA is not fitted; call fit() first")
        return component_scores(self._coefficients(data), self.model_)

    def fit_transform(self, data: CurveData) -> ScoreMatrix:
        self.fit(data)
        return component_scores(self.coefficients_, self.model_)

    @property
    def loadings(self) -> np.ndarray:
        if self.model_ is None:
            raise MficaError("FunctionalICA is not fitted; call fit() first")
        return self.model_.loadings
