"""mfica - independent component analysis for multivariate functional data.

Curves are fitted in a function basis, reduced by functional PCA in the basis Gram
metric, whitened, and rotated by FOBI or JADE into independent component scores.
A Monte-Carlo harness scores separation quality with the minimum distance index.
"""

from .basis import (
    BasisSpec,
    CoefMatrix,
    SampledCurveSet,
    center_coefficients,
    center_with,
    fit_coefficients,
    fourier_basis,
    gram_matrix,
    reconstruct_curves,
)
from .estimator import FunctionalICA, IcaConfig
from .evaluation import (
    GainSummary,
    block_collapse,
    fourth_moment_rank,
    gain_summary,
    minimum_distance_index,
    select_scores,
    variance_rank,
)
from .exceptions import (
    ConvergenceWarning,
    EigenGapWarning,
    FitError,
    InputError,
    MficaError,
    NumericalError,
    RankDeficiencyError,
)
from .fpca import FpcaModel, WhitenedScores, eigenfunction_values, fpca_reduce, whiten
from .ica import (
    ScoreMatrix,
    UnmixingModel,
    component_scores,
    fit_fobi,
    fit_jade,
    fit_pca,
    fobi_matrix,
    jade_cumulant,
    unmixing_loadings,
)
from .matalg import joint_diagonalize, offdiag_objective, sym_eig, sym_inv_sqrt, sym_sqrt

__version__ = "0.1.0"
__description__ = "Independent component analysis for multivariate functional data"

__all__ = [
    # Basis fitting
    "BasisSpec",
    "CoefMatrix",
    "SampledCurveSet",
    "center_coefficients",
    "center_with",
    "fit_coefficients",
    "fourier_basis",
    "gram_matrix",
    "reconstruct_curves",
    # Linear algebra
    "joint_diagonalize",
    "offdiag_objective",
    "sym_eig",
    "sym_inv_sqrt",
    "sym_sqrt",
    # FPCA
    "FpcaModel",
    "WhitenedScores",
    "eigenfunction_values",
    "fpca_reduce",
    "whiten",
    # ICA
    "ScoreMatrix",
    "UnmixingModel",
    "component_scores",
    "fit_fobi",
    "fit_jade",
    "fit_pca",
    "fobi_matrix",
    "jade_cumulant",
    "unmixing_loadings",
    "FunctionalICA",
    "IcaConfig",
    # Evaluation
    "GainSummary",
    "block_collapse",
    "fourth_moment_rank",
    "gain_summary",
    "minimum_distance_index",
    "select_scores",
    "variance_rank",
    # Errors
    "ConvergenceWarning",
    "EigenGapWarning",
    "FitError",
    "InputError",
    "MficaError",
    "NumericalError",
    "RankDeficiencyError",
]
