"""Latent coefficients and the mixing matrix of the simulation design."""

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from ..basis import CoefMatrix
from ..exceptions import InputError
from ..matalg import sym_sqrt
from .config import K_BASIS, P_COMPONENTS, Setting
from .rng import standard_chisquare3, standard_exponential, standard_gamma3, standard_uniform

Sampler = Callable[[np.random.Generator, int], np.ndarray]

SOURCES: Dict[Setting, Tuple[Sampler, ...]] = {
    Setting.S1: (standard_uniform, standard_gamma3, standard_chisquare3, standard_exponential),
    Setting.S2: (standard_uniform,) * 4,
}

# Population excess kurtoses of the leading coefficients.
SOURCE_KURTOSIS: Dict[Setting, Tuple[float, ...]] = {
    Setting.S1: (-1.2, 2.0, 4.0, 6.0),
    Setting.S2: (-1.2, -1.2, -1.2, -1.2),
}

# 0-based positions of each component's leading (constant) coefficient.
LEADING_INDICES: Tuple[int, ...] = tuple(j * K_BASIS for j in range(P_COMPONENTS))


@dataclass(frozen=True, eq=False)
class MixingSpec:
    """Omega acts as B_4^{1/2} on the leading coefficients and as the identity elsewhere."""

    omega: np.ndarray
    b_sqrt: np.ndarray
    leading_indices: Tuple[int, ...]
    lambda_mix: float

    @property
    def b4(self) -> np.ndarray:
        return self.b_sqrt @ self.b_sqrt.T


def gen_sources(setting: Setting, n: int, rng: np.random.Generator) -> CoefMatrix:
    """Draw n latent coefficient rows of length p*K.

    Draw order: first the full n x 44 standard normal block (row-major), then the
    four leading columns in component order, which overwrite their normal draws.
    """
    setting = Setting(setting)
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    data = rng.standard_normal((n, P_COMPONENTS * K_BASIS))
    for col, sampler in zip(LEADING_INDICES, SOURCES[setting]):
        data[:, col] = sampler(rng, n)
    return CoefMatrix(data=data, p=P_COMPONENTS, K=K_BASIS)


def gen_mixing(lambda_mix: float, rng: np.random.Generator) -> MixingSpec:
    """B_4 = A A^T + lambda I with standard normal A, routed to the leading coefficients."""
    if not lambda_mix > 0:
        raise InputError(f"lambda_mix must be positive, got {lambda_mix}")
    A = rng.standard_normal((P_COMPONENTS, P_COMPONENTS))
    b4 = A @ A.T + lambda_mix * np.eye(P_COMPONENTS)
    b_sqrt = sym_sqrt((b4 + b4.T) / 2.0)
    omega = np.eye(P_COMPONENTS * K_BASIS)
    idx = np.asarray(LEADING_INDICES)
    omega[np.ix_(idx, idx)] = b_sqrt
    return MixingSpec(
        omega=omega,
        b_sqrt=b_sqrt,
        leading_indices=LEADING_INDICES,
        lambda_mix=float(lambda_mix),
    )


def mix(z: CoefMatrix, spec: MixingSpec) -> CoefMatrix:
    """Observed coefficients X = Z Omega^T."""
    return CoefMatrix(data=z.data @ spec.omega.T, p=z.p, K=z.K, obs_ids=z.obs_ids)
