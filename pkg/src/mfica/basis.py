"""Function bases, Gram matrices and least-squares fitting of sampled curves."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import qr, solve_triangular

from .exceptions import FitError, InputError

# Relative rank threshold on the pivoted QR diagonal.
RANK_TOL = 1e-10


class BasisKind(Enum):
    """Supported basis families."""
    FOURIER = "fourier"


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """A K-element function basis on the interval [a, b] together with its Gram matrix."""

    kind: BasisKind
    K: int
    interval: Tuple[float, float]
    gram: np.ndarray

    @property
    def length(self) -> float:
        a, b = self.interval
        return b - a

    def contains(self, t: np.ndarray) -> bool:
        """Whether every time point lies in the basis interval."""
        a, b = self.interval
        slack = 1e-12 * self.length
        t = np.asarray(t, dtype=float)
        return bool(np.all((t >= a - slack) & (t <= b + slack)))

    def to_dict(self) -> Dict[str, object]:
        """JSON-ready description of the basis."""
        return {
            "kind": self.kind.value,
            "K": self.K,
            "interval": [float(self.interval[0]), float(self.interval[1])],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, object]) -> "BasisSpec":
        kind = BasisKind(payload.get("kind", "fourier"))
        interval = payload.get("interval", [0.0, 1.0])
        if kind is BasisKind.FOURIER:
            return fourier_basis(int(payload["K"]), (float(interval[0]), float(interval[1])))
        raise InputError(f"Unsupported basis kind: {kind}")


@dataclass(frozen=True, eq=False)
class SampledCurveSet:
    """Raw observations: for observation i and component j, times and values.

    ``times[i][j]`` and ``values[i][j]`` are 1-D arrays of equal length M_ij >= 1.
    Time grids may differ between observations and between components.
    """

    obs_ids: Tuple[str, ...]
    p: int
    times: Tuple[Tuple[np.ndarray, ...], ...]
    values: Tuple[Tuple[np.ndarray, ...], ...]

    def __post_init__(self) -> None:
        if len(self.obs_ids) < 1:
            raise InputError("A curve set needs at least one observation")
        if self.p < 1:
            raise InputError("A curve set needs at least one component (p >= 1)")
        if len(self.times) != len(self.obs_ids) or len(self.values) != len(self.obs_ids):
            raise InputError("times and values must have one entry per observation")
        for i, obs in enumerate(self.obs_ids):
            if len(self.times[i]) != self.p or len(self.values[i]) != self.p:
                raise InputError(f"observation {obs!r} must have exactly p={self.p} components")
            for j in range(self.p):
                t, v = self.times[i][j], self.values[i][j]
                if t.ndim != 1 or t.shape != v.shape:
                    raise InputError(
                        f"observation {obs!r}, component {j + 1}: times and values must be "
                        "1-D arrays of equal length"
                    )
                if t.size < 1:
                    raise InputError(f"observation {obs!r}, component {j + 1}: no samples")
                if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
                    raise InputError(f"observation {obs!r}, component {j + 1}: non-finite values")

    @property
    def n(self) -> int:
        return len(self.obs_ids)

    @classmethod
    def from_lists(
        cls,
        obs_ids: Sequence[str],
        times: Sequence[Sequence[Sequence[float]]],
        values: Sequence[Sequence[Sequence[float]]],
    ) -> "SampledCurveSet":
        """Build a curve set from nested per-(i, j) sequences."""
        p = len(times[0]) if len(times) else 0
        return cls(
            obs_ids=tuple(str(o) for o in obs_ids),
            p=p,
            times=tuple(tuple(np.asarray(t, dtype=float) for t in row) for row in times),
            values=tuple(tuple(np.asarray(v, dtype=float) for v in row) for row in values),
        )

    @classmethod
    def from_grid(
        cls,
        t: Sequence[float],
        values: np.ndarray,
        obs_ids: Optional[Sequence[str]] = None,
    ) -> "SampledCurveSet":
        """Build a curve set where every curve is sampled on the same grid.

        Args:
            t: Shared time grid of length M
            values: Array of shape (n, p, M)
            obs_ids: Optional observation labels (default "0", "1", ...)
        """
        values = np.asarray(values, dtype=float)
        if values.ndim != 3:
            raise InputError("values must have shape (n, p, M)")
        n, p, m = values.shape
        grid = np.asarray(t, dtype=float)
        if grid.shape != (m,):
            raise InputError(f"time grid has length {grid.size}, expected {m}")
        ids = tuple(str(o) for o in obs_ids) if obs_ids is not None else tuple(map(str, range(n)))
        return cls(
            obs_ids=ids,
            p=p,
            times=tuple(tuple(grid for _ in range(p)) for _ in range(n)),
            values=tuple(tuple(values[i, j] for j in range(p)) for i in range(n)),
        )


@dataclass(frozen=True, eq=False)
class CoefMatrix:
    """The n x pK coordinate matrix of fitted curves, component-major columns.

    Columns j*K ... (j+1)*K - 1 (0-based) hold component j's coefficients.
    """

    data: np.ndarray
    p: int
    K: int
    centered: bool = False
    column_means: Optional[np.ndarray] = None
    obs_ids: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise InputError("coefficient data must be a 2-D array")
        if data.shape[1] != self.p * self.K:
            raise InputError(
                f"coefficient matrix has {data.shape[1]} columns, expected p*K = {self.p * self.K}"
            )
        object.__setattr__(self, "data", data)
        means = self.column_means
        means = np.zeros(data.shape[1]) if means is None else np.asarray(means, dtype=float)
        if means.shape != (data.shape[1],):
            raise InputError("column_means must have one entry per column")
        object.__setattr__(self, "column_means", means)
        if not self.obs_ids:
            object.__setattr__(self, "obs_ids", tuple(map(str, range(data.shape[0]))))
        elif len(self.obs_ids) != data.shape[0]:
            raise InputError("obs_ids must have one entry per row")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def block(self, j: int) -> np.ndarray:
        """Coefficients of component j (0-based) as an n x K array."""
        return self.data[:, j * self.K:(j + 1) * self.K]


def fourier_basis(K: int, interval: Tuple[float, float] = (0.0, 1.0)) -> BasisSpec:
    """Orthonormal Fourier basis with K (odd) functions on [a, b].

    The functions are ordered constant, sin_1, cos_1, sin_2, cos_2, ...
    """
    if not isinstance(K, (int, np.integer)) or K < 1 or K % 2 == 0:
        raise InputError(
            f"Fourier basis size K must be an odd positive integer "
            f"(constant plus sine/cosine pairs), got {K}"
        )
    a, b = float(interval[0]), float(interval[1])
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise InputError(f"basis interval must satisfy a < b, got [{a}, {b}]")
    return BasisSpec(kind=BasisKind.FOURIER, K=int(K), interval=(a, b), gram=np.eye(int(K)))


def design_matrix(b: BasisSpec, t: np.ndarray) -> np.ndarray:
    """Evaluate all basis functions at the points t; returns shape (len(t), K)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if not b.contains(t):
        lo, hi = b.interval
        raise InputError(f"time points must lie in the basis interval [{lo}, {hi}]")
    if b.kind is not BasisKind.FOURIER:
        raise InputError(f"Unsupported basis kind: {b.kind}")

    a = b.interval[0]
    length = b.length
    out = np.empty((t.size, b.K))
    out[:, 0] = 1.0 / np.sqrt(length)
    scale = np.sqrt(2.0 / length)
    phase = 2.0 * np.pi * (t - a) / length
    for k in range(1, (b.K - 1) // 2 + 1):
        out[:, 2 * k - 1] = scale * np.sin(k * phase)
        out[:, 2 * k] = scale * np.cos(k * phase)
    return out


def eval_basis(b: BasisSpec, t: float) -> np.ndarray:
    """Return (g_1(t), ..., g_K(t)) for a single time point."""
    return design_matrix(b, np.array([t]))[0]


def quadrature_gram(b: BasisSpec, quad_points: int) -> np.ndarray:
    """Gram matrix by composite trapezoid quadrature on an equispaced grid."""
    if quad_points < 2 * b.K:
        raise InputError(f"quad_points must be at least 2K = {2 * b.K}, got {quad_points}")
    grid = np.linspace(b.interval[0], b.interval[1], quad_points)
    values = design_matrix(b, grid)
    products = values[:, :, None] * values[:, None, :]
    gram = trapezoid(products, grid, axis=0)
    return (gram + gram.T) / 2.0


def gram_matrix(b: BasisSpec, quad_points: int, analytic: bool = True) -> np.ndarray:
    """K x K Gram matrix of the basis.

    For the orthonormal Fourier basis the analytic identity is returned unless
    ``analytic`` is False, in which case trapezoid quadrature is used.
    """
    if quad_points < 2 * b.K:
        raise InputError(f"quad_points must be at least 2K = {2 * b.K}, got {quad_points}")
    if analytic and b.kind is BasisKind.FOURIER:
        return np.eye(b.K)
    return quadrature_gram(b, quad_points)


def _solve_cell(
    design: np.ndarray, y: np.ndarray, ridge: float, cell: Tuple[str, int]
) -> np.ndarray:
    m, k = design.shape
    if ridge > 0.0:
        design = np.vstack([design, np.sqrt(ridge) * np.eye(k)])
        y = np.concatenate([y, np.zeros(k)])
    elif m < k:
        raise FitError(f"{m} samples but the basis has K={k} functions", cell)

    q, r, piv = qr(design, mode="economic", pivoting=True)
    col_norm = np.linalg.norm(design, axis=0).max()
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > RANK_TOL * col_norm))
    if rank < k:
        raise FitError(f"design matrix has rank {rank} < K={k}", cell)

    coef = np.empty(k)
    coef[piv] = solve_triangular(r, q.T @ y)
    return coef


def fit_coefficients(
    curves: SampledCurveSet, b: BasisSpec, ridge: float = 0.0
) -> CoefMatrix:
    """Least-squares basis coordinates of every (observation, component) curve.

    Args:
        curves: Observed curves; every time point must lie in the basis interval
        b: Basis to fit
        ridge: Optional ridge penalty (default 0: plain least squares)

    Returns:
        Uncentered coefficient matrix of shape (n, p*K)

    Raises:
        FitError: If a cell has fewer than K samples or a rank-deficient design
    """
    if ridge < 0.0:
        raise InputError(f"ridge must be non-negative, got {ridge}")
    data = np.empty((curves.n, curves.p * b.K))
    designs: Dict[bytes, np.ndarray] = {}
    for i, obs in enumerate(curves.obs_ids):
        for j in range(curves.p):
            t = curves.times[i][j]
            if not b.contains(t):
                lo, hi = b.interval
                raise InputError(
                    f"observation {obs!r}, component {j + 1}: time points outside [{lo}, {hi}]"
                )
            key = t.tobytes()
            design = designs.get(key)
            if design is None:
                design = design_matrix(b, t)
                designs[key] = design
            data[i, j * b.K:(j + 1) * b.K] = _solve_cell(
                design, curves.values[i][j], ridge, (obs, j + 1)
            )
    return CoefMatrix(data=data, p=curves.p, K=b.K, obs_ids=curves.obs_ids)


def underdetermined_cells(curves: SampledCurveSet, K: int) -> List[Tuple[str, int]]:
    """(obs_id, component) cells with fewer than K samples; components are 1-based."""
    return [
        (obs, j + 1)
        for i, obs in enumerate(curves.obs_ids)
        for j in range(curves.p)
        if curves.times[i][j].size < K
    ]


def center_coefficients(c: CoefMatrix) -> CoefMatrix:
    """Subtract column means; the total removed offset is kept in column_means."""
    if c.n < 2:
        raise InputError(f"centering needs at least 2 observations, got {c.n}")
    means = c.data.mean(axis=0)
    return replace(
        c,
        data=c.data - means,
        centered=True,
        column_means=c.column_means + means,
    )


def center_with(c: CoefMatrix, means: np.ndarray) -> CoefMatrix:
    """Center new data with externally supplied (training) column means."""
    means = np.asarray(means, dtype=float)
    if means.shape != (c.data.shape[1],):
        raise InputError(
            f"centering means have length {means.size}, expected {c.data.shape[1]}"
        )
    raw = c.data + c.column_means if c.centered else c.data
    return replace(c, data=raw - means, centered=True, column_means=means.copy())


def reconstruct_curves(coefs: np.ndarray, b: BasisSpec, t: np.ndarray) -> np.ndarray:
    """Evaluate the p component functions encoded by one pK coefficient row.

    Returns an array of shape (p, len(t)).
    """
    coefs = np.asarray(coefs, dtype=float)
    if coefs.ndim != 1 or coefs.size % b.K != 0:
        raise InputError(f"coefficient row length {coefs.size} is not a multiple of K={b.K}")
    design = design_matrix(b, t)
    return coefs.reshape(-1, b.K) @ design.T
