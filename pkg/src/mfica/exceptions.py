"""Exception and warning types raised by mfica."""

from typing import Optional, Sequence, Tuple

import numpy as np


class MficaError(Exception):
    """Base class for all mfica errors."""


class InputError(MficaError, ValueError):
    """Invalid input: bad shapes, parameters or malformed files.

    Args:
        message: Human-readable description naming the offending input
        line: 1-based line number in the source file, when the input came from one
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(MficaError, ArithmeticError):
    """A numerical step could not be carried out."""


class RankDeficiencyError(NumericalError):
    """The effective rank of a covariance is below the requested dimension."""

    def __init__(self, message: str, spectrum: Sequence[float], eps: float):
        self.spectrum = np.asarray(spectrum, dtype=float)
        self.eps = float(eps)
        shown = ", ".join(f"{v:.6g}" for v in self.spectrum[:12])
        if self.spectrum.size > 12:
            shown += ", ..."
        super().__init__(f"{message} (eps={self.eps:.3g}; spectrum: [{shown}])")


class FitError(NumericalError):
    """A least-squares cell is underdetermined or rank deficient."""

    def __init__(self, message: str, cell: Tuple[str, int]):
        self.cell = cell
        super().__init__(f"observation {cell[0]!r}, component {cell[1]}: {message}")


class EigenGapWarning(UserWarning):
    """Eigenvalues are (nearly) tied, so the associated eigenvectors are unstable."""


class ConvergenceWarning(UserWarning):
    """An iterative procedure stopped before meeting its tolerance."""
