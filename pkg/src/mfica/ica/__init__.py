"""Rotation estimators and unmixing models."""

from typing import Dict, Type

from ..exceptions import InputError
from .base import (
    CumulantMatrix,
    IcaMethod,
    RotationEstimate,
    RotationMethod,
    ScoreMatrix,
    UnmixingModel,
    build_model,
    component_scores,
    excess_kurtosis,
    unmixing_loadings,
)
from .cumulants import fobi_matrix, jade_cumulant, jade_cumulants
from .fobi import FobiMethod, fit_fobi
from .jade import JadeMethod, fit_jade
from .pca import PcaMethod, fit_pca

METHODS: Dict[str, Type[RotationMethod]] = {
    "pca": PcaMethod,
    "fobi": FobiMethod,
    "jade": JadeMethod,
}


def get_method(name: str, **kwargs) -> RotationMethod:
    """Instantiate a rotation method by name (case-insensitive)."""
    key = str(name).lower()
    if key not in METHODS:
        raise InputError(f"unknown method {name!r}; expected one of {', '.join(METHODS)}")
    return METHODS[key](**kwargs)


__all__ = [
    "CumulantMatrix",
    "IcaMethod",
    "RotationEstimate",
    "RotationMethod",
    "ScoreMatrix",
    "UnmixingModel",
    "build_model",
    "component_scores",
    "excess_kurtosis",
    "unmixing_loadings",
    "fobi_matrix",
    "jade_cumulant",
    "jade_cumulants",
    "FobiMethod",
    "JadeMethod",
    "PcaMethod",
    "fit_fobi",
    "fit_jade",
    "fit_pca",
    "METHODS",
    "get_method",
]
