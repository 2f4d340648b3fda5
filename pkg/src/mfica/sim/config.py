"""Monte-Carlo study configuration."""

import json
import os
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from dotenv import load_dotenv

from ..estimator import IcaConfig
from ..exceptions import InputError

# Load environment variables
load_dotenv()

P_COMPONENTS = 4
K_BASIS = 11
DEFAULT_SEED = 20180101
DEFAULT_REPLICATIONS = 100
FULL_GRID_LAMBDAS = (0.5, 1.0, 1.5, 2.0, 2.5)
FULL_GRID_NS = (1000, 2000, 4000, 8000, 16000, 32000, 64000)
ALL_METHODS = ("pca", "fobi", "jade")


class Setting(Enum):
    """Leading-coefficient source distributions."""
    S1 = "S1"  # uniform, gamma(3), chi-square(3), exponential(1)
    S2 = "S2"  # four uniforms


def env_seed() -> int:
    """Master seed from MFICA_SEED, falling back to the built-in default."""
    raw = os.getenv("MFICA_SEED")
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw) % 2 ** 64
    except ValueError:
        raise InputError(f"MFICA_SEED must be an integer, got {raw!r}")


def env_workers() -> int:
    """Default worker count from MFICA_WORKERS (at least 1)."""
    raw = os.getenv("MFICA_WORKERS")
    if raw is None or raw == "":
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"MFICA_WORKERS must be an integer, got {raw!r}")


@dataclass
class SimConfig(IcaConfig):
    """One cell of the simulation grid: a setting, sample size and mixing strength."""

    setting: Setting = Setting.S1
    n: int = 8000
    lambda_mix: float = 2.0
    methods: Tuple[str, ...] = ALL_METHODS
    seed: int = field(default_factory=env_seed)
    replications: int = DEFAULT_REPLICATIONS

    def __post_init__(self) -> None:
        if isinstance(self.setting, str):
            try:
                self.setting = Setting(self.setting.upper())
            except ValueError:
                raise InputError(f"unknown setting {self.setting!r}; expected S1 or S2")
        if self.d is None:
            self.d = P_COMPONENTS
        if self.d != P_COMPONENTS:
            raise InputError(f"the simulation design needs d = p = {P_COMPONENTS}, got d={self.d}")
        if self.basis_k != K_BASIS:
            raise InputError(f"the simulation design fixes K = {K_BASIS}, got {self.basis_k}")
        if not self.lambda_mix > 0:
            raise InputError(f"lambda_mix must be positive, got {self.lambda_mix}")
        if self.n < self.d + 1:
            raise InputError(f"n must be at least d + 1 = {self.d + 1}, got {self.n}")
        if self.replications < 1:
            raise InputError(f"replications must be positive, got {self.replications}")
        methods = tuple(m.lower() for m in self.methods)
        unknown = [m for m in methods if m not in ALL_METHODS]
        if unknown or not methods:
            raise InputError(f"methods must be a non-empty subset of {ALL_METHODS}, got {self.methods}")
        self.methods = methods
        if not 0 <= self.seed < 2 ** 64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def p(self) -> int:
        return P_COMPONENTS

    @property
    def key(self) -> Tuple[str, float, int]:
        return (self.setting.value, float(self.lambda_mix), int(self.n))


def expand_grid(
    settings: List[Union[str, Setting]],
    lambdas: List[float],
    ns: List[int],
    **common: Any,
) -> List[SimConfig]:
    """Cartesian product of settings, mixing strengths and sample sizes."""
    return [
        SimConfig(setting=s, lambda_mix=float(lam), n=int(n), **common)
        for s in settings
        for lam in lambdas
        for n in ns
    ]


def full_grid(
    replications: int = DEFAULT_REPLICATIONS,
    seed: Optional[int] = None,
    methods: Tuple[str, ...] = ALL_METHODS,
) -> List[SimConfig]:
    """The full study grid: 2 settings x 5 mixing strengths x 7 sample sizes."""
    return expand_grid(
        [Setting.S1, Setting.S2],
        list(FULL_GRID_LAMBDAS),
        list(FULL_GRID_NS),
        replications=replications,
        seed=env_seed() if seed is None else seed,
        methods=methods,
    )


_GRID_KEYS = {"settings", "lambdas", "ns", "setting", "lambda_mix", "n", "full_grid"}


def study_from_dict(payload: Dict[str, Any], **overrides: Any) -> List[SimConfig]:
    """Build the list of grid cells from a JSON-style document.

    Grids are given as lists (``settings``, ``lambdas``, ``ns``) or single values
    (``setting``, ``lambda_mix``, ``n``); ``"full_grid": true`` selects the full
    grid. Remaining keys are SimConfig fields shared by every cell; ``overrides`` win
    over the document.
    """
    if not isinstance(payload, dict):
        raise InputError("study config must be a JSON object")
    allowed = {f.name for f in fields(SimConfig)} - {"setting", "lambda_mix", "n"}
    common = {k: v for k, v in payload.items() if k not in _GRID_KEYS}
    unknown = sorted(set(common) - allowed)
    if unknown:
        raise InputError(f"unknown study config keys: {', '.join(unknown)}")
    if "interval" in common:
        common["interval"] = tuple(common["interval"])
    if "methods" in common:
        common["methods"] = tuple(common["methods"])
    common.update({k: v for k, v in overrides.items() if v is not None})

    if payload.get("full_grid"):
        settings: List[Any] = ["S1", "S2"]
        lambdas: List[float] = list(FULL_GRID_LAMBDAS)
        ns: List[int] = list(FULL_GRID_NS)
    else:
        settings = list(payload.get("settings", [payload.get("setting", "S1")]))
        lambdas = list(payload.get("lambdas", [payload.get("lambda_mix", 2.0)]))
        ns = list(payload.get("ns", [payload.get("n", 8000)]))
    try:
        return expand_grid(settings, lambdas, ns, **common)
    except TypeError as e:
        raise InputError(f"invalid study config: {e}")


def load_study_config(path: Union[str, Path], **overrides: Any) -> List[SimConfig]:
    """Read a study config JSON file."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"study config not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg})", line=e.lineno)
    return study_from_dict(payload, **overrides)
