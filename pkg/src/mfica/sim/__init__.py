"""Monte-Carlo study of separation quality under controlled mixing."""

from .config import (
    FULL_GRID_LAMBDAS,
    FULL_GRID_NS,
    Setting,
    SimConfig,
    env_seed,
    env_workers,
    expand_grid,
    load_study_config,
    full_grid,
    study_from_dict,
)
from .design import LEADING_INDICES, SOURCE_KURTOSIS, MixingSpec, gen_mixing, gen_sources, mix
from .rng import replication_key, replication_rng
from .runner import (
    RESULT_COLUMNS,
    StudyResult,
    replication_summary,
    run_replication,
    run_study,
    simulate_replication,
    summarize_study,
)

__all__ = [
    "FULL_GRID_LAMBDAS",
    "FULL_GRID_NS",
    "Setting",
    "SimConfig",
    "env_seed",
    "env_workers",
    "expand_grid",
    "load_study_config",
    "full_grid",
    "study_from_dict",
    "LEADING_INDICES",
    "SOURCE_KURTOSIS",
    "MixingSpec",
    "gen_mixing",
    "gen_sources",
    "mix",
    "replication_key",
    "replication_rng",
    "RESULT_COLUMNS",
    "StudyResult",
    "replication_summary",
    "run_replication",
    "run_study",
    "simulate_replication",
    "summarize_study",
]
