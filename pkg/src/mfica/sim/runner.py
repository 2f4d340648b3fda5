"""Seeded Monte-Carlo replications of the mixing study."""

import time
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..basis import center_coefficients
from ..evaluation import gain_summary
from ..exceptions import ConvergenceWarning, EigenGapWarning, MficaError
from ..fpca import FpcaModel, WhitenedScores, fpca_reduce, whiten
from ..ica import get_method
from ..utils.reporting import StudyLogger
from .config import ALL_METHODS, K_BASIS, P_COMPONENTS, SimConfig
from .design import MixingSpec, gen_mixing, gen_sources, mix
from .rng import replication_key, replication_rng

RESULT_COLUMNS = ["setting", "lambda", "n", "method", "replication", "mdi", "seed"]
SORT_KEYS = ["setting", "lambda", "n", "method", "replication"]


@dataclass(frozen=True, eq=False)
class StudyResult:
    """Per-replication records sorted by grid cell, plus the failed subset."""

    table: pd.DataFrame
    failures: pd.DataFrame
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failures.empty


def _record(cfg: SimConfig, method: str, rep_index: int, mdi: float, reason: str) -> Dict[str, Any]:
    return {
        "setting": cfg.setting.value,
        "lambda": float(cfg.lambda_mix),
        "n": int(cfg.n),
        "method": method,
        "replication": int(rep_index),
        "mdi": mdi,
        "seed": str(replication_key(cfg.seed, rep_index)),
        "reason": reason,
    }


def simulate_replication(
    cfg: SimConfig, rep_index: int
) -> Tuple[MixingSpec, FpcaModel, WhitenedScores]:
    """Draw one replication's data and reduce it; the stream depends only on (seed, rep_index)."""
    rng = replication_rng(cfg.seed, rep_index)
    sources = gen_sources(cfg.setting, cfg.n, rng)
    spec = gen_mixing(cfg.lambda_mix, rng)
    observed = center_coefficients(mix(sources, spec))
    fpca = fpca_reduce(observed, np.eye(K_BASIS), cfg.d, eps=cfg.rank_eps)
    return spec, fpca, whiten(observed, fpca)


def run_replication(cfg: SimConfig, rep_index: int) -> List[Dict[str, Any]]:
    """One record per method with its minimum distance index.

    Failures never raise: the record carries ``mdi = NaN`` and the reason.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EigenGapWarning)
        warnings.simplefilter("ignore", ConvergenceWarning)
        try:
            spec, _, whitened = simulate_replication(cfg, rep_index)
        except (MficaError, ValueError, np.linalg.LinAlgError) as e:
            reason = f"{type(e).__name__}: {e}"
            return [_record(cfg, m, rep_index, float("nan"), reason) for m in cfg.methods]

        records = []
        for name in cfg.methods:
            opts = {"tol": cfg.jd_tol, "max_sweeps": cfg.jd_max_sweeps} if name == "jade" else {}
            try:
                model = get_method(name, **opts).fit(whitened)
                summary = gain_summary(model.loadings, spec.omega, P_COMPONENTS, K_BASIS)
                records.append(_record(cfg, name, rep_index, summary.mdi, ""))
            except (MficaError, ValueError, np.linalg.LinAlgError) as e:
                reason = f"{type(e).__name__}: {e}"
                records.append(_record(cfg, name, rep_index, float("nan"), reason))
        return records


def _run_task(args: Tuple[SimConfig, int]) -> List[Dict[str, Any]]:
    """Worker entry point; module level so ProcessPoolExecutor can pickle it."""
    cfg, rep_index = args
    return run_replication(cfg, rep_index)


def _sorted_table(records: List[Dict[str, Any]]) -> pd.DataFrame:
    columns = RESULT_COLUMNS + ["reason"]
    table = pd.DataFrame(records, columns=columns)
    if table.empty:
        return table
    table["method"] = pd.Categorical(table["method"], categories=list(ALL_METHODS), ordered=True)
    table = table.sort_values(SORT_KEYS, kind="mergesort").reset_index(drop=True)
    table["method"] = table["method"].astype(str)
    return table


def run_study(
    grid: Sequence[SimConfig], parallelism: int = 1, verbose: bool = False
) -> StudyResult:
    """Run every replication of every grid cell.

    The returned table is sorted by (setting, lambda, n, method, replication), so its
    contents never depend on ``parallelism`` or completion order.
    """
    start = time.time()
    tasks = [(cfg, rep) for cfg in grid for rep in range(cfg.replications)]
    remaining: Dict[Tuple[str, float, int], int] = {}
    for cfg in grid:
        remaining[cfg.key] = remaining.get(cfg.key, 0) + cfg.replications
    if verbose and grid:
        StudyLogger.log_study_start(
            len(grid), max(c.replications for c in grid), parallelism, grid[0].methods
        )

    records: List[Dict[str, Any]] = []
    done_cells = 0

    def collect(cfg: SimConfig, batch: List[Dict[str, Any]]) -> None:
        nonlocal done_cells
        records.extend(batch)
        remaining[cfg.key] -= 1
        if remaining[cfg.key] == 0:
            done_cells += 1
            if verbose:
                StudyLogger.log_cell_done(*cfg.key, done_cells, len(remaining))

    if parallelism <= 1 or len(tasks) <= 1:
        for cfg, rep in tasks:
            collect(cfg, run_replication(cfg, rep))
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as executor:
            futures = {executor.submit(_run_task, task): task for task in tasks}
            for future in as_completed(futures):
                collect(futures[future][0], future.result())

    table = _sorted_table(records)
    failures = table[table["reason"] != ""].reset_index(drop=True)
    if verbose:
        StudyLogger.log_failures(failures)
    return StudyResult(table=table, failures=failures, elapsed=time.time() - start)


def summarize_study(table: pd.DataFrame) -> pd.DataFrame:
    """Mean, standard deviation and count of the index per (setting, lambda, n, method)."""
    keys = ["setting", "lambda", "n", "method"]
    columns = keys + ["mean_mdi", "sd_mdi", "count"]
    ok = table.dropna(subset=["mdi"]) if not table.empty else table
    if ok.empty:
        return pd.DataFrame(columns=columns)
    summary = (
        ok.groupby(keys, sort=False)["mdi"]
        .agg(mean_mdi="mean", sd_mdi="std", count="count")
        .reset_index()
    )
    return summary[columns]


def replication_summary(cfg: SimConfig, rep_index: int) -> Optional[Dict[str, float]]:
    """Method -> index mapping for one replication, or None if any method failed."""
    out = {}
    for rec in run_replication(cfg, rep_index):
        if rec["reason"]:
            return None
        out[rec["method"]] = rec["mdi"]
    return out
