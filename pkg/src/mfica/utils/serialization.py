"""Reading and writing curves, coefficients, models and tables."""

import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from ..basis import BasisSpec, CoefMatrix, SampledCurveSet
from ..exceptions import InputError
from ..ica import ScoreMatrix, UnmixingModel

PathLike = Union[str, Path]

CURVE_COLUMNS = ["obs_id", "component", "t", "value"]
FLOAT_FORMAT = "%.17g"
_COEF_HEADER = re.compile(r"^c_(\d+)_(\d+)$")


def write_table_csv(table: pd.DataFrame, path: PathLike) -> Path:
    """CSV with LF line endings and round-trip float formatting."""
    path = Path(path)
    table.to_csv(
        path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8"
    )
    return path


def write_json(payload: Dict[str, Any], path: PathLike) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def read_json(path: PathLike) -> Dict[str, Any]:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg})", line=e.lineno)


def _read_csv(path: PathLike, **kwargs: Any) -> pd.DataFrame:
    path = Path(path)
    try:
        return pd.read_csv(path, **kwargs)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    except pd.errors.EmptyDataError:
        raise InputError(f"{path}: file is empty")
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise InputError(f"{path}: malformed CSV ({e})", line=int(match.group(1)) if match else None)


def _numeric_column(frame: pd.DataFrame, name: str) -> np.ndarray:
    """Column as floats; the first unparseable or non-finite cell is reported by file line."""
    values = pd.to_numeric(frame[name], errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row = int(bad[0])
        raise InputError(f"column {name!r}: invalid value {frame[name].iloc[row]!r}", line=row + 2)
    return values


def read_curves_csv(path: PathLike) -> SampledCurveSet:
    """Long-format curves: one ``obs_id,component,t,value`` row per sample.

    Components are numbered 1..p; observations keep their order of first appearance.
    """
    frame = _read_csv(path, dtype={"obs_id": str}, keep_default_na=False)
    missing = [c for c in CURVE_COLUMNS if c not in frame.columns]
    if missing:
        raise InputError(f"{path}: missing columns {', '.join(missing)} (line 1)", line=1)
    if frame.empty:
        raise InputError(f"{path}: no data rows")

    component = _numeric_column(frame, "component")
    t = _numeric_column(frame, "t")
    value = _numeric_column(frame, "value")
    bad = np.flatnonzero((component < 1) | (component != np.round(component)))
    if bad.size:
        raise InputError(
            f"component must be a positive integer, got {frame['component'].iloc[bad[0]]!r}",
            line=int(bad[0]) + 2,
        )
    empty_ids = np.flatnonzero(frame["obs_id"].str.strip() == "")
    if empty_ids.size:
        raise InputError("obs_id is empty", line=int(empty_ids[0]) + 2)

    p = int(component.max())
    obs_ids = list(dict.fromkeys(frame["obs_id"]))
    cells = pd.DataFrame(
        {"obs_id": frame["obs_id"], "component": component.astype(int), "t": t, "value": value}
    )
    grouped = {key: group for key, group in cells.groupby(["obs_id", "component"], sort=False)}

    times: List[tuple] = []
    values: List[tuple] = []
    for obs in obs_ids:
        row_t, row_v = [], []
        for j in range(1, p + 1):
            group = grouped.get((obs, j))
            if group is None:
                raise InputError(f"{path}: observation {obs!r} has no samples for component {j}")
            row_t.append(group["t"].to_numpy(dtype=float))
            row_v.append(group["value"].to_numpy(dtype=float))
        times.append(tuple(row_t))
        values.append(tuple(row_v))
    return SampledCurveSet(obs_ids=tuple(obs_ids), p=p, times=tuple(times), values=tuple(values))


def coefficient_columns(p: int, K: int) -> List[str]:
    return [f"c_{j}_{k}" for j in range(1, p + 1) for k in range(1, K + 1)]


def write_coefficients_csv(c: CoefMatrix, path: PathLike) -> Path:
    """``obs_id, c_1_1 .. c_p_K``, one row per observation (raw, uncentered coordinates)."""
    raw = c.data + c.column_means if c.centered else c.data
    table = pd.DataFrame(raw, columns=coefficient_columns(c.p, c.K))
    table.insert(0, "obs_id", list(c.obs_ids))
    return write_table_csv(table, path)


def read_coefficients_csv(path: PathLike, K: Optional[int] = None) -> CoefMatrix:
    """Inverse of write_coefficients_csv; p and K are read from the header."""
    frame = _read_csv(path, dtype={"obs_id": str}, keep_default_na=False)
    if "obs_id" not in frame.columns:
        raise InputError(f"{path}: missing column obs_id", line=1)
    coef_cols = [c for c in frame.columns if c != "obs_id"]
    indices = []
    for name in coef_cols:
        match = _COEF_HEADER.match(str(name))
        if not match:
            raise InputError(f"{path}: unexpected column {name!r}", line=1)
        indices.append((int(match.group(1)), int(match.group(2))))
    if not indices:
        raise InputError(f"{path}: no coefficient columns", line=1)
    p = max(j for j, _ in indices)
    k_found = max(k for _, k in indices)
    if K is not None and K != k_found:
        raise InputError(f"{path}: coefficients have K={k_found}, expected K={K}", line=1)
    if [str(c) for c in coef_cols] != coefficient_columns(p, k_found):
        raise InputError(f"{path}: coefficient columns must be c_1_1 .. c_{p}_{k_found} in order", line=1)
    if frame.empty:
        raise InputError(f"{path}: no data rows")
    data = np.column_stack([_numeric_column(frame, c) for c in coef_cols])
    return CoefMatrix(data=data, p=p, K=k_found, obs_ids=tuple(frame["obs_id"]))


def write_basis_json(b: BasisSpec, path: PathLike) -> Path:
    return write_json(b.to_dict(), path)


def read_basis_json(path: PathLike) -> BasisSpec:
    payload = read_json(path)
    try:
        return BasisSpec.from_dict(payload)
    except (KeyError, TypeError) as e:
        raise InputError(f"{path}: invalid basis description ({e})")


def write_model_json(model: UnmixingModel, path: PathLike) -> Path:
    return write_json(model.to_dict(), path)


def read_model_json(path: PathLike) -> UnmixingModel:
    payload = read_json(path)
    try:
        return UnmixingModel.from_dict(payload)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: invalid model file ({e})")


def scores_table(scores: ScoreMatrix) -> pd.DataFrame:
    """``obs_id, score_1 .. score_d``; selected subsets keep their original numbers."""
    names = [f"score_{i + 1}" for i in scores.column_indices]
    table = pd.DataFrame(scores.data, columns=names)
    table.insert(0, "obs_id", list(scores.obs_ids) or [str(i) for i in range(scores.n)])
    return table


def write_scores_csv(scores: ScoreMatrix, path: PathLike) -> Path:
    return write_table_csv(scores_table(scores), path)


def read_matrix_csv(path: PathLike) -> np.ndarray:
    """Headerless numeric matrix."""
    frame = _read_csv(path, header=None)
    values = frame.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        row, col = bad[0]
        raise InputError(f"{path}: invalid number in column {col + 1}", line=int(row) + 1)
    return values
