"""Tests for the mfica command-line interface."""

import json

import numpy as np
import pandas as pd
import pytest

from mfica import FunctionalICA, IcaConfig
from mfica.basis import fourier_basis, reconstruct_curves
from mfica.cli import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, main
from mfica.utils.serialization import read_coefficients_csv

pytestmark = pytest.mark.integration


def write_toy_curves(path, n=40, p=3, K=5, seed=0):
    """Long-format curves built from known coefficients; returns the coefficients."""
    rng = np.random.default_rng(seed)
    basis = fourier_basis(K)
    coefs = rng.laplace(size=(n, p * K))
    t = np.linspace(0.0, 1.0, 12)
    rows = []
    for i, row in enumerate(coefs):
        values = reconstruct_curves(row, basis, t)
        for j in range(p):
            for tt, v in zip(t, values[j]):
                rows.append({"obs_id": f"obs{i}", "component": j + 1, "t": tt, "value": v})
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.17g")
    return coefs


def test_fit_writes_coefficients_and_basis(tmp_path):
    """Test a 3-component toy file with K=5 gives 15 coefficient columns."""
    curves = tmp_path / "curves.csv"
    truth = write_toy_curves(curves)
    out = tmp_path / "out"
    assert main(["fit", "--input", str(curves), "--output-dir", str(out), "--basis-k", "5"]) == EXIT_OK
    table = pd.read_csv(out / "coefficients.csv")
    assert list(table.columns)[:3] == ["obs_id", "c_1_1", "c_1_2"]
    assert table.shape == (40, 16)
    assert np.max(np.abs(table.iloc[:, 1:].to_numpy() - truth)) < 1e-8
    basis = json.loads((out / "basis.json").read_text(encoding="utf-8"))
    assert basis == {"kind": "fourier", "K": 5, "interval": [0.0, 1.0]}


def test_fit_ica_scores_pipeline(tmp_path):
    """Test the CLI pipeline equals calling the library directly."""
    curves = tmp_path / "curves.csv"
    write_toy_curves(curves)
    out = tmp_path / "out"
    assert main(["fit", "--input", str(curves), "--output-dir", str(out), "--basis-k", "5"]) == EXIT_OK
    coef_file = str(out / "coefficients.csv")
    assert main([
        "ica", "--input", coef_file, "--basis", str(out / "basis.json"),
        "--output-dir", str(out), "--method", "fobi",
    ]) == EXIT_OK

    loadings = pd.read_csv(out / "loadings.csv")
    assert len(loadings) == 3 * 3 * 5
    model = json.loads((out / "model.json").read_text(encoding="utf-8"))
    assert model["method"] == "fobi" and model["d"] == 3

    direct = FunctionalICA(IcaConfig(basis_k=5, method="fobi")).fit_transform(
        read_coefficients_csv(coef_file)
    )
    written = pd.read_csv(out / "scores.csv")
    assert list(written.columns) == ["obs_id", "score_1", "score_2", "score_3"]
    assert np.allclose(written.iloc[:, 1:].to_numpy(), direct.data, rtol=0, atol=1e-10)

    applied = tmp_path / "applied"
    assert main([
        "scores", "--input", coef_file, "--model", str(out / "model.json"),
        "--output-dir", str(applied), "--select", "2",
    ]) == EXIT_OK
    selected = pd.read_csv(applied / "scores.csv")
    assert selected.shape == (40, 3)
    for name in selected.columns[1:]:
        assert np.allclose(selected[name], written[name], rtol=0, atol=1e-10)


def test_model_basis_recorded_only_when_known(tmp_path):
    """Test the model keeps the fit interval with --basis and omits the basis without it."""
    curves = tmp_path / "curves.csv"
    write_toy_curves(curves, seed=2)
    out = tmp_path / "out"
    assert main([
        "fit", "--input", str(curves), "--output-dir", str(out),
        "--basis-k", "5", "--interval", "0", "2",
    ]) == EXIT_OK
    coef_file = str(out / "coefficients.csv")
    known, unknown = tmp_path / "known", tmp_path / "unknown"
    assert main([
        "ica", "--input", coef_file, "--basis", str(out / "basis.json"), "--output-dir", str(known),
    ]) == EXIT_OK
    assert main(["ica", "--input", coef_file, "--output-dir", str(unknown)]) == EXIT_OK

    with_basis = json.loads((known / "model.json").read_text(encoding="utf-8"))
    assert with_basis["fpca"]["basis"]["interval"] == [0.0, 2.0]
    without_basis = json.loads((unknown / "model.json").read_text(encoding="utf-8"))
    assert "basis" not in without_basis["fpca"]
    assert main([
        "scores", "--input", coef_file, "--model", str(unknown / "model.json"),
        "--output-dir", str(tmp_path / "applied"),
    ]) == EXIT_OK


def test_ica_is_byte_stable(tmp_path):
    curves = tmp_path / "curves.csv"
    write_toy_curves(curves, seed=1)
    main(["fit", "--input", str(curves), "--output-dir", str(tmp_path), "--basis-k", "5"])
    coef_file = str(tmp_path / "coefficients.csv")
    for name in ("a", "b"):
        assert main(["ica", "--input", coef_file, "--output-dir", str(tmp_path / name)]) == EXIT_OK
    for artifact in ("model.json", "loadings.csv", "scores.csv"):
        assert (tmp_path / "a" / artifact).read_bytes() == (tmp_path / "b" / artifact).read_bytes()


def test_malformed_row_cites_line(tmp_path, capsys):
    curves = tmp_path / "curves.csv"
    curves.write_text(
        "obs_id,component,t,value\na,1,0.0,1.0\na,1,0.5,2.0\na,1,0.7,abc\n", encoding="utf-8"
    )
    assert main(["fit", "--input", str(curves), "--output-dir", str(tmp_path)]) == EXIT_INPUT
    assert "line 4" in capsys.readouterr().err


def test_underdetermined_cells_listed(tmp_path, capsys):
    curves = tmp_path / "curves.csv"
    curves.write_text(
        "obs_id,component,t,value\na,1,0.0,1.0\na,1,0.5,2.0\n", encoding="utf-8"
    )
    code = main(["fit", "--input", str(curves), "--output-dir", str(tmp_path), "--basis-k", "3"])
    assert code == EXIT_INPUT
    assert "a component 1" in capsys.readouterr().err


def test_missing_input(tmp_path, capsys):
    assert main(["fit", "--input", str(tmp_path / "nope.csv")]) == EXIT_INPUT
    assert "file not found" in capsys.readouterr().err
    assert main(["ica", "--output-dir", str(tmp_path)]) == EXIT_INPUT


def test_mdi_command(tmp_path, capsys):
    square = tmp_path / "ones.csv"
    square.write_text("1,1\n1,1\n", encoding="utf-8")
    assert main(["mdi", "--input", str(square)]) == EXIT_OK
    assert float(capsys.readouterr().out) == pytest.approx(1.0)

    gain = tmp_path / "gain.csv"
    gain.write_text("3,4,0,0\n0,0,0,-2\n", encoding="utf-8")
    assert main(["mdi", "--input", str(gain), "--basis-k", "2"]) == EXIT_OK
    assert float(capsys.readouterr().out) == 0.0

    assert main(["mdi", "--input", str(gain), "--basis-k", "3"]) == EXIT_INPUT
    assert main(["mdi", "--input", str(gain)]) == EXIT_INPUT


def write_study(path, **extra):
    payload = {"setting": "S1", "n": 200, "lambda_mix": 2.0, "replications": 2,
               "methods": ["pca", "jade"]}
    payload.update(extra)
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_simulate_writes_results(tmp_path):
    config = write_study(tmp_path / "study.json")
    out = tmp_path / "study"
    assert main(["simulate", "--config", config, "--output-dir", str(out), "--seed", "5"]) == EXIT_OK
    results = pd.read_csv(out / "results.csv", dtype={"seed": str})
    assert list(results.columns) == ["setting", "lambda", "n", "method", "replication", "mdi", "seed"]
    assert len(results) == 4
    summary = pd.read_csv(out / "summary.csv")
    assert summary["mean_mdi"].between(0.0, 1.0).all()
    assert not (out / "failures.csv").exists()


def test_simulate_bytes_independent_of_workers(tmp_path):
    """Test a fixed seed gives identical CSV bytes for one and several workers."""
    config = write_study(tmp_path / "study.json", replications=3)
    for workers in ("1", "8"):
        assert main([
            "simulate", "--config", config, "--output-dir", str(tmp_path / workers),
            "--seed", "11", "--workers", workers,
        ]) == EXIT_OK
    for name in ("results.csv", "summary.csv"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "8" / name).read_bytes()


def test_simulate_failures_exit_numerical(tmp_path):
    config = write_study(tmp_path / "study.json", rank_eps=1e9, replications=1)
    out = tmp_path / "failed"
    assert main(["simulate", "--config", config, "--output-dir", str(out), "--seed", "1"]) == EXIT_NUMERICAL
    failures = pd.read_csv(out / "failures.csv")
    assert len(failures) == 2
    assert failures["reason"].str.contains("RankDeficiencyError").all()


def test_simulate_bad_config(tmp_path):
    config = tmp_path / "study.json"
    config.write_text('{"setting": "S1", "colour": 1}', encoding="utf-8")
    assert main(["simulate", "--config", str(config), "--output-dir", str(tmp_path)]) == EXIT_INPUT


def test_version_and_no_command(capsys):
    assert main(["version"]) == EXIT_OK
    assert "mfica 0.1.0" in capsys.readouterr().out
    assert main([]) == EXIT_INPUT


if __name__ == "__main__":
    pytest.main([__file__])
