"""Tests for the CSV and JSON readers and writers."""

import numpy as np
import pytest

from mfica.basis import CoefMatrix, center_coefficients, fourier_basis
from mfica.exceptions import InputError
from mfica.ica import IcaMethod, ScoreMatrix
from mfica.utils.serialization import (
    coefficient_columns,
    read_basis_json,
    read_coefficients_csv,
    read_curves_csv,
    read_matrix_csv,
    write_basis_json,
    write_coefficients_csv,
    write_scores_csv,
)


def test_read_curves_keeps_first_appearance_order(tmp_path):
    path = tmp_path / "curves.csv"
    path.write_text(
        "obs_id,component,t,value\n"
        "b,2,0.5,4.0\nb,1,0.0,1.0\na,1,0.1,2.0\na,2,0.2,3.0\nb,1,0.3,5.0\n",
        encoding="utf-8",
    )
    curves = read_curves_csv(path)
    assert curves.obs_ids == ("b", "a")
    assert curves.p == 2
    assert np.array_equal(curves.times[0][0], [0.0, 0.3])
    assert np.array_equal(curves.values[0][0], [1.0, 5.0])
    assert np.array_equal(curves.values[1][1], [3.0])


def test_read_curves_errors(tmp_path):
    """Test missing columns, components and bad numbers are reported."""
    path = tmp_path / "curves.csv"
    path.write_text("obs_id,component,t\na,1,0.0\n", encoding="utf-8")
    with pytest.raises(InputError, match="missing columns value"):
        read_curves_csv(path)

    path.write_text("obs_id,component,t,value\na,1,0.0,1.0\nb,2,0.0,1.0\n", encoding="utf-8")
    with pytest.raises(InputError, match="'a' has no samples for component 2"):
        read_curves_csv(path)

    path.write_text("obs_id,component,t,value\na,0,0.0,1.0\n", encoding="utf-8")
    with pytest.raises(InputError, match="positive integer") as info:
        read_curves_csv(path)
    assert info.value.line == 2

    path.write_text("", encoding="utf-8")
    with pytest.raises(InputError, match="empty"):
        read_curves_csv(path)


def test_coefficients_written_raw(tmp_path):
    """Test centered coefficients are written in raw coordinates."""
    rng = np.random.default_rng(0)
    raw = rng.standard_normal((4, 6)) + 3.0
    c = center_coefficients(CoefMatrix(data=raw, p=2, K=3, obs_ids=("w", "x", "y", "z")))
    path = write_coefficients_csv(c, tmp_path / "coefficients.csv")
    back = read_coefficients_csv(path, K=3)
    assert back.obs_ids == ("w", "x", "y", "z")
    assert not back.centered
    assert np.allclose(back.data, raw, rtol=0, atol=1e-14)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "obs_id," + ",".join(
        coefficient_columns(2, 3)
    )
    with pytest.raises(InputError, match="expected K=5"):
        read_coefficients_csv(path, K=5)


def test_coefficient_header_checked(tmp_path):
    path = tmp_path / "coefficients.csv"
    path.write_text("obs_id,c_1_2,c_1_1\na,1,2\n", encoding="utf-8")
    with pytest.raises(InputError, match="in order"):
        read_coefficients_csv(path)
    path.write_text("obs_id,x\na,1\n", encoding="utf-8")
    with pytest.raises(InputError, match="unexpected column"):
        read_coefficients_csv(path)


def test_basis_json(tmp_path):
    path = write_basis_json(fourier_basis(7, (0.0, 2.0)), tmp_path / "basis.json")
    basis = read_basis_json(path)
    assert basis.K == 7 and basis.interval == (0.0, 2.0)
    assert path.read_text(encoding="utf-8").endswith("}\n")
    path.write_text("{}", encoding="utf-8")
    with pytest.raises(InputError, match="invalid basis"):
        read_basis_json(path)


def test_scores_csv_uses_original_numbers(tmp_path):
    scores = ScoreMatrix(
        data=np.array([[0.5, 1.0], [0.25, -1.0]]),
        method=IcaMethod.JADE,
        obs_ids=("p", "q"),
        columns=np.array([2, 0]),
    )
    text = write_scores_csv(scores, tmp_path / "scores.csv").read_bytes()
    assert text == b"obs_id,score_3,score_1\np,0.5,1\nq,0.25,-1\n"


def test_read_matrix_csv(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,2\n3,x\n", encoding="utf-8")
    with pytest.raises(InputError, match="line 2"):
        read_matrix_csv(path)
    path.write_text("1,2\n3,4\n", encoding="utf-8")
    assert np.array_equal(read_matrix_csv(path), [[1.0, 2.0], [3.0, 4.0]])


if __name__ == "__main__":
    pytest.main([__file__])
