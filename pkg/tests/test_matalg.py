"""Tests for symmetric eigensolvers, square roots and joint diagonalization."""

import warnings

import numpy as np
import pytest
from scipy.stats import ortho_group

from mfica.exceptions import ConvergenceWarning, EigenGapWarning, InputError, RankDeficiencyError
from mfica.matalg import (
    joint_diagonalize,
    offdiag_objective,
    sign_normalize,
    sym_eig,
    sym_inv_sqrt,
    sym_sqrt,
)


def random_spd(rng, m):
    a = rng.standard_normal((m, m))
    return a @ a.T + m * np.eye(m)


def is_signed_permutation(M, atol):
    A = np.abs(M)
    return bool(
        np.allclose(np.sort(A, axis=0)[-1], 1.0, atol=atol)
        and np.allclose(A.sum(axis=0), 1.0, atol=atol)
        and np.allclose(A.sum(axis=1), 1.0, atol=atol)
    )


def test_sym_eig_diagonal():
    """Test sorting of a diagonal matrix."""
    eig = sym_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(eig.values, [3.0, 2.0, 1.0])
    assert np.allclose(eig.vectors, np.eye(3)[:, [0, 2, 1]])
    assert eig.source_dim == 3


def test_sym_eig_identity_ties():
    eig = sym_eig(np.eye(4))
    assert np.allclose(eig.values, 1.0)
    assert eig.has_ties
    assert np.allclose(eig.vectors, np.eye(4))
    with pytest.warns(EigenGapWarning):
        sym_eig(np.eye(4), warn_ties=True)


def test_sym_eig_reconstruction_and_conventions():
    """Test orthogonality, reconstruction and the sign convention."""
    rng = np.random.default_rng(0)
    S = random_spd(rng, 6)
    eig = sym_eig(S)
    V, lam = eig.vectors, eig.values
    assert np.all(np.diff(lam) <= 0)
    assert np.max(np.abs(V.T @ V - np.eye(6))) < 1e-10
    assert np.max(np.abs(V @ np.diag(lam) @ V.T - S)) < 1e-8 * np.max(np.abs(S))
    pivots = np.argmax(np.abs(V), axis=0)
    assert np.all(V[pivots, np.arange(6)] > 0)


def test_sym_eig_deterministic():
    rng = np.random.default_rng(1)
    S = random_spd(rng, 5)
    first, second = sym_eig(S), sym_eig(S)
    assert np.array_equal(first.values, second.values)
    assert np.array_equal(first.vectors, second.vectors)


def test_sym_eig_rejects_bad_input():
    with pytest.raises(InputError, match="non-finite"):
        sym_eig(np.array([[1.0, np.inf], [np.inf, 1.0]]))
    with pytest.raises(InputError, match="not symmetric"):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InputError, match="square"):
        sym_eig(np.ones((2, 3)))


def test_sign_normalize_ties_lowest_index():
    v = np.array([[-1.0], [1.0]])
    assert np.array_equal(sign_normalize(v), np.array([[1.0], [-1.0]]))


def test_sym_sqrt_squares_back():
    rng = np.random.default_rng(2)
    S = random_spd(rng, 4)
    R = sym_sqrt(S)
    assert np.allclose(R, R.T)
    assert np.max(np.abs(R @ R - S)) < 1e-10 * np.max(np.abs(S))


def test_sym_inv_sqrt_examples():
    """Test the identity and diagonal cases."""
    assert np.allclose(sym_inv_sqrt(np.eye(3), 3, 1e-12), np.eye(3))
    assert np.allclose(sym_inv_sqrt(np.diag([4.0, 1.0]), 2, 1e-12), np.diag([0.5, 1.0]))


def test_sym_inv_sqrt_top_projector():
    """Test that M S M is the projector onto the top-d eigenspace."""
    rng = np.random.default_rng(3)
    S = random_spd(rng, 5)
    M = sym_inv_sqrt(S, 3, 1e-12)
    top = sym_eig(S).vectors[:, :3]
    assert np.max(np.abs(M @ S @ M - top @ top.T)) < 1e-8


def test_sym_inv_sqrt_rank_deficiency():
    """Test that a small d-th eigenvalue is reported with lambda_d and eps."""
    with pytest.raises(RankDeficiencyError, match="effective rank below d") as info:
        sym_inv_sqrt(np.diag([1.0, 1e-14, 0.0]), 2, 1e-10)
    assert info.value.eps == 1e-10
    assert info.value.spectrum[0] == 1.0


def test_offdiag_objective_examples():
    assert offdiag_objective([np.diag([2.0, 3.0])], np.eye(2)) == pytest.approx(13.0)
    c = np.sqrt(0.5)
    rot = np.array([[c, -c], [c, c]])
    assert offdiag_objective([np.diag([1.0, -1.0])], rot) == pytest.approx(0.0, abs=1e-15)


def test_offdiag_objective_column_invariance():
    rng = np.random.default_rng(4)
    mats = [random_spd(rng, 4) for _ in range(3)]
    Q = ortho_group.rvs(4, random_state=5)
    flipped = Q[:, [2, 0, 3, 1]] * np.array([1.0, -1.0, -1.0, 1.0])
    assert offdiag_objective(mats, flipped) == pytest.approx(offdiag_objective(mats, Q), rel=1e-12)
    with pytest.raises(InputError):
        offdiag_objective(mats, np.eye(3))


def test_joint_diagonalize_single_diagonal():
    """Test a single diagonal matrix is left alone."""
    D = np.diag([1.0, 4.0, -2.0])
    result = joint_diagonalize([D])
    assert result.converged
    assert is_signed_permutation(result.rotation, 1e-12)
    assert result.objective == pytest.approx(1.0 + 16.0 + 4.0)


def test_joint_diagonalize_recovers_rotation():
    """Test recovery of a random orthogonal Q from 5 conjugated diagonal matrices."""
    rng = np.random.default_rng(6)
    Q = ortho_group.rvs(6, random_state=7)
    diags = [rng.standard_normal(6) for _ in range(5)]
    mats = [Q @ np.diag(d) @ Q.T for d in diags]
    result = joint_diagonalize(mats)
    assert result.converged
    assert np.max(np.abs(result.rotation.T @ result.rotation - np.eye(6))) < 1e-10
    assert is_signed_permutation(result.rotation.T @ Q, 1e-6)
    total = sum(np.sum(m ** 2) for m in mats)
    assert result.objective == pytest.approx(total, abs=1e-8)
    assert offdiag_objective(mats, result.rotation) == pytest.approx(result.objective, abs=1e-9)


def test_joint_diagonalize_bound_and_monotone():
    """Test the objective never decreases and never exceeds the summed squared norms."""
    rng = np.random.default_rng(8)
    mats = [random_spd(rng, 5) for _ in range(4)]
    result = joint_diagonalize(mats)
    history = np.array(result.objective_history)
    assert np.all(np.diff(history) >= -1e-9)
    assert result.objective <= sum(np.sum(m ** 2) for m in mats) + 1e-9
    contributions = result.column_contributions
    assert np.all(np.diff(contributions) <= 0)
    assert contributions.sum() == pytest.approx(result.objective, rel=1e-12)


def test_joint_diagonalize_non_convergence_is_reported():
    rng = np.random.default_rng(9)
    mats = [random_spd(rng, 5) for _ in range(4)]
    with pytest.warns(ConvergenceWarning):
        result = joint_diagonalize(mats, tol=0.0, max_sweeps=1)
    assert not result.converged
    assert result.sweeps == 1


def test_joint_diagonalize_rejects_bad_input():
    with pytest.raises(InputError, match="d >= 2"):
        joint_diagonalize([np.eye(1)])
    with pytest.raises(InputError, match="at least one"):
        joint_diagonalize(np.zeros((0, 3, 3)))
    with pytest.raises(InputError, match="not symmetric"):
        joint_diagonalize([np.array([[1.0, 1.0], [0.0, 1.0]])])


def test_joint_diagonalize_silent_on_success():
    rng = np.random.default_rng(10)
    Q = ortho_group.rvs(3, random_state=11)
    mats = [Q @ np.diag(rng.standard_normal(3)) @ Q.T for _ in range(3)]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        joint_diagonalize(mats)


if __name__ == "__main__":
    pytest.main([__file__])
