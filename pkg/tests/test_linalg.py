import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nesslab import linalg
from nesslab.errors import DimensionMismatch, NonHermitianInput, NotPSD, OverflowRisk
from nesslab.models import SIGMA1, SIGMA2, SIGMA3, xy_isotropic
from oracles import random_hermitian


def test_eigh_diagonal():
    w, U = linalg.eigh(SIGMA3)
    np.testing.assert_allclose(w, [-1, 1])
    np.testing.assert_allclose(np.abs(U), [[0, 1], [1, 0]], atol=1e-15)


def test_eigh_sigma1_vectors():
    w, U = linalg.eigh(SIGMA1)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    assert abs(abs(np.vdot(minus, U[:, 0])) - 1) < 1e-14
    assert abs(abs(np.vdot(plus, U[:, 1])) - 1) < 1e-14


def test_eigh_xy_isotropic():
    w, _ = linalg.eigh(xy_isotropic().H)
    np.testing.assert_allclose(w, [-1, -1, 1, 1], atol=1e-14)


@pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
def test_eigh_invariants_random(rng, d):
    for _ in range(5):
        M = random_hermitian(rng, d)
        w, U = linalg.eigh(M)
        assert np.all(np.diff(w) >= 0)
        scale = 1 + np.linalg.norm(M)
        assert np.linalg.norm((U * w) @ U.conj().T - M) <= 1e-12 * scale
        assert np.linalg.norm(U.conj().T @ U - np.eye(d)) <= 1e-12
        np.testing.assert_allclose(w, np.linalg.eigvalsh(M), atol=1e-12 * scale)


def test_eigh_degenerate_and_complex_phases(rng):
    U0 = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    M = U0 @ np.diag([2.0, 2.0, -1.0, 0.5]) @ U0.conj().T
    w, U = linalg.eigh(M)
    np.testing.assert_allclose(w, [-1, 0.5, 2, 2], atol=1e-13)
    assert np.linalg.norm((U * w) @ U.conj().T - M) < 1e-12


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        linalg.eigh(np.array([[0, 1], [0, 0]]))


def test_eigh_symmetrizes_tiny_asymmetry():
    M = SIGMA2 + 1e-13 * np.array([[0, 1], [0, 0]])
    w, _ = linalg.eigh(M)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-12)


def test_null_space_examples():
    zero = linalg.svd_null_space(np.zeros((2, 2)))
    assert len(zero) == 2
    assert linalg.svd_null_space(np.eye(2)) == []
    (v,) = linalg.svd_null_space(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(np.abs(v), [0, 1], atol=1e-15)


@pytest.mark.parametrize("d,rank", [(3, 1), (4, 2), (6, 5), (8, 3)])
def test_null_space_of_projected_matrices(rng, d, rank):
    B = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    C = rng.normal(size=(rank, d)) + 1j * rng.normal(size=(rank, d))
    A = B @ C
    vs = linalg.svd_null_space(A, 1e-9)
    assert len(vs) == d - rank
    V = np.array(vs).T
    np.testing.assert_allclose(V.conj().T @ V, np.eye(d - rank), atol=1e-10)
    smax = np.linalg.svd(A, compute_uv=False)[0]
    for v in vs:
        assert np.linalg.norm(A @ v) <= 1e-9 * smax


def test_null_space_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        linalg.svd_null_space(np.eye(2), 0.0)


def test_kron_examples():
    np.testing.assert_array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(linalg.kron(SIGMA3, np.eye(2)), np.diag([1, 1, -1, -1]))
    np.testing.assert_array_equal(linalg.kron(SIGMA1, SIGMA1), np.fliplr(np.eye(4)))


def test_kron_index_formula(rng):
    A = rng.normal(size=(2, 3))
    B = rng.normal(size=(4, 5))
    K = linalg.kron(A, B)
    for i, j, k, l in [(0, 0, 0, 0), (1, 2, 3, 4), (1, 0, 2, 3)]:
        assert K[i * 4 + k, j * 5 + l] == A[i, j] * B[k, l]


def test_vectorize_column_stacking():
    np.testing.assert_array_equal(linalg.vectorize(np.eye(2)), [1, 0, 0, 1])
    np.testing.assert_array_equal(linalg.vectorize([[1, 2], [3, 4]]), [1, 3, 2, 4])
    np.testing.assert_array_equal(linalg.devectorize(linalg.vectorize(SIGMA2), 2), SIGMA2)
    with pytest.raises(DimensionMismatch):
        linalg.devectorize(np.zeros(5), 2)


def test_vec_sandwich_identity_sigma1(rng):
    rho = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    lhs = linalg.vectorize(SIGMA1 @ rho @ SIGMA1)
    np.testing.assert_allclose(lhs, linalg.kron(SIGMA1.T, SIGMA1) @ linalg.vectorize(rho), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 5), seed=st.integers(0, 2**32 - 1))
def test_vec_kron_identity_property(d, seed):
    r = np.random.default_rng(seed)
    A, rho, B = (r.normal(size=(d, d)) + 1j * r.normal(size=(d, d)) for _ in range(3))
    lhs = linalg.vectorize(A @ rho @ B)
    rhs = linalg.kron(B.T, A) @ linalg.vectorize(rho)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * (1 + np.linalg.norm(lhs))


def test_expm_examples():
    np.testing.assert_allclose(linalg.expm(np.zeros((3, 3))), np.eye(3))
    np.testing.assert_allclose(linalg.expm(np.diag([0.3, -2.0])), np.diag(np.exp([0.3, -2.0])), rtol=1e-14)
    np.testing.assert_allclose(linalg.expm(-SIGMA3), np.diag([np.exp(-1), np.e]), rtol=1e-14)


def test_expm_inverse_pairs(rng):
    for _ in range(10):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        A *= rng.uniform(0.1, 5.0) / np.linalg.norm(A, 2)
        np.testing.assert_allclose(linalg.expm(A) @ linalg.expm(-A), np.eye(4), atol=1e-9)


def test_expm_accuracy_against_eigendecomposition(rng):
    S = random_hermitian(rng, 5)
    S *= 40.0 / np.linalg.norm(S, 2)
    w, U = np.linalg.eigh(S)
    ref = (U * np.exp(w)) @ U.conj().T
    assert np.linalg.norm(linalg.expm(S) - ref) <= 1e-10 * np.linalg.norm(ref)


def test_expm_cap():
    with pytest.raises(OverflowRisk):
        linalg.expm(np.diag([1e6, 0.0]))


def test_logm_examples():
    np.testing.assert_allclose(linalg.logm_pd(np.eye(2) / 2), -np.log(2) * np.eye(2), atol=1e-15)
    Z = np.e + np.exp(-1)
    rho = np.diag([np.exp(-1), np.e]) / Z
    np.testing.assert_allclose(linalg.logm_pd(rho), np.diag([-1.0, 1.0]) - np.log(Z) * np.eye(2), atol=1e-14)


def test_logm_round_trip(rng):
    for d in (2, 3, 4):
        S = random_hermitian(rng, d, 0.5)
        L = linalg.logm_pd(linalg.expm(S))
        np.testing.assert_allclose(L, S, atol=1e-12)
        assert linalg.is_hermitian(L, 1e-14)


def test_logm_rejects_negative():
    with pytest.raises(NotPSD):
        linalg.logm_pd(np.diag([1.1, -0.1]))


def test_predicates():
    assert linalg.is_hermitian(SIGMA2)
    assert not linalg.is_hermitian(np.array([[0, 1], [0, 0]]))
    assert linalg.is_psd(np.diag([1.0, 0.0]))
    assert not linalg.is_psd(SIGMA3)
    assert linalg.trace(SIGMA3) == 0
