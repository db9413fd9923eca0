"""Dense complex linear algebra for small systems (d up to a few dozen).

Matrices are plain ``numpy.ndarray`` objects of complex dtype.  Operators on
density matrices act on *column-stacked* vectors throughout the package::

    vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)

Every superoperator in nesslab is assembled with this convention.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NoConvergence, NonHermitianInput, NotPSD, OverflowRisk

HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 100
RANK_TOL = 1e-9
EIG_FLOOR = 1e-14
# 1-norm cap for expm; scaling and squaring stays accurate well beyond this
# for generators of contraction semigroups, but t*K of this size means the
# caller is almost certainly integrating far past relaxation.
EXPM_NORM_CAP = 1e5


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {M.shape}")
    return M


def as_square(M) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    return M


def dagger(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + dagger(M))


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    M = as_square(M)
    return bool(np.linalg.norm(M - dagger(M)) <= tol * (1.0 + np.linalg.norm(M)))


def is_psd(M, tol: float = 1e-10) -> bool:
    M = as_square(M)
    if not is_hermitian(M):
        return False
    return bool(eigh(M).eigenvalues[0] >= -tol)


def trace(M) -> complex:
    return complex(np.trace(as_square(M)))


def _require_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = as_square(M)
    asym = np.linalg.norm(M - dagger(M))
    if asym > tol * (1.0 + np.linalg.norm(M)):
        raise NonHermitianInput(f"matrix is not Hermitian (||M - M^H||_F = {asym:.3e})")
    return hermitian_part(M)


def eigh(M, tol: float = HERMITIAN_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Each rotation first removes the phase of the pivot element and then
    applies a real Givens rotation, so the accumulated transform stays
    unitary.  Sweeps stop once the off-diagonal Frobenius norm drops below
    ``1e-14 * ||M||_F``.

    Returns eigenvalues in ascending order with matching eigenvector columns.
    """
    A = _require_hermitian(M, tol).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    threshold = 1e-14 * np.linalg.norm(A)

    offdiag = ~np.eye(n, dtype=bool)

    def off_norm(X):
        return np.linalg.norm(X[offdiag])

    for _ in range(max_sweeps + 1):
        if off_norm(A) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app, aqq = A[p, p].real, A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                g_pp, g_pq = c, s
                g_qp, g_qq = -s * np.conj(phase), c * np.conj(phase)
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = colp * g_pp + colq * g_qp
                A[:, q] = colp * g_pq + colq * g_qq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = np.conj(g_pp) * rowp + np.conj(g_qp) * rowq
                A[q, :] = np.conj(g_pq) * rowp + np.conj(g_qq) * rowq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = vp * g_pp + vq * g_qp
                V[:, q] = vp * g_pq + vq * g_qq
    else:
        raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(A).real
    order = np.argsort(w, kind="stable")
    return EigenSystem(w[order], V[:, order])


def singular_values(A) -> np.ndarray:
    return np.linalg.svd(as_matrix(A), compute_uv=False)


def svd_null_space(A, rel_tol: float = RANK_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical kernel of ``A``.

    A singular value counts as zero when it is at most ``rel_tol`` times the
    largest one.  The zero matrix has the whole space as kernel.
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1)")
    A = as_matrix(A)
    n = A.shape[1]
    if A.size == 0 or not np.any(A):
        return list(np.eye(n, dtype=complex))
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    s_full = np.zeros(n)
    s_full[: s.size] = s
    rank = int(np.sum(s_full > rel_tol * s_full[0]))
    return [vh[k].conj() for k in range(rank, n)]


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def vectorize(rho) -> np.ndarray:
    rho = as_square(rho)
    return rho.reshape(-1, order="F")


def devectorize(v, d: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != d * d:
        raise DimensionMismatch(f"vector of length {v.size} cannot hold a {d}x{d} matrix")
    return v.reshape(d, d, order="F")


def expm(A, norm_cap: float = EXPM_NORM_CAP) -> np.ndarray:
    A = as_square(A)
    norm = np.linalg.norm(A, 1)
    if norm > norm_cap:
        raise OverflowRisk(f"||A||_1 = {norm:.3e} exceeds the expm cap {norm_cap:.1e}")
    return scipy.linalg.expm(A)


def logm_pd(rho, eig_floor: float = EIG_FLOOR) -> np.ndarray:
    """Matrix logarithm of a positive semidefinite matrix.

    Eigenvalues are clamped below at ``eig_floor`` before the logarithm, so
    the result is only meaningful for faithful states.
    """
    w, U = eigh(rho)
    if w[0] < -1e-10:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is negative")
    logw = np.log(np.maximum(w, eig_floor))
    return hermitian_part((U * logw) @ dagger(U))
