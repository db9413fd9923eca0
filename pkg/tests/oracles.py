"""Independent reference computations used only by the tests."""
import numpy as np


def rref_rank(A, rel_tol=1e-9):
    """Rank by Gaussian elimination with complete pivoting."""
    M = np.array(A, dtype=complex)
    scale = np.abs(M).max() if M.size else 0.0
    if scale == 0.0:
        return 0
    rank = 0
    rows, cols = M.shape
    for _ in range(min(rows, cols)):
        sub = np.abs(M[rank:, rank:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= rel_tol * scale:
            break
        i += rank
        j += rank
        M[[rank, i]] = M[[i, rank]]
        M[:, [rank, j]] = M[:, [j, rank]]
        M[rank + 1:] -= np.outer(M[rank + 1:, rank] / M[rank, rank], M[rank])
        rank += 1
    return rank


def commutant_dim_bruteforce(ops):
    """Dimension of {X : [A, X] = 0 for all A}, assembled entry by entry."""
    d = ops[0].shape[0]
    rows = []
    for A in ops:
        for i in range(d):
            for j in range(d):
                # ([A, X])_{ij} = sum_k A_ik X_kj - X_ik A_kj
                row = np.zeros((d, d), dtype=complex)
                row[:, j] += A[i, :]
                row[i, :] -= A[:, j]
                rows.append(row.ravel())
    return d * d - rref_rank(np.array(rows))


def choi_by_loop(channel, d):
    """sum_ij |i><j| (x) channel(|i><j|)."""
    C = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            C += np.kron(E, channel(E))
    return C


def random_hermitian(rng, d, scale=1.0):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (A + A.conj().T) / 2


def random_unitary(rng, d):
    Z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_faithful_state(rng, d, mix=0.05):
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = G @ G.conj().T
    rho /= np.trace(rho).real
    return (1 - mix) * rho + mix * np.eye(d) / d
