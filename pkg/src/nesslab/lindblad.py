"""Davies generators as superoperators on column-stacked density matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, spectral
from .errors import DimensionMismatch, NonHermitianInput
from .reservoir import ReservoirSpec, h, lamb_shift


def spre(A: np.ndarray) -> np.ndarray:
    """Superoperator of left multiplication, rho -> A rho."""
    return np.kron(np.eye(A.shape[0]), A)


def spost(B: np.ndarray) -> np.ndarray:
    """Superoperator of right multiplication, rho -> rho B."""
    return np.kron(B.T, np.eye(B.shape[0]))


def commutator_super(A: np.ndarray) -> np.ndarray:
    return spre(A) - spost(A)


@dataclass(frozen=True, eq=False)
class SuperOperator:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.dim**2, self.dim**2):
            raise DimensionMismatch(f"superoperator on {self.dim}x{self.dim} matrices must be {self.dim**2} square")

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        return total_generator(self, other)

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)

    def trace_defect(self) -> float:
        """max |tr(K rho)| over matrix units, i.e. ||vec(I)^H K||_inf."""
        return float(np.max(np.abs(linalg.vectorize(np.eye(self.dim)).conj() @ self.matrix)))

    def hermiticity_defect(self, rho) -> float:
        rho = linalg.as_square(rho)
        return float(np.linalg.norm(apply(self, linalg.dagger(rho)) - linalg.dagger(apply(self, rho, hermitize=False))))


def zero_generator(dim: int) -> SuperOperator:
    return SuperOperator(dim, np.zeros((dim * dim, dim * dim), dtype=complex))


def davies_generator(
    H,
    Q,
    res: ReservoirSpec,
    cluster_tol: float = spectral.CLUSTER_TOL,
    include_hamiltonian: bool = False,
) -> SuperOperator:
    """Weak-coupling generator for coupling operator ``Q`` to reservoir ``res``.

    K rho = sum_E -i s(E) [Q(E)^H Q(E), rho]
                  + h(E) ([Q(E) rho, Q(E)^H] + [Q(E), rho Q(E)^H])

    summed over every Bohr frequency of ``H`` at which ``Q(E)`` is nonzero.
    The free part -i[H, .] is left out (interaction picture) unless
    ``include_hamiltonian`` is set.
    """
    H = linalg.as_square(H)
    Q = linalg.as_square(Q)
    if H.shape != Q.shape:
        raise DimensionMismatch(f"H is {H.shape}, Q is {Q.shape}")
    if not linalg.is_hermitian(Q):
        raise NonHermitianInput("coupling operator must be Hermitian")
    d = H.shape[0]
    dec = spectral.decompose(H, cluster_tol)
    K = np.zeros((d * d, d * d), dtype=complex)
    for E, A in spectral.jump_operators(dec, Q, prune=True).items():
        Ad = linalg.dagger(A)
        AdA = Ad @ A
        rate = h(res, E)
        K += rate * (2.0 * spre(A) @ spost(Ad) - spre(AdA) - spost(AdA))
        shift = lamb_shift(res, E)
        if shift != 0.0:
            K += -1j * shift * commutator_super(AdA)
    if include_hamiltonian:
        K += -1j * commutator_super(linalg.hermitian_part(H))
    return SuperOperator(d, K)


def total_generator(K_L: SuperOperator, K_R: SuperOperator) -> SuperOperator:
    if K_L.dim != K_R.dim:
        raise DimensionMismatch(f"generators act on dimensions {K_L.dim} and {K_R.dim}")
    return SuperOperator(K_L.dim, K_L.matrix + K_R.matrix)


def apply(K: SuperOperator, rho, hermitize: bool = False) -> np.ndarray:
    rho = linalg.as_square(rho)
    if rho.shape[0] != K.dim:
        raise DimensionMismatch(f"state is {rho.shape[0]}-dimensional, generator acts on {K.dim}")
    out = linalg.devectorize(K.matrix @ linalg.vectorize(rho), K.dim)
    return linalg.hermitian_part(out) if hermitize else out


def propagator(K: SuperOperator, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return linalg.expm(t * K.matrix)


def evolve(K: SuperOperator, rho0, t: float) -> np.ndarray:
    """State at time ``t`` under the semigroup ``exp(t K)``, re-Hermitized."""
    rho0 = linalg.as_square(rho0)
    if rho0.shape[0] != K.dim:
        raise DimensionMismatch(f"state is {rho0.shape[0]}-dimensional, generator acts on {K.dim}")
    v = propagator(K, t) @ linalg.vectorize(rho0)
    return linalg.hermitian_part(linalg.devectorize(v, K.dim))


def choi_matrix(S: np.ndarray, d: int) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) S(|i><j|) of a column-stacked superoperator."""
    # S[(a, b), (i, j)] with column-stacked indices a + d*b, i + d*j
    T = np.asarray(S).reshape(d, d, d, d, order="F")  # T[a, b, i, j]
    return T.transpose(2, 0, 3, 1).reshape(d * d, d * d)


def is_completely_positive(S: np.ndarray, d: int, tol: float = 1e-8) -> bool:
    C = choi_matrix(S, d)
    return bool(np.linalg.eigvalsh(linalg.hermitian_part(C))[0] >= -tol)
