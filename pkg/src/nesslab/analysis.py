"""Commutant criteria, steady states, energy flux and entropy production."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import linalg, spectral
from .errors import (
    DimensionMismatch,
    EmptyInput,
    NoStationaryState,
    NonRealFlux,
    NonRealValue,
    NonUniqueStationaryState,
    NotFaithful,
    NotPSD,
)
from .lindblad import SuperOperator, apply, davies_generator, total_generator
from .models import ModelSpec
from .reservoir import POS_TOL, ReservoirSpec, check_effective_coupling

RANK_TOL = linalg.RANK_TOL
FAITHFUL_TOL = 1e-12
IMAG_TOL = 1e-10
TRACE_TOL = 1e-9
SIGMA_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CommutantReport:
    dimension: int
    basis: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def is_trivial(self) -> bool:
        return self.dimension == 1

    def contains(self, X, tol: float = 1e-9) -> bool:
        """Whether ``X`` lies in the span of the basis, up to relative ``tol``."""
        X = linalg.as_square(X)
        residual = X.copy()
        for B in self.basis:
            residual -= np.vdot(B, X) * B
        return bool(np.linalg.norm(residual) <= tol * max(np.linalg.norm(X), 1e-300))


def commutant(ops, rel_tol: float = RANK_TOL) -> CommutantReport:
    """All matrices commuting with every operator in ``ops``.

    Solves vec([A, X]) = (1 (x) A - A^T (x) 1) vec(X) = 0 for all ``A`` at once.
    """
    ops = [linalg.as_square(A) for A in ops]
    if not ops:
        raise EmptyInput("commutant of an empty operator list")
    d = ops[0].shape[0]
    if any(A.shape != (d, d) for A in ops):
        raise DimensionMismatch("operators must share one dimension")
    eye = np.eye(d)
    stacked = np.vstack([np.kron(eye, A) - np.kron(A.T, eye) for A in ops])
    basis = tuple(linalg.devectorize(v, d) for v in linalg.svd_null_space(stacked, rel_tol))
    return CommutantReport(len(basis), basis)


def _kernel(K: SuperOperator, rel_tol: float):
    s = linalg.singular_values(K.matrix)
    if s[0] == 0.0:
        return K.dim**2, None
    zero = s <= rel_tol * s[0]
    gap = float(s[~zero].min()) if np.any(~zero) else None
    return int(zero.sum()), gap


def kernel_dimension(K: SuperOperator, rel_tol: float = RANK_TOL) -> tuple[int, float | None]:
    """Kernel dimension of ``K`` and its smallest nonzero singular value."""
    return _kernel(K, rel_tol)


def _hermitian_kernel_basis(K: SuperOperator, rel_tol: float) -> list[np.ndarray]:
    d = K.dim
    vecs = linalg.svd_null_space(K.matrix, rel_tol)
    if not vecs:
        return []
    candidates = []
    for v in vecs:
        X = linalg.devectorize(v, d)
        for Y in (linalg.hermitian_part(X), (X - linalg.dagger(X)) / 2j):
            candidates.append(np.concatenate([Y.real.ravel(), Y.imag.ravel()]))
    _, s, vh = np.linalg.svd(np.array(candidates), full_matrices=False)
    keep = vh[: len(vecs)]
    return [linalg.hermitian_part((r[: d * d] + 1j * r[d * d:]).reshape(d, d)) for r in keep]


@dataclass(frozen=True, eq=False)
class StationaryStates:
    kernel_dim: int
    spectral_gap: float | None
    basis: tuple[np.ndarray, ...] = field(repr=False)
    states: tuple[np.ndarray, ...] = field(repr=False)


def _segment_endpoints(R: np.ndarray, T: np.ndarray) -> tuple[np.ndarray, ...]:
    """Extreme density matrices of the family R + t T (tr R = 1, tr T = 0)."""
    bound = (np.linalg.norm(R) + 1.0) / np.linalg.norm(T)

    def neg_min_eig(t):
        return -linalg.eigh(R + t * T).eigenvalues[0]

    best = minimize_scalar(neg_min_eig, bounds=(-bound, bound), method="bounded", options={"xatol": 1e-12})
    t0 = float(best.x)
    X0 = linalg.hermitian_part(R + t0 * T)
    lam_min = -best.fun
    if lam_min < -1e-9:
        raise NoStationaryState("kernel contains no positive semidefinite state")
    if lam_min <= 1e-12:
        return (X0,)
    w, U = linalg.eigh(X0)
    inv_sqrt = (U / np.sqrt(w)) @ linalg.dagger(U)
    mu = linalg.eigh(inv_sqrt @ T @ inv_sqrt).eigenvalues
    lo, hi = t0 - 1.0 / mu[-1], t0 - 1.0 / mu[0]
    return tuple(linalg.hermitian_part(R + t * T) for t in (lo, hi))


def stationary_states(K: SuperOperator, rel_tol: float = RANK_TOL) -> StationaryStates:
    """Stationary density matrices of ``K``.

    One-dimensional kernel: the unique trace-one state.  Two-dimensional
    kernel: the two extreme points of the segment of stationary density
    matrices.  Larger kernels raise ``NonUniqueStationaryState``; the
    dimension itself is available from ``kernel_dimension``.
    """
    dim, gap = _kernel(K, rel_tol)
    if dim == 0:
        raise NoStationaryState("generator has a trivial kernel; is it trace preserving?")
    basis = _hermitian_kernel_basis(K, rel_tol)
    if dim == 1:
        B = basis[0]
        tr = np.trace(B).real
        if abs(tr) <= TRACE_TOL:
            raise NoStationaryState("kernel element is traceless")
        return StationaryStates(1, gap, tuple(basis), (B / tr,))
    if dim == 2:
        traces = [np.trace(B).real for B in basis]
        i = int(np.argmax(np.abs(traces)))
        if abs(traces[i]) <= TRACE_TOL:
            raise NoStationaryState("kernel elements are all traceless")
        R = basis[i] / traces[i]
        T = basis[1 - i] - traces[1 - i] * R
        T = T / np.linalg.norm(T)
        return StationaryStates(2, gap, tuple(basis), _segment_endpoints(R, T))
    raise NonUniqueStationaryState(dim)


def ness(K: SuperOperator, rel_tol: float = RANK_TOL) -> np.ndarray:
    """The unique stationary density matrix of ``K``."""
    dim, _ = _kernel(K, rel_tol)
    if dim != 1:
        raise NonUniqueStationaryState(dim)
    return stationary_states(K, rel_tol).states[0]


def _real(z: complex, what: str, err=NonRealValue) -> float:
    if abs(z.imag) > IMAG_TOL:
        raise err(f"{what} has imaginary part {z.imag:.3e}")
    return float(z.real)


def energy_flux(H, K_L: SuperOperator, rho) -> float:
    """tr(H K_L rho): energy flowing from the left reservoir into the system."""
    H = linalg.as_square(H)
    if H.shape[0] != K_L.dim:
        raise DimensionMismatch("Hamiltonian and generator dimensions differ")
    return _real(complex(np.trace(H @ apply(K_L, rho))), "energy flux", NonRealFlux)


def _require_faithful(rho) -> np.ndarray:
    rho = linalg.hermitian_part(linalg.as_square(rho))
    w = linalg.eigh(rho).eigenvalues
    if w[0] < FAITHFUL_TOL:
        if w[0] < -1e-10:
            raise NotPSD(f"state has eigenvalue {w[0]:.3e}")
        raise NotFaithful(f"smallest eigenvalue {w[0]:.3e} is below {FAITHFUL_TOL}")
    return rho


def entropy_production_single(H, beta: float, K_r: SuperOperator, rho) -> float:
    """-beta tr(H K_r rho) - tr(log(rho) K_r rho) for a faithful state."""
    rho = _require_faithful(rho)
    H = linalg.as_square(H)
    Krho = apply(K_r, rho)
    value = -beta * np.trace(H @ Krho) - np.trace(linalg.logm_pd(rho) @ Krho)
    return _real(complex(value), "entropy production")


def entropy_production_total(H, betas, K_L: SuperOperator, K_R: SuperOperator, rho) -> float:
    beta_L, beta_R = betas
    return entropy_production_single(H, beta_L, K_L, rho) + entropy_production_single(H, beta_R, K_R, rho)


@dataclass(eq=False)
class ThermoReport:
    model: str
    betas: tuple[float, float]
    criteria: dict
    failing_frequencies: dict
    commutant_dims: dict
    kernel_dim: int
    spectral_gap: float | None
    ness: np.ndarray | None = field(repr=False)
    sigma0: float | None
    flux_right: float | None
    sigma_L: float | None
    sigma_R: float | None
    sigma_total: float | None
    log_term: float | None
    theorem_applicable: bool
    conclusion_holds: bool | None
    corollary_holds: bool | None
    tolerances: dict = field(default_factory=dict)


def theorem_check(
    model: ModelSpec,
    left: ReservoirSpec,
    right: ReservoirSpec,
    cluster_tol: float = spectral.CLUSTER_TOL,
    rank_tol: float = RANK_TOL,
    pos_tol: float = POS_TOL,
) -> ThermoReport:
    """Evaluate the positivity criterion and the steady-state thermodynamics.

    The criterion needs effective coupling to both reservoirs, trivial
    commutants of {H, Q_L} and {H, Q_R}, and unequal temperatures; it then
    guarantees strictly positive entropy production, and a positive flux
    out of the left reservoir when beta_R > beta_L.  All quantities are
    reported whether or not the criterion applies.
    """
    H = model.H
    dec = spectral.decompose(H, cluster_tol)
    e_l = check_effective_coupling(left, dec.bohr_frequencies, pos_tol)
    e_r = check_effective_coupling(right, dec.bohr_frequencies, pos_tol)
    c_l = commutant([H, model.Q_L], rank_tol)
    c_r = commutant([H, model.Q_R], rank_tol)
    c_joint = commutant([H, model.Q_L, model.Q_R], rank_tol)
    criteria = {"E_L": e_l.passed, "E_R": e_r.passed, "C_L": c_l.is_trivial, "C_R": c_r.is_trivial}

    K_L = davies_generator(H, model.Q_L, left, cluster_tol)
    K_R = davies_generator(H, model.Q_R, right, cluster_tol)
    K = total_generator(K_L, K_R)
    kdim, gap = kernel_dimension(K, rank_tol)

    beta_L, beta_R = left.beta, right.beta
    rho0 = sigma0 = flux_r = s_l = s_r = s_tot = log_term = None
    if kdim == 1:
        rho0 = ness(K, rank_tol)
        sigma0 = energy_flux(H, K_L, rho0)
        flux_r = energy_flux(H, K_R, rho0)
        try:
            s_l = entropy_production_single(H, beta_L, K_L, rho0)
            s_r = entropy_production_single(H, beta_R, K_R, rho0)
            s_tot = s_l + s_r
            log_term = _real(complex(np.trace(linalg.logm_pd(rho0) @ apply(K, rho0))), "log term")
        except NotFaithful:
            s_tot = -beta_L * sigma0 - beta_R * flux_r

    applicable = all(criteria.values()) and beta_L != beta_R
    conclusion = None if s_tot is None else bool(s_tot > SIGMA_TOL)
    corollary = None
    if sigma0 is not None and beta_L != beta_R:
        corollary = bool(np.sign(sigma0) == np.sign(beta_R - beta_L) and abs(sigma0) > SIGMA_TOL)

    return ThermoReport(
        model=model.name,
        betas=(beta_L, beta_R),
        criteria=criteria,
        failing_frequencies={"E_L": e_l.failing, "E_R": e_r.failing},
        commutant_dims={"C_L": c_l.dimension, "C_R": c_r.dimension, "joint": c_joint.dimension},
        kernel_dim=kdim,
        spectral_gap=gap,
        ness=rho0,
        sigma0=sigma0,
        flux_right=flux_r,
        sigma_L=s_l,
        sigma_R=s_r,
        sigma_total=s_tot,
        log_term=log_term,
        theorem_applicable=applicable,
        conclusion_holds=conclusion,
        corollary_holds=corollary,
        tolerances={"cluster_tol": cluster_tol, "rank_tol": rank_tol, "pos_tol": pos_tol},
    )
