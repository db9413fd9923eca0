"""Built-in small systems: a single spin and two XY-coupled spins.

Pauli matrices follow the standard convention and two-spin operators are
ordered (left spin) (x) (right spin).  The left reservoir couples to the left
spin through ``sigma1 (x) 1`` and the right reservoir to the right spin.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NonHermitianInput

I2 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class ModelSpec:
    name: str
    H: np.ndarray = field(repr=False)
    Q_L: np.ndarray = field(repr=False)
    Q_R: np.ndarray = field(repr=False)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        shapes = {linalg.as_square(M).shape for M in (self.H, self.Q_L, self.Q_R)}
        if len(shapes) != 1:
            raise DimensionMismatch(f"H, Q_L, Q_R have differing shapes {sorted(shapes)}")
        for label, M in (("H", self.H), ("Q_L", self.Q_L), ("Q_R", self.Q_R)):
            if not linalg.is_hermitian(M):
                raise NonHermitianInput(f"{label} is not Hermitian")

    @property
    def dimension(self) -> int:
        return self.H.shape[0]


def single_spin() -> ModelSpec:
    return ModelSpec("single_spin", SIGMA3.copy(), SIGMA1.copy(), SIGMA1.copy())


def xy_two_spin(gamma1: float, gamma2: float) -> ModelSpec:
    H = 0.5 * (
        np.kron(SIGMA3, I2)
        + np.kron(I2, SIGMA3)
        + gamma1 * np.kron(SIGMA1, SIGMA1)
        + gamma2 * np.kron(SIGMA2, SIGMA2)
    )
    return ModelSpec(
        "xy", H, np.kron(SIGMA1, I2), np.kron(I2, SIGMA1), {"gamma1": gamma1, "gamma2": gamma2}
    )


def xy_anisotropic(gamma: float) -> ModelSpec:
    """XY pair with ``gamma1 = 1 + gamma`` and ``gamma2 = 1 - gamma``."""
    m = xy_two_spin(1.0 + gamma, 1.0 - gamma)
    return ModelSpec("xy_anisotropic", m.H, m.Q_L, m.Q_R, {"gamma": gamma})


def _renamed(m: ModelSpec, name: str) -> ModelSpec:
    return ModelSpec(name, m.H, m.Q_L, m.Q_R, m.params)


def xy_isotropic() -> ModelSpec:
    return _renamed(xy_two_spin(1.0, 1.0), "xy_isotropic")


def xy_cut() -> ModelSpec:
    """Decoupled pair, gamma1 = gamma2 = 0."""
    return _renamed(xy_two_spin(0.0, 0.0), "xy_cut")


BUILTIN = {
    "single_spin": single_spin,
    "xy": xy_two_spin,
    "xy_anisotropic": xy_anisotropic,
    "xy_isotropic": xy_isotropic,
    "xy_cut": xy_cut,
}


def builtin_model(name: str, **params) -> ModelSpec:
    try:
        factory = BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(BUILTIN)}") from None
    return factory(**params)


def gibbs(H, beta: float) -> np.ndarray:
    """Thermal state exp(-beta H) / tr exp(-beta H), computed in the eigenbasis."""
    w, U = linalg.eigh(H)
    p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    return linalg.hermitian_part((U * p) @ linalg.dagger(U))


def xy_isotropic_closed_form(beta_L: float, beta_R: float) -> tuple[np.ndarray, float]:
    """Known steady state and entropy production of the gamma1 = gamma2 = 1 pair.

    The entropy production corresponds to reservoirs normalized so that
    ``h(2) + h(-2) = 2``; it scales linearly with that sum.
    """
    H = xy_isotropic().H
    coeff = np.sinh(beta_L + beta_R) / (2.0 * np.cosh(beta_L) * np.cosh(beta_R))
    rho = 0.25 * (np.eye(4) - coeff * H)
    sigma = (beta_R - beta_L) * np.sinh(beta_R - beta_L) / (np.cosh(beta_L) * np.cosh(beta_R))
    return rho, float(sigma)


def xy_cut_closed_form(beta_L: float, beta_R: float) -> np.ndarray:
    """Product of single-spin Gibbs states for the decoupled pair."""
    left = np.diag(np.exp([-beta_L / 2, beta_L / 2])) / (2.0 * np.cosh(beta_L / 2))
    right = np.diag(np.exp([-beta_R / 2, beta_R / 2])) / (2.0 * np.cosh(beta_R / 2))
    return np.kron(left, right).astype(complex)
