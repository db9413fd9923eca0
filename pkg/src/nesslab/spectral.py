"""Spectral projections of a Hamiltonian, Bohr frequencies and jump operators."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionMismatch

CLUSTER_TOL = 1e-9
PRUNE_TOL = 1e-12


@dataclass(frozen=True)
class Level:
    energy: float
    projection: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.projection).real))


@dataclass(frozen=True)
class SpectralDecomposition:
    levels: tuple[Level, ...]
    bohr_frequencies: tuple[float, ...]
    cluster_tol: float = CLUSTER_TOL

    @property
    def dim(self) -> int:
        return self.levels[0].projection.shape[0]

    @property
    def energies(self) -> np.ndarray:
        return np.array([lvl.energy for lvl in self.levels])

    def reconstruct(self) -> np.ndarray:
        return sum(lvl.energy * lvl.projection for lvl in self.levels)


def _cluster(values, atol: float) -> list[list[int]]:
    """Group indices of sorted ``values`` whose neighbours lie within ``atol``."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and v - values[groups[-1][0]] <= atol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def decompose(H, cluster_tol: float = CLUSTER_TOL) -> SpectralDecomposition:
    """Split ``H`` into energy levels with orthogonal spectral projections.

    Eigenvalues closer than ``cluster_tol * (1 + spectral radius)`` are merged
    into one degenerate level; a level's energy is the mean of its members.
    Bohr frequencies are the pairwise level differences clustered with the
    same tolerance, symmetrized so that the set is closed under negation.
    """
    w, U = linalg.eigh(H)
    atol = cluster_tol * (1.0 + np.max(np.abs(w)))
    levels = []
    for idx in _cluster(w, atol):
        vecs = U[:, idx]
        levels.append(Level(float(np.mean(w[idx])), vecs @ linalg.dagger(vecs)))

    energies = np.array([lvl.energy for lvl in levels])
    diffs = np.sort(np.abs((energies[:, None] - energies[None, :]).ravel()))
    positive = [float(np.mean(diffs[g])) for g in _cluster(diffs, atol)]
    positive = [e for e in positive if e > atol]
    bohr = tuple(sorted([-e for e in positive] + [0.0] + positive))
    return SpectralDecomposition(tuple(levels), bohr, cluster_tol)


def nearest_frequency(dec: SpectralDecomposition, value: float) -> float:
    bohr = np.asarray(dec.bohr_frequencies)
    return float(bohr[np.argmin(np.abs(bohr - value))])


def jump_operators(dec: SpectralDecomposition, Q, prune: bool = False) -> dict[float, np.ndarray]:
    """Components of ``Q`` that lower the energy by each Bohr frequency.

    ``Q(E) = sum over E_m - E_n = E of P_n Q P_m``.  Every Bohr frequency gets
    an entry, including identically zero ones, unless ``prune`` is set, in
    which case entries with Frobenius norm below 1e-12 are dropped.
    """
    Q = linalg.as_square(Q)
    if Q.shape[0] != dec.dim:
        raise DimensionMismatch(f"coupling is {Q.shape[0]}-dimensional, Hamiltonian is {dec.dim}")
    ops = {E: np.zeros_like(Q) for E in dec.bohr_frequencies}
    for lvl_n in dec.levels:
        for lvl_m in dec.levels:
            E = nearest_frequency(dec, lvl_m.energy - lvl_n.energy)
            ops[E] = ops[E] + lvl_n.projection @ Q @ lvl_m.projection
    if prune:
        ops = {E: A for E, A in ops.items() if np.linalg.norm(A) >= PRUNE_TOL}
    return ops


def active_frequencies(dec: SpectralDecomposition, Q) -> tuple[float, ...]:
    """Bohr frequencies at which ``Q`` has a nonvanishing component."""
    return tuple(jump_operators(dec, Q, prune=True))
