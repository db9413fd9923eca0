"""Thermal reservoir spectral functions and their Hilbert transforms.

A reservoir is described directly by its spectral function ``h(E)``, the
rate at which it absorbs energy ``E`` from the small system.  The built-in
fermionic families have the form ``c(|E|) / (1 + exp(-beta E))`` with an even
envelope ``c >= 0``; this satisfies the detailed-balance (KMS) relation
``h(-E) = exp(-beta E) h(E)`` identically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy.special import expit

from .errors import CutoffTooSmall, OutOfTable

POS_TOL = 1e-12
FAMILIES = ("fermionic_flat", "fermionic_envelope", "tabulated")
ENVELOPE_KINDS = ("constant", "gaussian", "ohmic", "sampled")


@dataclass(frozen=True)
class Envelope:
    """Even, nonnegative envelope ``c(|E|)`` multiplying the Fermi factor.

    ``constant``: amplitude.  ``gaussian``: amplitude * exp(-(x/width)**2).
    ``ohmic``: amplitude * x * exp(-x/width).  ``sampled``: linear
    interpolation of ``values`` on ``points`` (x >= 0), constant beyond the
    last sample.
    """

    kind: str = "constant"
    amplitude: float = 1.0
    width: float = 1.0
    points: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.amplitude < 0 or self.width <= 0:
            raise ValueError("envelope needs amplitude >= 0 and width > 0")
        if self.kind == "sampled":
            x, c = np.asarray(self.points, float), np.asarray(self.values, float)
            if x.size < 2 or x.size != c.size or np.any(np.diff(x) <= 0) or x[0] != 0.0:
                raise ValueError("sampled envelope needs ascending points starting at 0")
            if np.any(c < 0):
                raise ValueError("envelope values must be nonnegative")

    def __call__(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        if self.kind == "constant":
            return self.amplitude * np.ones_like(x)
        if self.kind == "gaussian":
            return self.amplitude * np.exp(-((x / self.width) ** 2))
        if self.kind == "ohmic":
            return self.amplitude * x * np.exp(-x / self.width)
        return self.amplitude * np.interp(x, self.points, self.values)


def gaussian_envelope(width: float = 1.0, amplitude: float = 1.0) -> Envelope:
    return Envelope("gaussian", amplitude=amplitude, width=width)


def ohmic_envelope(width: float = 1.0, amplitude: float = 1.0) -> Envelope:
    return Envelope("ohmic", amplitude=amplitude, width=width)


def constant_envelope(amplitude: float = 1.0) -> Envelope:
    return Envelope("constant", amplitude=amplitude)


@dataclass(frozen=True)
class LambShift:
    """How the Hilbert transform ``s(E)`` of ``h`` is evaluated.

    ``mode="zero"`` drops it; ``mode="principal_value"`` integrates over
    ``[-cutoff, cutoff]`` (default ``50 / beta``) on ``grid_points`` nodes.
    """

    mode: str = "zero"
    cutoff: float | None = None
    grid_points: int = 20001

    def __post_init__(self):
        if self.mode not in ("zero", "principal_value"):
            raise ValueError(f"unknown Lamb shift mode {self.mode!r}")
        if self.cutoff is not None and self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")


@dataclass(frozen=True)
class ReservoirSpec:
    beta: float
    family: str = "fermionic_flat"
    envelope: Envelope | None = None
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = field(default=None, repr=False)
    lamb_shift: LambShift = LambShift()

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown spectral family {self.family!r}")
        if self.family == "fermionic_envelope" and self.envelope is None:
            raise ValueError("fermionic_envelope family requires an envelope")
        if self.family == "tabulated":
            if self.table is None:
                raise ValueError("tabulated family requires a table")
            E, hv = (np.asarray(a, float) for a in self.table)
            if E.size < 2 or E.size != hv.size or np.any(np.diff(E) <= 0):
                raise ValueError("table needs at least two samples with ascending E")
            if np.any(hv < 0):
                raise ValueError("tabulated h must be nonnegative")

    @property
    def cutoff(self) -> float:
        return self.lamb_shift.cutoff if self.lamb_shift.cutoff is not None else 50.0 / self.beta

    def with_beta(self, beta: float) -> "ReservoirSpec":
        return ReservoirSpec(beta, self.family, self.envelope, self.table, self.lamb_shift)


def tabulated(beta: float, energies: Iterable[float], values: Iterable[float], **kw) -> ReservoirSpec:
    return ReservoirSpec(beta, "tabulated", table=(tuple(map(float, energies)), tuple(map(float, values))), **kw)


def load_table(path) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Read a two-column ``E,h`` CSV (optional header row, ascending E)."""
    lines = Path(path).read_text().splitlines()
    rows = [ln for ln in lines if ln.strip()]
    try:
        float(rows[0].split(",")[0])
    except ValueError:
        rows = rows[1:]
    data = np.array([[float(x) for x in ln.split(",")[:2]] for ln in rows])
    return tuple(data[:, 0]), tuple(data[:, 1])


def h(spec: ReservoirSpec, E):
    """Spectral function of the reservoir at energy ``E`` (scalar or array)."""
    E_arr = np.asarray(E, dtype=float)
    if spec.family == "fermionic_flat":
        out = expit(spec.beta * E_arr)
    elif spec.family == "fermionic_envelope":
        out = spec.envelope(E_arr) * expit(spec.beta * E_arr)
    else:
        grid, values = spec.table
        if np.any(E_arr < grid[0]) or np.any(E_arr > grid[-1]):
            raise OutOfTable(f"E outside tabulated range [{grid[0]}, {grid[-1]}]")
        out = np.interp(E_arr, grid, values)
    return float(out) if np.ndim(out) == 0 else out


def lamb_shift(spec: ReservoirSpec, E: float) -> float:
    """Hilbert transform ``s(E) = (1/2pi) pv int h(E') / (E' - E) dE'``.

    Writing ``E' = E + u``, the window symmetric about the singularity
    contributes ``int_0^a [h(E+u) - h(E-u)] / u du``, which is regular; it is
    integrated with a midpoint rule so nodes pair up at equal distances from
    the pole.  The leftover one-sided strip is regular too and uses the same
    node spacing.
    """
    if spec.lamb_shift.mode == "zero":
        return 0.0
    cutoff = spec.cutoff
    E = float(E)
    if abs(E) >= 0.9 * cutoff:
        raise CutoffTooSmall(f"|E| = {abs(E)} is too close to the cutoff {cutoff}")
    n = spec.lamb_shift.grid_points
    a = cutoff - abs(E)
    du = a / n
    u = (np.arange(n) + 0.5) * du
    total = np.sum((h(spec, E + u) - h(spec, E - u)) / u) * du

    # strip [-cutoff, 2E - cutoff] when E > 0, [2E + cutoff, cutoff] when E < 0
    width = 2.0 * abs(E)
    if width > 0:
        m = max(int(np.ceil(width / du)), 1)
        step = width / m
        if E > 0:
            x = -cutoff + (np.arange(m) + 0.5) * step
        else:
            x = 2.0 * E + cutoff + (np.arange(m) + 0.5) * step
        total += np.sum(h(spec, x) / (x - E)) * step
    return float(total / (2.0 * np.pi))


@dataclass(frozen=True)
class CouplingVerdict:
    passed: bool
    failing: tuple[float, ...]
    values: dict = field(repr=False, default_factory=dict)


def check_effective_coupling(spec: ReservoirSpec, bohr, pos_tol: float = POS_TOL) -> CouplingVerdict:
    """Check that ``h(E) > pos_tol`` at every Bohr frequency."""
    values = {}
    failing = []
    for E in bohr:
        try:
            v = h(spec, E)
        except OutOfTable:
            v = float("nan")
        values[float(E)] = v
        if not v > pos_tol:
            failing.append(float(E))
    return CouplingVerdict(not failing, tuple(failing), values)
