"""Run configuration: JSON parsing and validation for the command line."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linalg, spectral
from .errors import ConfigError
from .models import ModelSpec, builtin_model
from .reservoir import POS_TOL, Envelope, LambShift, ReservoirSpec, load_table

TOP_LEVEL_KEYS = {"model", "reservoir_left", "reservoir_right", "tolerances", "sweep", "output"}
SWEEP_PARAMETERS = ("beta_L", "beta_R", "gamma")
RANK_TOL_ENV = "NESSLAB_TOL_RANK"


@dataclass(frozen=True)
class Tolerances:
    cluster_tol: float = spectral.CLUSTER_TOL
    rank_tol: float = linalg.RANK_TOL
    pos_tol: float = POS_TOL

    def as_dict(self) -> dict:
        return {"cluster_tol": self.cluster_tol, "rank_tol": self.rank_tol, "pos_tol": self.pos_tol}


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class RunConfig:
    model: dict
    reservoir_left: ReservoirSpec
    reservoir_right: ReservoirSpec
    tolerances: Tolerances = Tolerances()
    sweep: list[SweepAxis] = field(default_factory=list)
    output_path: str | None = None
    output_format: str | None = None

    def build_model(self, **overrides) -> ModelSpec:
        return model_from_dict(self.model, **overrides)


def parse_matrix(data, label: str) -> np.ndarray:
    """Nested rows of ``[re, im]`` pairs (plain numbers are taken as real)."""
    try:
        rows = [[complex(*x) if isinstance(x, (list, tuple)) else complex(x) for x in row] for row in data]
        M = np.array(rows, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{label}: matrices are nested arrays of [re, im] pairs ({exc})") from None
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ConfigError(f"{label}: matrix must be square, got shape {M.shape}")
    return M


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def model_from_dict(data: dict, **overrides) -> ModelSpec:
    if not isinstance(data, dict):
        raise ConfigError("model must be an object")
    data = {**data, **overrides}
    try:
        if "matrices" in data:
            mats = data["matrices"]
            missing = {"H", "Q_L", "Q_R"} - set(mats)
            if missing:
                raise ConfigError(f"model.matrices lacks {sorted(missing)}")
            return ModelSpec(
                data.get("name", "custom"),
                parse_matrix(mats["H"], "H"),
                parse_matrix(mats["Q_L"], "Q_L"),
                parse_matrix(mats["Q_R"], "Q_R"),
            )
        params = {k: float(v) for k, v in data.items() if k != "name"}
        name = data.get("name")
        if name is None:
            raise ConfigError("model needs a 'name' or 'matrices'")
        if name == "xy" and set(params) == {"gamma"}:
            name = "xy_anisotropic"
        return builtin_model(name, **params)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid model: {exc}") from None


def _envelope(data: dict) -> Envelope:
    data = dict(data)
    kind = data.pop("kind", "constant")
    if "points" in data:
        data["points"] = tuple(map(float, data["points"]))
    if "values" in data:
        data["values"] = tuple(map(float, data["values"]))
    return Envelope(kind, **data)


def reservoir_from_dict(data: dict, base_dir: Path = Path(".")) -> ReservoirSpec:
    if not isinstance(data, dict):
        raise ConfigError("reservoir blocks must be objects")
    try:
        beta = float(data["beta"])
        if not beta > 0:
            raise ConfigError("reservoir beta must be positive")
        family = data.get("family", "fermionic_flat")
        envelope = _envelope(data["envelope"]) if "envelope" in data else None
        table = None
        if "table" in data:
            tab = data["table"]
            if isinstance(tab, str):
                path = Path(tab)
                table = load_table(path if path.is_absolute() else base_dir / path)
            else:
                table = (tuple(map(float, tab["E"])), tuple(map(float, tab["h"])))
        ls = data.get("lamb_shift", {"mode": "zero"})
        if isinstance(ls, str):
            ls = {"mode": ls}
        lamb = LambShift(**ls)
        return ReservoirSpec(beta, family, envelope, table, lamb)
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"reservoir block lacks {exc}") from None
    except (TypeError, ValueError, OSError) as exc:
        raise ConfigError(f"invalid reservoir block: {exc}") from None


def _sweep(data) -> list[SweepAxis]:
    if data is None:
        return []
    axes = data.get("axes", data) if isinstance(data, dict) else data
    if isinstance(axes, dict):
        axes = [axes]
    out = []
    for ax in axes:
        try:
            axis = SweepAxis(str(ax["parameter"]), float(ax["start"]), float(ax["stop"]), int(ax["steps"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid sweep axis {ax!r}: {exc}") from None
        if axis.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
        if axis.steps < 2:
            raise ConfigError("sweep axes need at least 2 steps")
        if axis.start == axis.stop:
            raise ConfigError(f"sweep axis {axis.parameter} has identical endpoints")
        out.append(axis)
    return out


def config_from_dict(data: dict, base_dir: Path = Path(".")) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    for key in ("model", "reservoir_left", "reservoir_right"):
        if key not in data:
            raise ConfigError(f"config lacks '{key}'")
    tol_data = data.get("tolerances") or {}
    try:
        tolerances = Tolerances(**{k: float(v) for k, v in tol_data.items()})
    except TypeError as exc:
        raise ConfigError(f"invalid tolerances: {exc}") from None
    env_rank = os.environ.get(RANK_TOL_ENV)
    if env_rank:
        try:
            tolerances = Tolerances(tolerances.cluster_tol, float(env_rank), tolerances.pos_tol)
        except ValueError:
            raise ConfigError(f"{RANK_TOL_ENV} is not a number") from None
    if not 0 < tolerances.rank_tol < 1:
        raise ConfigError("rank_tol must lie in (0, 1)")
    output = data.get("output") or {}
    cfg = RunConfig(
        model=data["model"],
        reservoir_left=reservoir_from_dict(data["reservoir_left"], base_dir),
        reservoir_right=reservoir_from_dict(data["reservoir_right"], base_dir),
        tolerances=tolerances,
        sweep=_sweep(data.get("sweep")),
        output_path=output.get("path"),
        output_format=output.get("format"),
    )
    cfg.build_model()  # validate early
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return config_from_dict(data, path.parent)
