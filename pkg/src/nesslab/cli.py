"""``nesslab`` command line: check, sweep and evolve.

Exit codes: 0 success, 2 the positivity criterion's hypotheses fail (the
report is still written), 64 configuration error, 70 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, analysis, linalg
from .config import RunConfig, load_config, matrix_to_json, model_from_dict, parse_matrix
from .errors import ConfigError, NessLabError, NotFaithful
from .lindblad import davies_generator, propagator, total_generator
from .models import gibbs

EXIT_OK = 0
EXIT_HYPOTHESES_FAIL = 2
EXIT_CONFIG = 64
EXIT_NUMERICAL = 70


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return repr(x) if math.isfinite(x) else "nan"


def report_dict(report: analysis.ThermoReport, model_params: dict | None = None) -> dict:
    beta_L, beta_R = report.betas
    return {
        "meta": {
            "version": __version__,
            "model": report.model,
            "model_params": {k: _num(v) for k, v in (model_params or {}).items()},
            "tolerances": {k: _num(v) for k, v in report.tolerances.items()},
            "spectral_gap": _num(report.spectral_gap),
        },
        "verdicts": {
            **report.criteria,
            "theorem_applicable": report.theorem_applicable,
            "conclusion_holds": report.conclusion_holds,
            "corollary_holds": report.corollary_holds,
            "commutant_dims": report.commutant_dims,
            "failing_frequencies": {k: [_num(e) for e in v] for k, v in report.failing_frequencies.items()},
        },
        "thermo": {
            "beta_L": _num(beta_L),
            "beta_R": _num(beta_R),
            "kernel_dim": report.kernel_dim,
            "ness": None if report.ness is None else matrix_to_json(report.ness),
            "sigma0": _num(report.sigma0),
            "flux_right": _num(report.flux_right),
            "sigma_L": _num(report.sigma_L),
            "sigma_R": _num(report.sigma_R),
            "sigma_total": _num(report.sigma_total),
            "log_term": _num(report.log_term),
        },
    }


def render_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _run_check(cfg: RunConfig, model=None, left=None, right=None) -> analysis.ThermoReport:
    tol = cfg.tolerances
    return analysis.theorem_check(
        model or cfg.build_model(),
        left or cfg.reservoir_left,
        right or cfg.reservoir_right,
        cluster_tol=tol.cluster_tol,
        rank_tol=tol.rank_tol,
        pos_tol=tol.pos_tol,
    )


def cmd_check(cfg: RunConfig) -> tuple[int, str]:
    model = cfg.build_model()
    report = _run_check(cfg, model)
    text = render_json(report_dict(report, model.params))
    return (EXIT_OK if report.theorem_applicable else EXIT_HYPOTHESES_FAIL), text


SWEEP_COLUMNS = (
    "sigma0", "sigma_L", "sigma_R", "sigma_total", "kernel_dim",
    "E_L", "E_R", "C_L", "C_R", "theorem_applicable", "error",
)


def _sweep_point(cfg: RunConfig, point: dict) -> dict:
    if "gamma" in point:
        name = cfg.model.get("name")
        if name not in ("xy", "xy_anisotropic", "xy_isotropic", "xy_cut"):
            raise ConfigError("a gamma sweep needs an xy model")
        model_data = {"name": "xy_anisotropic", "gamma": point["gamma"]}
    else:
        model_data = cfg.model
    left = cfg.reservoir_left.with_beta(point["beta_L"]) if "beta_L" in point else cfg.reservoir_left
    right = cfg.reservoir_right.with_beta(point["beta_R"]) if "beta_R" in point else cfg.reservoir_right
    row = dict(point)
    try:
        report = _run_check(cfg, model_from_dict(model_data), left, right)
    except NessLabError as exc:
        if isinstance(exc, ConfigError):
            raise
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(
        sigma0=report.sigma0,
        sigma_L=report.sigma_L,
        sigma_R=report.sigma_R,
        sigma_total=report.sigma_total,
        kernel_dim=report.kernel_dim,
        theorem_applicable=report.theorem_applicable,
        **report.criteria,
    )
    return row


def sweep_rows(cfg: RunConfig, jobs: int = 1) -> list[dict]:
    if not cfg.sweep:
        raise ConfigError("config has no sweep axes")
    names = [ax.parameter for ax in cfg.sweep]
    if len(set(names)) != len(names):
        raise ConfigError("sweep axes must name distinct parameters")
    grid = [dict(zip(names, map(float, combo))) for combo in itertools.product(*(ax.values() for ax in cfg.sweep))]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda p: _sweep_point(cfg, p), grid))
    return [_sweep_point(cfg, p) for p in grid]


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([row[k] if isinstance(row.get(k), str) else _cell(row.get(k)) for k in header])
    return buf.getvalue()


def cmd_sweep(cfg: RunConfig, jobs: int = 1) -> tuple[int, str]:
    rows = sweep_rows(cfg, jobs)
    header = [ax.parameter for ax in cfg.sweep] + list(SWEEP_COLUMNS)
    return EXIT_OK, _csv(header, rows)


def initial_state(cfg: RunConfig, spec: str, H) -> np.ndarray:
    d = H.shape[0]
    if spec == "gibbs-left":
        return gibbs(H, cfg.reservoir_left.beta)
    if spec == "gibbs-right":
        return gibbs(H, cfg.reservoir_right.beta)
    if spec == "maximally-mixed":
        return np.eye(d, dtype=complex) / d
    if spec.startswith("file:"):
        path = Path(spec[5:])
        try:
            rho = parse_matrix(json.loads(path.read_text()), str(path))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read initial state: {exc}") from None
        if rho.shape != (d, d):
            raise ConfigError(f"initial state must be {d}x{d}")
        if not linalg.is_hermitian(rho) or abs(np.trace(rho) - 1) > 1e-8 or not linalg.is_psd(rho, 1e-10):
            raise ConfigError("initial state must be a Hermitian, PSD, trace-one matrix")
        return rho
    raise ConfigError(f"unknown initial state {spec!r}")


def evolve_rows(cfg: RunConfig, initial: str, t_max: float, steps: int) -> list[dict]:
    if not t_max > 0:
        raise ConfigError("--t-max must be positive")
    if steps < 1:
        raise ConfigError("--steps must be at least 1")
    model = cfg.build_model()
    tol = cfg.tolerances
    left, right = cfg.reservoir_left, cfg.reservoir_right
    K_L = davies_generator(model.H, model.Q_L, left, tol.cluster_tol)
    K_R = davies_generator(model.H, model.Q_R, right, tol.cluster_tol)
    K = total_generator(K_L, K_R)
    try:
        rho_ness = analysis.ness(K, tol.rank_tol)
    except analysis.NonUniqueStationaryState:
        rho_ness = None
    rho = initial_state(cfg, initial, model.H)
    step = propagator(K, t_max / steps)
    v = linalg.vectorize(rho)
    rows = []
    for k in range(steps + 1):
        state = linalg.hermitian_part(linalg.devectorize(v, K.dim))
        try:
            sigma = analysis.entropy_production_total(model.H, (left.beta, right.beta), K_L, K_R, state)
        except NotFaithful:
            sigma = float("nan")
        dist = None
        if rho_ness is not None:
            dist = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(state - rho_ness))))
        rows.append({
            "t": t_max * k / steps,
            "energy": float(np.trace(model.H @ state).real),
            "sigma": sigma,
            "trace_distance": dist,
        })
        v = step @ v
    return rows


def cmd_evolve(cfg: RunConfig, initial: str, t_max: float, steps: int) -> tuple[int, str]:
    rows = evolve_rows(cfg, initial, t_max, steps)
    return EXIT_OK, _csv(["t", "energy", "sigma", "trace_distance"], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nesslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nesslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="JSON run configuration")
        p.add_argument("-o", "--output", help="write here instead of the config's output path or stdout")

    common(sub.add_parser("check", help="evaluate criteria, NESS, flux and entropy production"))
    p = sub.add_parser("sweep", help="tabulate thermodynamics over a parameter grid (CSV)")
    common(p)
    p.add_argument("--jobs", type=int, default=1, help="evaluate grid points in parallel")
    p = sub.add_parser("evolve", help="trajectory of energy, entropy production and distance to NESS (CSV)")
    common(p)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument(
        "--initial",
        default="maximally-mixed",
        help="gibbs-left | gibbs-right | maximally-mixed | file:<path>",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "check":
            code, text = cmd_check(cfg)
        elif args.command == "sweep":
            code, text = cmd_sweep(cfg, args.jobs)
        else:
            code, text = cmd_evolve(cfg, args.initial, args.t_max, args.steps)
    except ConfigError as exc:
        print(f"nesslab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NessLabError, np.linalg.LinAlgError) as exc:
        print(f"nesslab: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    out = args.output or cfg.output_path
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
