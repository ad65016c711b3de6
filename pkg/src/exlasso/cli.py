"""Command-line interface: ``fit``, ``simulate``, and ``influence``.

All commands are pure functions of (input files, flags, seed): outputs are
sorted-key JSON / fixed-format CSV and rerunning with the same seed
reproduces them byte for byte. The manifest timestamp therefore comes
from SOURCE_DATE_EPOCH (seconds) when set and a fixed epoch otherwise,
never from the wall clock.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .data import read_csv, standardize, to_raw_scale
from .errors import ConfigError, DataError, ExlassoError, NumericalError
from .influence import influence, influence_ratio
from .penalty import PenaltySpec
from .selection import CvConfig, cross_validate
from .simulate import METHOD_NAMES, ScenarioSpec, run_scenario_sweep
from .solver import FitConfig, default_lambda_grid, fit, lambda_max

SCENARIO_PRESETS = {
    # axis, values, and baseline overrides per named scenario
    "linear": {
        1: ("tau", [6.0, 7.0, 11.0, 15.0], {}),
        2: ("events", [1, 2, 3, 4], {"tau": 11.0}),
        3: ("gamma_rate", [0.33, 0.2, 0.125, 0.083], {"tau": 11.0}),
        4: ("p", [750, 1500, 2250, 3000], {"tau": 11.0}),
    },
    "mixture": {
        1: ("tau", [6.0, 7.0, 9.0, 50.0], {}),
        2: ("events", [1, 2, 3, 4], {"tau": 6.0}),
        3: ("gamma_rate", [0.33, 0.2, 0.166, 0.125], {"tau": 9.0}),
        4: ("p", [750, 1500, 2250, 3000], {"tau": 9.0}),
    },
}


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_snapshot: dict
    seed: int
    tool_version: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config_snapshot,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }


def _timestamp() -> str:
    epoch = int(os.environ.get("SOURCE_DATE_EPOCH", "0"))
    return datetime.fromtimestamp(epoch, tz=timezone.utc).isoformat()


def _manifest(command: str, config: dict, seed: int) -> RunManifest:
    return RunManifest(
        command=command,
        config_snapshot=config,
        seed=seed,
        tool_version=__version__,
        timestamp=_timestamp(),
    )


def _resolve_seed(args) -> int:
    env = os.environ.get("EXLASSO_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _resolve_threads(args) -> int:
    env = os.environ.get("EXLASSO_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, args.threads)


def _check_gamma(gamma: int) -> int:
    if gamma < 2 or gamma % 2 != 0:
        raise ConfigError("gamma must be even (an even integer >= 2)")
    return gamma


def _penalty_from_args(args) -> PenaltySpec:
    return PenaltySpec(args.penalty, 0.0, scad_a=args.scad_a, mcp_gamma=args.mcp_gamma)


def _response_arg(value: str):
    try:
        return int(value)
    except ValueError:
        return value


def _write_json(path: str | None, payload: dict):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- fit -------------------------------------------------------------------

def cmd_fit(args) -> int:
    gamma = _check_gamma(args.gamma)
    seed = _resolve_seed(args)
    data = standardize(read_csv(args.data, _response_arg(args.response)))
    penalty = _penalty_from_args(args)
    base = FitConfig(
        gamma=gamma, penalty=penalty,
        delta=args.delta, alpha=args.alpha, max_iters=args.max_iters,
    )

    cv_info = None
    if args.lambda_cv:
        grid = default_lambda_grid(data, gamma)
        best, curve = cross_validate(
            data, base, CvConfig(lambda_grid=tuple(grid), folds=args.folds, seed=seed)
        )
        lam = best
        cv_info = {
            "folds": args.folds,
            "lambdas": curve.lambdas.tolist(),
            "mean_score": curve.mean_score.tolist(),
            "sd_score": curve.sd_score.tolist(),
        }
    elif args.lam is not None:
        lam = args.lam
        if lam < 0:
            raise ConfigError("lambda must be >= 0")
    else:
        raise ConfigError("either --lambda or --lambda-cv is required")

    result = fit(data, FitConfig(
        gamma=gamma, penalty=penalty.with_lambda(lam),
        delta=args.delta, alpha=args.alpha, max_iters=args.max_iters,
    ))
    raw = to_raw_scale(result.coefficients, data)

    config = {
        "data": args.data, "response": args.response,
        "gamma": gamma, "penalty": args.penalty, "lambda": lam,
        "delta": args.delta, "alpha": args.alpha, "max_iters": args.max_iters,
        "scad_a": args.scad_a, "mcp_gamma": args.mcp_gamma,
    }
    payload = {
        "manifest": _manifest("fit", config, seed).to_dict(),
        "lambda": lam,
        "coefficients": {
            "standardized": result.coefficients.beta.tolist(),
            "raw": raw.beta.tolist(),
            "raw_intercept": raw.intercept,
            "support": result.coefficients.support.tolist(),
        },
        "objective": {
            "initial": float(result.objective_trace[0]),
            "final": float(result.objective_trace[-1]),
            "iterations": result.iterations,
            "converged": result.converged,
            "final_step": result.final_step,
        },
    }
    if cv_info is not None:
        payload["cv"] = cv_info
    _write_json(args.out, payload)
    return 0


# -- simulate ----------------------------------------------------------------

def cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    threads = _resolve_threads(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHOD_NAMES:
            raise ConfigError(f"unknown method {m!r}; choose from {', '.join(METHOD_NAMES)}")

    overrides = {}
    if args.scenario is not None:
        axis, values, overrides = SCENARIO_PRESETS[args.model][args.scenario]
    else:
        if not args.axis or not args.values:
            raise ConfigError("provide --scenario or both --axis and --values")
        axis = args.axis
        values = [float(v) for v in args.values.split(",")]
        if axis in ("events", "p"):
            values = [int(v) for v in values]

    base = ScenarioSpec(model=args.model, seed=seed, **overrides)
    table = run_scenario_sweep(base, axis, values, methods,
                               replicates=args.replicates, threads=threads)

    os.makedirs(args.out, exist_ok=True)
    config = {
        "model": args.model, "scenario": args.scenario, "axis": axis,
        "values": [float(v) for v in values], "methods": methods,
        "replicates": args.replicates,
        "n": base.n, "p": base.p, "s": base.s,
        "tau": base.tau, "events": base.events,
        "gamma_shape": base.gamma_shape, "gamma_rate": base.gamma_rate,
        "rho": base.rho, "ar_coeff": base.ar_coeff,
    }
    manifest = _manifest("simulate", config, seed).to_dict()

    def _write(name: str, text: str):
        with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
            fh.write(text)

    _write("table_f1.csv", table.table_csv("f1"))
    _write("table_tpr.csv", table.table_csv("tpr"))
    _write("table_fpr.csv", table.table_csv("fpr"))
    _write("results_long.csv", table.long_csv())
    payload = dict(table.to_dict())
    payload["manifest"] = manifest
    _write("results.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _write("manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


# -- influence ---------------------------------------------------------------

def cmd_influence(args) -> int:
    gamma = _check_gamma(args.gamma)
    seed = _resolve_seed(args)
    data = standardize(read_csv(args.data, _response_arg(args.response)))
    if args.lam is None or args.lam < 0:
        raise ConfigError("--lambda is required and must be >= 0")
    penalty = _penalty_from_args(args).with_lambda(args.lam)

    x0_std, y0_std = _parse_point(args.point, data)
    result = fit(data, FitConfig(gamma=gamma, penalty=penalty))
    report = influence(data, result.coefficients, penalty, gamma, (x0_std, y0_std))

    payload_report = report
    if args.compare_lasso:
        lasso_report = influence(data, result.coefficients, penalty, 2, (x0_std, y0_std))
        ratios = influence_ratio(report, lasso_report)
        payload_report = type(report)(
            x0=report.x0, y0=report.y0, r0=report.r0, gamma=report.gamma,
            active=report.active, per_coordinate=report.per_coordinate,
            a_matrix=report.a_matrix, ratio_vs_lasso=ratios[report.active],
        )

    config = {
        "data": args.data, "response": args.response,
        "gamma": gamma, "penalty": args.penalty, "lambda": args.lam,
        "point": args.point, "compare_lasso": args.compare_lasso,
    }
    payload = {
        "manifest": _manifest("influence", config, seed).to_dict(),
        "influence": payload_report.to_dict(),
        "support": result.coefficients.support.tolist(),
    }
    _write_json(args.out, payload)
    return 0


def _parse_point(spec: str, data):
    """Either a 0-based row index into the data or an inline
    'y0,x1,...,xp' list on the raw scale (standardized internally)."""
    if "," not in spec:
        try:
            row = int(spec)
        except ValueError as exc:
            raise ConfigError(f"malformed --point {spec!r}") from exc
        if not 0 <= row < data.n:
            raise ConfigError(f"--point row {row} out of range [0, {data.n})")
        return data.x[row].copy(), float(data.y[row])
    try:
        vals = [float(tok) for tok in spec.split(",")]
    except ValueError as exc:
        raise ConfigError(f"malformed --point {spec!r}") from exc
    if len(vals) != data.p + 1:
        raise ConfigError(f"--point needs 1 + p = {data.p + 1} values, got {len(vals)}")
    y0 = (vals[0] - data.y_mean) / data.y_scale
    x0 = (np.asarray(vals[1:]) - data.column_means) / data.column_scales
    return x0, y0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exlasso",
        description="Sparse regression for extreme values: fitting, simulation sweeps, influence diagnostics.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_fit(p):
        p.add_argument("--data", required=True, help="input CSV file")
        p.add_argument("--response", required=True, help="response column name or index")
        p.add_argument("--gamma", type=int, required=True, help="even loss power (2 = least squares)")
        p.add_argument("--penalty", choices=["l1", "scad", "mcp"], default="l1")
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--delta", type=float, default=1e-7)
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--max-iters", type=int, default=10_000)
        p.add_argument("--scad-a", type=float, default=3.7)
        p.add_argument("--mcp-gamma", type=float, default=3.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output JSON path (default: stdout)")

    p_fit = sub.add_parser("fit", help="fit a penalized power-loss regression on a CSV")
    add_common_fit(p_fit)
    p_fit.add_argument("--lambda-cv", action="store_true",
                       help="select lambda by k-fold cross-validation instead of --lambda")
    p_fit.add_argument("--folds", type=int, default=5)
    p_fit.set_defaults(func=cmd_fit)

    p_sim = sub.add_parser("simulate", help="run a benchmark sweep and write score tables")
    p_sim.add_argument("--model", choices=["linear", "mixture"], required=True)
    p_sim.add_argument("--scenario", type=int, choices=[1, 2, 3, 4], default=None)
    p_sim.add_argument("--axis", choices=["tau", "events", "gamma_rate", "p"], default=None)
    p_sim.add_argument("--values", default=None, help="comma-separated axis values")
    p_sim.add_argument("--methods", required=True,
                       help="comma list, e.g. exlasso4,exlasso6,lasso,threshold")
    p_sim.add_argument("--replicates", type=int, default=10)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--threads", type=int, default=1)
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.set_defaults(func=cmd_simulate)

    p_inf = sub.add_parser("influence", help="influence of a contamination point on the fit")
    add_common_fit(p_inf)
    p_inf.add_argument("--point", required=True,
                       help="row index into the data, or inline 'y0,x1,...,xp' on the raw scale")
    p_inf.add_argument("--compare-lasso", action="store_true",
                       help="also report |IF| ratios against the gamma = 2 influence")
    p_inf.set_defaults(func=cmd_influence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ExlassoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
