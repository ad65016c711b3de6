"""Synthetic benchmark generators and the feature-selection sweep harness.

Two data-generating processes are provided. The linear model draws AR(1)
predictor columns (unit marginal variance, cross-correlated in pairs
through shared innovations), injects rare positive extreme values into
every column at column-specific rows, and forms the response from a
sparse unit-coefficient vector plus centered Gamma noise. The mixture
model builds four predictor blocks (extreme-value columns, mean-shifted
columns, correlated decoys with different extreme rows, and white noise)
and routes each response row through the block that matches its mixture
component, so only the first block drives the response extremes.

``run_scenario_sweep`` runs a grid of scenario settings x methods x
replicates and reports support-recovery scores shaped like a results
table (rows = methods, columns = axis values, cells = "mean (sd)").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .baselines import QuantileConfig, ThresholdConfig, cusum_threshold, fit_quantile, quantile_lambda_max
from .data import Coefficients, Dataset, standardize
from .errors import ConfigError, InvalidSpec
from .penalty import PenaltySpec
from .selection import oracle_sparsity_select
from .solver import FitConfig, FitResult, default_lambda_grid, fit_path

__all__ = [
    "ScenarioSpec",
    "ScenarioTruth",
    "MetricReport",
    "SweepTable",
    "generate_linear",
    "generate_mixture",
    "generate",
    "score_support",
    "run_scenario_sweep",
    "METHOD_NAMES",
]

SWEEP_AXES = ("tau", "events", "gamma_rate", "p")


@dataclass(frozen=True)
class ScenarioSpec:
    """Recipe for one synthetic dataset. ``tau`` is the extreme-event
    magnitude in baseline-SD units, ``events`` the number of extremes per
    column, and the Gamma(shape, rate) noise is centered to sample mean 0.
    """

    model: str = "linear"
    n: int = 1000
    p: int = 750
    s: int = 10
    tau: float = 11.0
    events: int = 1
    gamma_shape: float = 1.0
    gamma_rate: float = 0.33
    rho: float = 0.9
    ar_coeff: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.model not in ("linear", "mixture"):
            raise InvalidSpec(f"unknown model {self.model!r}")
        if self.n < 2 or self.p < 1:
            raise InvalidSpec("need n >= 2 and p >= 1")
        if not 0 < self.s <= self.p:
            raise InvalidSpec("need 0 < s <= p")
        if self.model == "mixture" and self.p < 31:
            raise InvalidSpec("mixture model needs p >= 31 (three 10-column blocks plus noise)")
        if self.events < 1 or self.events > self.n // 10:
            raise InvalidSpec("events must satisfy 1 <= events <= n/10")
        if self.tau < 0:
            raise InvalidSpec("tau must be >= 0")
        if self.gamma_shape <= 0 or self.gamma_rate <= 0:
            raise InvalidSpec("Gamma noise parameters must be positive")
        if not 0 <= self.rho < 1:
            raise InvalidSpec("rho must lie in [0, 1)")
        if not -1 < self.ar_coeff < 1:
            raise InvalidSpec("ar_coeff must lie in (-1, 1)")


@dataclass(frozen=True)
class ScenarioTruth:
    true_support: np.ndarray
    true_beta: np.ndarray
    extreme_rows: list
    component_assignment: np.ndarray | None = None


@dataclass(frozen=True)
class MetricReport:
    f1: float
    tpr: float
    fpr: float
    support_size: int


def _ar1_columns(innovations: np.ndarray, phi: float) -> np.ndarray:
    """Stationary AR(1) per column with marginal variance equal to the
    innovations' variance: x_t = phi x_{t-1} + sqrt(1-phi^2) w_t."""
    n = innovations.shape[0]
    x = np.empty_like(innovations)
    x[0] = innovations[0]
    c = np.sqrt(1.0 - phi * phi)
    for t in range(1, n):
        x[t] = phi * x[t - 1] + c * innovations[t]
    return x


def _centered_gamma(rng: np.random.Generator, shape: float, rate: float, n: int) -> np.ndarray:
    eps = rng.gamma(shape, scale=1.0 / rate, size=n)
    return eps - eps.mean()


def generate_linear(spec: ScenarioSpec) -> tuple[Dataset, ScenarioTruth]:
    """AR(1) design with paired cross-correlation, per-column injected
    extremes, sparse unit coefficients, centered Gamma noise."""
    if spec.model != "linear":
        raise InvalidSpec("generate_linear needs model = 'linear'")
    rng = np.random.default_rng(spec.seed)
    n, p = spec.n, spec.p
    half = p // 2

    base = rng.normal(size=(n, half))
    extra = rng.normal(size=(n, p - half))
    innovations = np.empty((n, p))
    innovations[:, :half] = base
    # partner columns share innovations at correlation rho, which carries
    # over exactly to the stationary AR(1) processes
    mix = np.sqrt(1.0 - spec.rho ** 2)
    innovations[:, half:2 * half] = spec.rho * base + mix * extra[:, :half]
    if p % 2:
        innovations[:, -1] = extra[:, -1]
    x = _ar1_columns(innovations, spec.ar_coeff)

    extreme_rows = []
    for j in range(p):
        rows = np.sort(rng.choice(n, size=spec.events, replace=False))
        x[rows, j] += spec.tau
        extreme_rows.append(rows)

    support = np.sort(rng.choice(p, size=spec.s, replace=False))
    beta = np.zeros(p)
    beta[support] = 1.0
    y = x @ beta + _centered_gamma(rng, spec.gamma_shape, spec.gamma_rate, n)

    truth = ScenarioTruth(true_support=support, true_beta=beta, extreme_rows=extreme_rows)
    return Dataset.from_arrays(x, y), truth


def generate_mixture(spec: ScenarioSpec) -> tuple[Dataset, ScenarioTruth]:
    """Two-component mixture: rows holding a block-1 extreme take their
    response from the extreme block, every other row from the mean-shifted
    block. The target support is the 10 block-1 columns."""
    if spec.model != "mixture":
        raise InvalidSpec("generate_mixture needs model = 'mixture'")
    rng = np.random.default_rng(spec.seed)
    n, p = spec.n, spec.p
    block = 10

    g1 = rng.normal(size=(n, block))
    g2 = rng.normal(size=(n, block))
    shifted = np.sort(rng.choice(n, size=n // 2, replace=False))
    g2[shifted] += 2.0  # mean shift of 2 sigma^2 with sigma^2 = 1
    g3 = spec.rho * g1 + np.sqrt(1.0 - spec.rho ** 2) * rng.normal(size=(n, block))
    g4 = rng.normal(size=(n, p - 3 * block))

    rows1 = []
    for j in range(block):
        rows = np.sort(rng.choice(n, size=spec.events, replace=False))
        g1[rows, j] += spec.tau
        rows1.append(rows)
    rows3 = []
    for j in range(block):
        pool = np.setdiff1d(np.arange(n), rows1[j])
        rows = np.sort(rng.choice(pool, size=spec.events, replace=False))
        g3[rows, j] += spec.tau
        rows3.append(rows)

    x = np.hstack([g1, g2, g3, g4])
    extreme_rows = rows1 + [np.empty(0, dtype=int)] * block + rows3
    extreme_rows += [np.empty(0, dtype=int)] * (p - 3 * block)

    component = np.full(n, 2, dtype=int)
    comp1_rows = np.unique(np.concatenate(rows1))
    component[comp1_rows] = 1

    eps = _centered_gamma(rng, spec.gamma_shape, spec.gamma_rate, n)
    y = np.where(component == 1, g1.sum(axis=1), g2.sum(axis=1)) + eps

    support = np.arange(block)
    beta = np.zeros(p)
    beta[support] = 1.0
    truth = ScenarioTruth(
        true_support=support,
        true_beta=beta,
        extreme_rows=extreme_rows,
        component_assignment=component,
    )
    return Dataset.from_arrays(x, y), truth


def generate(spec: ScenarioSpec) -> tuple[Dataset, ScenarioTruth]:
    if spec.model == "linear":
        return generate_linear(spec)
    return generate_mixture(spec)


def score_support(estimated: Coefficients, truth: ScenarioTruth) -> MetricReport:
    """Support-recovery scores of an estimate against the true support."""
    est = set(int(j) for j in estimated.support)
    true = set(int(j) for j in truth.true_support)
    p = truth.true_beta.shape[0]
    hits = len(est & true)
    tpr = hits / len(true) if true else 0.0
    fpr = len(est - true) / (p - len(true)) if p > len(true) else 0.0
    precision = hits / len(est) if est else 0.0
    recall = tpr
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return MetricReport(f1=f1, tpr=tpr, fpr=fpr, support_size=len(est))


# -- sweep methods ---------------------------------------------------------

# solver settings for sweep fits; looser than library defaults because
# support recovery does not need 1e-7 coefficient resolution
_SWEEP_DELTA = 1e-6
_SWEEP_MAX_ITERS = 4000
_PATH_POINTS = 30
_PATH_MIN_RATIO = 1e-2

_POWER_METHODS = {
    "exlasso4": (4, "l1"), "exlasso6": (6, "l1"),
    "exscad4": (4, "scad"), "exscad6": (6, "scad"),
    "exmcp4": (4, "mcp"), "exmcp6": (6, "mcp"),
    "lasso": (2, "l1"), "scad": (2, "scad"), "mcp": (2, "mcp"),
}
_QUANTILE_METHODS = {"median": 0.5, "q0.9": 0.9, "q0.99": 0.99, "q0.999": 0.999}

METHOD_NAMES = tuple(_POWER_METHODS) + tuple(_QUANTILE_METHODS) + ("threshold",)


def _oracle_path_fit(data: Dataset, gamma: int, family: str, target: int) -> Coefficients:
    grid = default_lambda_grid(data, gamma, num=_PATH_POINTS, min_ratio=_PATH_MIN_RATIO)
    cfg = FitConfig(
        gamma=gamma, penalty=PenaltySpec(family),
        delta=_SWEEP_DELTA, max_iters=_SWEEP_MAX_ITERS,
    )
    path = fit_path(data, cfg, grid, support_cap=3 * target + 10)
    return oracle_sparsity_select(path, target).coefficients


def _quantile_path_fit(data: Dataset, tau_q: float, target: int) -> Coefficients:
    base = QuantileConfig(tau_q=tau_q, delta=_SWEEP_DELTA, max_iters=_SWEEP_MAX_ITERS)
    top = quantile_lambda_max(data, base)
    grid = np.geomspace(top, top * _PATH_MIN_RATIO, num=_PATH_POINTS)
    path = []
    for lam in grid:
        path.append(fit_quantile(data, replace(base, lam=float(lam))))
        if path[-1].coefficients.support_size > 3 * target + 10:
            break
    return oracle_sparsity_select(path, target).coefficients


def _threshold_fit(data: Dataset, target: int) -> Coefficients:
    flags = cusum_threshold(data.y, ThresholdConfig())
    keep = np.flatnonzero(flags)
    if keep.size < max(10, 2 * target):
        return Coefficients(beta=np.zeros(data.p))
    subset = standardize(Dataset.from_arrays(data.x[keep], data.y[keep]))
    return _oracle_path_fit(subset, 2, "l1", target)


def run_method(name: str, data: Dataset, truth: ScenarioTruth) -> MetricReport:
    """Run one named method on standardized data; oracle-sparsity tuning
    with the true support size throughout, matching the benchmark
    protocol."""
    target = int(truth.true_support.shape[0])
    if name in _POWER_METHODS:
        gamma, family = _POWER_METHODS[name]
        coef = _oracle_path_fit(data, gamma, family, target)
    elif name in _QUANTILE_METHODS:
        coef = _quantile_path_fit(data, _QUANTILE_METHODS[name], target)
    elif name == "threshold":
        coef = _threshold_fit(data, target)
    else:
        raise ConfigError(f"unknown method {name!r}")
    return score_support(coef, truth)


# -- sweep harness ---------------------------------------------------------

@dataclass(frozen=True)
class SweepTable:
    """Per-method, per-axis-value mean/SD scores plus the raw replicate
    records (method, axis value, replicate, f1, tpr, fpr)."""

    axis: str
    values: tuple
    methods: tuple
    replicates: int
    mean: dict      # metric -> (methods x values) array
    sd: dict
    records: list   # long-format rows

    def table_csv(self, metric: str = "f1") -> str:
        lines = ["method," + ",".join(_fmt_value(v) for v in self.values)]
        for i, m in enumerate(self.methods):
            cells = [
                f"{_sig4(self.mean[metric][i, j])} ({_sig4(self.sd[metric][i, j])})"
                for j in range(len(self.values))
            ]
            lines.append(m + "," + ",".join(cells))
        return "\n".join(lines) + "\n"

    def long_csv(self) -> str:
        lines = ["method,axis_value,replicate,f1,tpr,fpr"]
        for rec in self.records:
            lines.append(
                f"{rec['method']},{_fmt_value(rec['axis_value'])},{rec['replicate']},"
                f"{rec['f1']!r},{rec['tpr']!r},{rec['fpr']!r}"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        out = {
            "axis": self.axis,
            "values": [_num(v) for v in self.values],
            "replicates": self.replicates,
            "methods": {},
        }
        for i, m in enumerate(self.methods):
            per = {}
            for j, v in enumerate(self.values):
                per[_fmt_value(v)] = {
                    metric + suffix: float(arr[i, j])
                    for metric in ("f1", "tpr", "fpr")
                    for suffix, arr in (("_mean", self.mean[metric]), ("_sd", self.sd[metric]))
                }
            out["methods"][m] = per
        return out

    def json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _num(v):
    return int(v) if float(v) == int(v) else float(v)


def _fmt_value(v) -> str:
    return str(_num(v))


def _sig4(v: float) -> str:
    return f"{v:.4g}"


def _run_cell(base: ScenarioSpec, axis: str, value, rep: int, methods) -> list[dict]:
    spec = replace(base, **{axis: _cast_axis(axis, value)}, seed=base.seed + rep)
    raw, truth = generate(spec)
    data = standardize(raw)
    out = []
    for m in methods:
        report = run_method(m, data, truth)
        out.append({
            "method": m, "axis_value": value, "replicate": rep,
            "f1": report.f1, "tpr": report.tpr, "fpr": report.fpr,
        })
    return out


def _cast_axis(axis: str, value):
    return int(value) if axis in ("events", "p") else float(value)


def run_scenario_sweep(base: ScenarioSpec, axis: str, values, methods,
                       replicates: int = 10, threads: int = 1) -> SweepTable:
    """Full cross product of axis values x methods x replicates.

    Replicate k uses seed = base.seed + k for every axis value, so methods
    and values are compared on paired draws. With threads > 1 the
    (value, replicate) cells run in a process pool; cell numerics are
    pinned to single-threaded BLAS either way, so results do not depend on
    the schedule.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = list(values)
    if not values:
        raise ConfigError("values must be nonempty")
    if replicates < 1:
        raise ConfigError("replicates must be >= 1")
    for m in methods:
        if m not in METHOD_NAMES:
            raise ConfigError(f"unknown method {m!r}")

    cells = [(vi, rep) for vi in range(len(values)) for rep in range(replicates)]
    if threads > 1:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=threads)(
            delayed(_run_cell_pinned)(base, axis, values[vi], rep, tuple(methods))
            for vi, rep in cells
        )
    else:
        results = [_run_cell_pinned(base, axis, values[vi], rep, tuple(methods)) for vi, rep in cells]

    records = []
    scores = {metric: np.zeros((len(methods), len(values), replicates)) for metric in ("f1", "tpr", "fpr")}
    for (vi, rep), cell in zip(cells, results):
        for rec in cell:
            records.append(rec)
            mi = list(methods).index(rec["method"])
            for metric in ("f1", "tpr", "fpr"):
                scores[metric][mi, vi, rep] = rec[metric]

    mean = {k: v.mean(axis=2) for k, v in scores.items()}
    sd = {
        k: (v.std(axis=2, ddof=1) if replicates > 1 else np.zeros(v.shape[:2]))
        for k, v in scores.items()
    }
    return SweepTable(
        axis=axis, values=tuple(values), methods=tuple(methods),
        replicates=replicates, mean=mean, sd=sd, records=records,
    )


def _run_cell_pinned(base, axis, value, rep, methods):
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return _run_cell(base, axis, value, rep, methods)
    with threadpool_limits(limits=1):
        return _run_cell(base, axis, value, rep, methods)
