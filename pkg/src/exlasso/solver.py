"""Proximal gradient descent with backtracking for penalized power losses.

Each outer iteration resets the step size to 1, takes the gradient of the
smooth loss, and shrinks the step by ``alpha`` until the quadratic
sufficient-decrease condition

    g(z) <= g(beta) + grad(beta)^T (z - beta) + ||z - beta||^2 / (2 t)

holds for z = prox_{t * P}(beta - t * grad). The first z that passes is
accepted. The loop exits when the per-coordinate-averaged l1 change
(1/N) ||beta_new - beta||_1 drops below ``delta``, or at ``max_iters``
(reported via ``converged = False``, not an error).

Warm-started regularization paths and the l1 zero-solution threshold
``lambda_max`` live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .data import Coefficients, Dataset
from .errors import ConfigError, EmptyLambdaGrid, NotStandardized, StepUnderflow
from .loss import GammaLoss, int_power
from .penalty import PenaltySpec, penalty_value, prox

__all__ = ["FitConfig", "FitResult", "fit", "fit_path", "lambda_max", "default_lambda_grid"]

# below this trial step the backtracking loop is assumed broken
MIN_STEP = 1e-20


@dataclass(frozen=True)
class FitConfig:
    """Solver hyperparameters. ``delta`` is the l1-change exit tolerance,
    ``alpha`` the backtracking shrink factor."""

    gamma: int = 2
    penalty: PenaltySpec = field(default_factory=PenaltySpec)
    delta: float = 1e-7
    alpha: float = 0.5
    max_iters: int = 10_000
    initial_beta: np.ndarray | None = None

    def __post_init__(self):
        if self.gamma < 2 or self.gamma % 2 != 0:
            raise ConfigError(f"gamma must be an even integer >= 2, got {self.gamma}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie strictly between 0 and 1")
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")


@dataclass(frozen=True)
class FitResult:
    coefficients: Coefficients
    iterations: int
    objective_trace: np.ndarray
    converged: bool
    final_step: float
    lam: float = 0.0

    @property
    def support(self) -> np.ndarray:
        return self.coefficients.support


def proximal_gradient(x: np.ndarray, y: np.ndarray, loss, penalty: PenaltySpec,
                      delta: float, alpha: float, max_iters: int,
                      initial_beta: np.ndarray | None = None) -> FitResult:
    """Generic engine shared by the power-loss solver and the smoothed
    quantile baseline. ``loss`` must expose value(residuals) and
    gradient(x, residuals)."""
    n, p = x.shape
    if initial_beta is None:
        beta = np.zeros(p)
    else:
        beta = np.asarray(initial_beta, dtype=float).copy()
        if beta.shape[0] != p:
            raise ConfigError("initial_beta has wrong length")

    res = y - x @ beta
    g_beta = loss.value(res)
    trace = [g_beta + penalty_value(penalty, beta)]
    converged = False
    t = 1.0
    iterations = 0

    for _ in range(max_iters):
        grad = loss.gradient(x, res)
        t = 1.0
        # fp slack: near a fixed point both sides agree to roundoff and the
        # test must not push t to zero over noise in the last bits of g
        slack = 1e-14 * (1.0 + abs(g_beta))
        while True:
            z = prox(penalty, beta - t * grad, t)
            res_z = y - x @ z
            g_z = loss.value(res_z)
            diff = z - beta
            bound = g_beta + float(grad @ diff) + float(diff @ diff) / (2.0 * t)
            if g_z <= bound + slack:
                break
            t *= alpha
            if t < MIN_STEP:
                raise StepUnderflow(f"backtracking step fell below {MIN_STEP}")
        iterations += 1
        change = float(np.abs(diff).sum()) / n
        beta, res, g_beta = z, res_z, g_z
        trace.append(g_beta + penalty_value(penalty, beta))
        if change < delta:
            converged = True
            break

    return FitResult(
        coefficients=Coefficients(beta=beta),
        iterations=iterations,
        objective_trace=np.asarray(trace),
        converged=converged,
        final_step=t,
        lam=penalty.lam,
    )


def fit(data: Dataset, config: FitConfig) -> FitResult:
    """Fit the penalized gamma-power regression on standardized data."""
    if not data.standardized:
        raise NotStandardized("fit requires standardized data; call standardize() first")
    loss = GammaLoss(config.gamma, scale_by_gamma_n=True)
    return proximal_gradient(
        data.x, data.y, loss, config.penalty,
        config.delta, config.alpha, config.max_iters, config.initial_beta,
    )


def fit_path(data: Dataset, config: FitConfig, lambdas,
             support_cap: int | None = None) -> list[FitResult]:
    """Fit a strictly decreasing lambda grid with warm starts.

    ``support_cap`` optionally stops the path early once a solution's
    support exceeds the cap; remaining grid points are skipped (the
    returned list is aligned with the consumed prefix of ``lambdas``).
    """
    lambdas = [float(l) for l in lambdas]
    if not lambdas:
        raise EmptyLambdaGrid("lambda grid is empty")
    if any(b >= a for a, b in zip(lambdas, lambdas[1:])):
        raise ConfigError("lambda grid must be strictly decreasing")
    results: list[FitResult] = []
    warm = config.initial_beta
    for lam in lambdas:
        cfg = replace(config, penalty=config.penalty.with_lambda(lam), initial_beta=warm)
        result = fit(data, cfg)
        results.append(result)
        warm = result.coefficients.beta
        if support_cap is not None and result.coefficients.support_size > support_cap:
            break
    return results


def lambda_max(data: Dataset, gamma: int) -> float:
    """Smallest l1 penalty at which the all-zero solution is stationary:
    the max-abs gradient coordinate at beta = 0 under the solver's
    averaged scaling, (1/N) ||X^T y^{gamma-1}||_inf."""
    if not data.standardized:
        raise NotStandardized("lambda_max requires standardized data")
    if gamma < 2 or gamma % 2 != 0:
        raise ConfigError(f"gamma must be an even integer >= 2, got {gamma}")
    w = int_power(data.y, gamma - 1)
    return float(np.abs(data.x.T @ w).max()) / data.n


def default_lambda_grid(data: Dataset, gamma: int, num: int = 50,
                        min_ratio: float = 1e-3) -> np.ndarray:
    """Log-spaced grid from lambda_max down to min_ratio * lambda_max."""
    top = lambda_max(data, gamma)
    if top <= 0:
        raise ConfigError("lambda_max is zero; response is orthogonal to all columns")
    return np.geomspace(top, top * min_ratio, num=num)
