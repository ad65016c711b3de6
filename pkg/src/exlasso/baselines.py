"""Comparator methods: penalized quantile regression and CUSUM-based
threshold-then-lasso preprocessing.

Quantile regression reuses the proximal-gradient engine on a quadratically
smoothed pinball loss, so the whole package shares one solver. The CUSUM
detector is a one-sided upper chart on rolling z-scores with conventional
reference/decision values; its flags gate the row filter for the
threshold pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Coefficients, Dataset, standardize
from .errors import ConfigError, NotStandardized, SeriesTooShort
from .loss import SmoothPinballLoss
from .penalty import PenaltySpec
from .solver import FitConfig, FitResult, fit, proximal_gradient

__all__ = [
    "QuantileConfig",
    "ThresholdConfig",
    "fit_quantile",
    "quantile_lambda_max",
    "cusum_threshold",
    "threshold_then_lasso",
]


@dataclass(frozen=True)
class QuantileConfig:
    tau_q: float
    lam: float = 0.0
    smoothing: float = 1e-4
    delta: float = 1e-7
    alpha: float = 0.5
    max_iters: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.tau_q < 1.0:
            raise ConfigError("tau_q must lie in (0, 1)")
        if self.lam < 0:
            raise ConfigError("lambda must be >= 0")
        if self.smoothing <= 0:
            raise ConfigError("smoothing must be positive")


def fit_quantile(data: Dataset, cfg: QuantileConfig) -> FitResult:
    """l1-penalized smoothed quantile regression at level ``tau_q``.

    Minimizes (1/N) sum pinball_tau(y - x beta), smoothed quadratically in
    a ``smoothing``-wide band around zero, plus lam * ||beta||_1.
    """
    if not data.standardized:
        raise NotStandardized("fit_quantile requires standardized data")
    loss = SmoothPinballLoss(cfg.tau_q, cfg.smoothing)
    return proximal_gradient(
        data.x, data.y, loss, PenaltySpec("l1", cfg.lam),
        cfg.delta, cfg.alpha, cfg.max_iters,
    )


def quantile_lambda_max(data: Dataset, cfg: QuantileConfig) -> float:
    """Max-abs gradient of the smoothed pinball loss at beta = 0; the
    zero solution is stationary for any lambda at or above this."""
    loss = SmoothPinballLoss(cfg.tau_q, cfg.smoothing)
    return float(np.abs(loss.gradient(data.x, data.y)).max())


@dataclass(frozen=True)
class ThresholdConfig:
    """One-sided CUSUM on rolling z-scores: reference value ``drift`` and
    decision value ``threshold`` are in SD units of the rolling window."""

    drift: float = 0.5
    threshold: float = 5.0
    adaptive_window: int = 100

    def __post_init__(self):
        if self.drift < 0:
            raise ConfigError("drift must be >= 0")
        if self.threshold <= 0:
            raise ConfigError("threshold must be positive")
        if self.adaptive_window < 10:
            raise ConfigError("adaptive_window must be >= 10")


def cusum_threshold(series, cfg: ThresholdConfig) -> np.ndarray:
    """Flag upper extreme values in a series.

    Each point is standardized by the mean/SD of the trailing
    ``adaptive_window`` observations (the leading block is standardized by
    the first full window), then accumulated as
    S_i = max(0, S_{i-1} + z_i - drift); an index is flagged when
    S_i > threshold and the statistic resets to zero afterwards.
    """
    series = np.asarray(series, dtype=float)
    n = series.shape[0]
    w = cfg.adaptive_window
    if n < w:
        raise SeriesTooShort(f"series of length {n} shorter than window {w}")

    means = np.empty(n)
    sds = np.empty(n)
    head_mean = series[:w].mean()
    head_sd = series[:w].std(ddof=1)
    means[:w] = head_mean
    sds[:w] = head_sd
    if n > w:
        csum = np.concatenate([[0.0], np.cumsum(series)])
        csq = np.concatenate([[0.0], np.cumsum(series ** 2)])
        idx = np.arange(w, n)
        win_sum = csum[idx] - csum[idx - w]
        win_sq = csq[idx] - csq[idx - w]
        means[w:] = win_sum / w
        var = (win_sq - win_sum ** 2 / w) / (w - 1)
        sds[w:] = np.sqrt(np.maximum(var, 0.0))

    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sds > 0, (series - means) / sds, 0.0)

    flags = np.zeros(n, dtype=bool)
    s = 0.0
    for i in range(n):
        s = max(0.0, s + z[i] - cfg.drift)
        if s > cfg.threshold:
            flags[i] = True
            s = 0.0
    return flags


def threshold_then_lasso(data: Dataset, cfg: ThresholdConfig, fit_cfg: FitConfig,
                         target_support: int = 0) -> FitResult:
    """CUSUM-flag extremes in y, keep only flagged rows, re-standardize,
    and fit the ordinary (gamma = 2) l1 solver.

    When fewer than max(10, 2 * target_support) rows are flagged there is
    not enough data to fit; an empty-support result with
    ``converged = False`` is returned instead (the observed failure mode
    of threshold pipelines on weak extremes).
    """
    if fit_cfg.gamma != 2:
        raise ConfigError("threshold_then_lasso applies the ordinary gamma = 2 lasso")
    flags = cusum_threshold(data.y, cfg)
    keep = np.flatnonzero(flags)
    if keep.size < max(10, 2 * target_support):
        return FitResult(
            coefficients=Coefficients(beta=np.zeros(data.p)),
            iterations=0,
            objective_trace=np.asarray([]),
            converged=False,
            final_step=0.0,
            lam=fit_cfg.penalty.lam,
        )
    subset = standardize(Dataset.from_arrays(data.x[keep], data.y[keep]))
    return fit(subset, fit_cfg)
