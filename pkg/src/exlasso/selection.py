"""Hyperparameter selection: k-fold cross-validation for the penalty
level, stability selection for the loss power, and oracle-sparsity tuning
for simulation scoring.

Fold and subsample draws depend only on (n, folds/subsamples, seed), so
selection is reproducible and fold fits can run in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset, standardize, to_raw_scale
from .errors import ConfigError, EmptyPath, FoldTooSmall, SubsampleTooSmall
from .loss import GammaLoss
from .penalty import PenaltySpec
from .solver import FitConfig, FitResult, fit, fit_path, lambda_max

__all__ = [
    "CvConfig",
    "CvCurve",
    "StabilityConfig",
    "cross_validate",
    "stability_select_gamma",
    "oracle_sparsity_select",
]


@dataclass(frozen=True)
class CvConfig:
    lambda_grid: tuple
    folds: int = 5
    seed: int = 0
    scoring: str = "gamma_loss"

    def __post_init__(self):
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if len(self.lambda_grid) == 0:
            raise ConfigError("lambda grid is empty")
        if self.scoring not in ("gamma_loss", "squared_loss"):
            raise ConfigError(f"unknown scoring {self.scoring!r}")
        object.__setattr__(self, "lambda_grid", tuple(float(l) for l in self.lambda_grid))


@dataclass(frozen=True)
class CvCurve:
    lambdas: np.ndarray
    mean_score: np.ndarray
    sd_score: np.ndarray


def fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Deterministic partition of range(n) into ``folds`` near-equal folds."""
    order = np.random.default_rng(seed).permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(order, folds)]


def cross_validate(data: Dataset, base: FitConfig, cv: CvConfig) -> tuple[float, CvCurve]:
    """Select the penalty level by k-fold cross-validation.

    Each training split is re-standardized, a warm-started path is fitted
    over the grid, and predictions are scored on the held-out rows on the
    raw scale (gamma-power loss by default, so extreme values drive the
    choice). Ties go to the larger lambda (sparser model).
    """
    if cv.folds > data.n:
        raise FoldTooSmall(f"{cv.folds} folds for {data.n} rows")
    grid = list(cv.lambda_grid)
    folds = fold_indices(data.n, cv.folds, cv.seed)
    scores = np.empty((cv.folds, len(grid)))

    for k, test_idx in enumerate(folds):
        train_mask = np.ones(data.n, dtype=bool)
        train_mask[test_idx] = False
        if train_mask.sum() < 2:
            raise FoldTooSmall("training split has fewer than 2 rows")
        train = standardize(Dataset.from_arrays(data.x[train_mask], data.y[train_mask]))
        path = fit_path(train, replace(base, initial_beta=None), grid)
        x_test, y_test = data.x[test_idx], data.y[test_idx]
        for i, result in enumerate(path):
            raw = to_raw_scale(result.coefficients, train)
            res = y_test - (x_test @ raw.beta + raw.intercept)
            scores[k, i] = _score(res, base.gamma, cv.scoring)

    mean = scores.mean(axis=0)
    sd = scores.std(axis=0, ddof=1) if cv.folds > 1 else np.zeros_like(mean)
    best = int(np.argmin(mean))  # grid is descending, so the first
    # minimizer is already the largest lambda among exact ties
    curve = CvCurve(np.asarray(grid), mean, sd)
    return grid[best], curve


def _score(residuals: np.ndarray, gamma: int, scoring: str) -> float:
    if scoring == "squared_loss":
        return float(np.mean(residuals ** 2))
    return GammaLoss(gamma).value(residuals)


@dataclass(frozen=True)
class StabilityConfig:
    gammas: tuple = (2, 4, 6)
    subsamples: int = 100
    subsample_fraction: float = 0.5
    lambda_rule: float = 0.1
    seed: int = 0
    fit: FitConfig = field(default_factory=lambda: FitConfig(penalty=PenaltySpec("l1")))

    def __post_init__(self):
        if not self.gammas:
            raise ConfigError("gammas must be nonempty")
        for g in self.gammas:
            if g < 2 or g % 2 != 0:
                raise ConfigError(f"gammas must be even integers >= 2, got {g}")
        if not 0.0 < self.subsample_fraction < 1.0:
            raise ConfigError("subsample_fraction must lie in (0, 1)")
        if self.subsamples < 1:
            raise ConfigError("subsamples must be >= 1")
        object.__setattr__(self, "gammas", tuple(int(g) for g in self.gammas))


def stability_select_gamma(data: Dataset, cfg: StabilityConfig) -> tuple[int, dict]:
    """Pick the loss power whose selected support is most stable across
    row subsamples.

    For each gamma, ``cfg.subsamples`` subsamples of size
    floor(fraction * n) are fitted at lambda = lambda_rule * lambda_max;
    the instability score is the mean over features of pi_j (1 - pi_j)
    where pi_j is feature j's selection frequency. Lower is more stable;
    ties go to the smaller gamma. The same row draws are reused across
    gammas so the comparison is paired.
    """
    m = int(cfg.subsample_fraction * data.n)
    if m < 2:
        raise SubsampleTooSmall(f"subsample of {m} rows cannot be standardized")
    draws = [
        np.random.default_rng((cfg.seed, s)).choice(data.n, size=m, replace=False)
        for s in range(cfg.subsamples)
    ]
    scores: dict[int, float] = {}
    for gamma in cfg.gammas:
        lam = cfg.lambda_rule * lambda_max(data, gamma)
        counts = np.zeros(data.p)
        for rows in draws:
            sub = standardize(Dataset.from_arrays(data.x[rows], data.y[rows]))
            cfg_fit = replace(
                cfg.fit, gamma=gamma, penalty=cfg.fit.penalty.with_lambda(lam),
                initial_beta=None,
            )
            result = fit(sub, cfg_fit)
            counts[result.coefficients.support] += 1
        freq = counts / cfg.subsamples
        scores[gamma] = float(np.mean(freq * (1.0 - freq)))

    best = min(sorted(scores), key=lambda g: scores[g])
    return best, scores


def oracle_sparsity_select(path: list[FitResult], target_support_size: int) -> FitResult:
    """Return the path entry whose support size is closest to the target;
    ties break toward the smaller support, then the larger lambda, so the
    choice does not depend on path order."""
    if not path:
        raise EmptyPath("cannot select from an empty path")
    return min(
        path,
        key=lambda r: (
            abs(r.coefficients.support_size - target_support_size),
            r.coefficients.support_size,
            -r.lam,
        ),
    )
