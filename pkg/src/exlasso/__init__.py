"""exlasso: sparse linear regression for extreme values.

Power-loss (|residual|^gamma, gamma even) regression with L1/SCAD/MCP
penalties, solved by proximal gradient descent with backtracking, plus
model selection, influence diagnostics, baseline methods, and a synthetic
benchmark harness.
"""

__version__ = "0.1.0"

from .baselines import (
    QuantileConfig,
    ThresholdConfig,
    cusum_threshold,
    fit_quantile,
    quantile_lambda_max,
    threshold_then_lasso,
)
from .data import Coefficients, Dataset, read_csv, standardize, to_raw_scale
from .influence import InfluenceReport, influence, influence_ratio
from .loss import GammaLoss, SmoothPinballLoss, loss_gradient, loss_value
from .penalty import PenaltySpec, penalty_derivatives, penalty_value, prox, soft_threshold
from .selection import (
    CvConfig,
    StabilityConfig,
    cross_validate,
    oracle_sparsity_select,
    stability_select_gamma,
)
from .simulate import (
    MetricReport,
    ScenarioSpec,
    ScenarioTruth,
    generate_linear,
    generate_mixture,
    run_scenario_sweep,
    score_support,
)
from .solver import FitConfig, FitResult, default_lambda_grid, fit, fit_path, lambda_max
from .subbotin import SubbotinDist, subbotin_sample, subbotin_variance, verify_power_tail

__all__ = [
    "__version__",
    "Coefficients", "Dataset", "read_csv", "standardize", "to_raw_scale",
    "GammaLoss", "SmoothPinballLoss", "loss_value", "loss_gradient",
    "PenaltySpec", "prox", "penalty_value", "penalty_derivatives", "soft_threshold",
    "FitConfig", "FitResult", "fit", "fit_path", "lambda_max", "default_lambda_grid",
    "CvConfig", "StabilityConfig", "cross_validate", "stability_select_gamma",
    "oracle_sparsity_select",
    "QuantileConfig", "ThresholdConfig", "fit_quantile", "quantile_lambda_max",
    "cusum_threshold", "threshold_then_lasso",
    "ScenarioSpec", "ScenarioTruth", "MetricReport",
    "generate_linear", "generate_mixture", "score_support", "run_scenario_sweep",
    "InfluenceReport", "influence", "influence_ratio",
    "SubbotinDist", "subbotin_sample", "subbotin_variance", "verify_power_tail",
]
