"""Sparsity penalties: value, derivatives, and proximal operators.

L1 is the default; SCAD and MCP are the usual folded-concave relaxations
with closed-form proximal maps. All maps act elementwise on vectors, so a
structured penalty could slot in behind the same signature later.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ZeroCoefficient

__all__ = ["PenaltySpec", "prox", "penalty_value", "penalty_derivatives", "soft_threshold"]

FAMILIES = ("l1", "scad", "mcp", "none")


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family with its parameters.

    scad_a (> 2) and mcp_gamma (> 1) default to the conventional 3.7 and
    3.0; they matter only for their respective families.
    """

    family: str = "l1"
    lam: float = 0.0
    scad_a: float = 3.7
    mcp_gamma: float = 3.0

    def __post_init__(self):
        fam = self.family.lower()
        if fam not in FAMILIES:
            raise ConfigError(f"unknown penalty family {self.family!r}")
        object.__setattr__(self, "family", fam)
        if self.lam < 0:
            raise ConfigError("lambda must be >= 0")
        if fam == "scad" and self.scad_a <= 2:
            raise ConfigError("scad_a must be > 2")
        if fam == "mcp" and self.mcp_gamma <= 1:
            raise ConfigError("mcp_gamma must be > 1")

    def with_lambda(self, lam: float) -> "PenaltySpec":
        return PenaltySpec(self.family, lam, self.scad_a, self.mcp_gamma)


def soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def penalty_value(spec: PenaltySpec, beta: np.ndarray) -> float:
    """Total penalty sum_j P(beta_j) used in the solver's objective."""
    b = np.abs(np.asarray(beta, dtype=float))
    lam = spec.lam
    if spec.family == "none" or lam == 0.0:
        return 0.0
    if spec.family == "l1":
        return float(lam * b.sum())
    if spec.family == "scad":
        a = spec.scad_a
        v = np.where(
            b <= lam,
            lam * b,
            np.where(
                b <= a * lam,
                (2 * a * lam * b - b * b - lam * lam) / (2 * (a - 1)),
                (a + 1) * lam * lam / 2,
            ),
        )
        return float(v.sum())
    g = spec.mcp_gamma
    v = np.where(b <= g * lam, lam * b - b * b / (2 * g), g * lam * lam / 2)
    return float(v.sum())


def prox(spec: PenaltySpec, v: np.ndarray, step: float) -> np.ndarray:
    """Elementwise proximal map of step * P at v:
    argmin_z (1/(2*step)) (z - v)^2 + P(z).

    The SCAD and MCP closed forms require step < scad_a - 1 and
    step < mcp_gamma respectively (both hold for the solver's step <= 1).
    """
    if step <= 0:
        raise ConfigError("prox step must be positive")
    v = np.asarray(v, dtype=float)
    lam = spec.lam
    if spec.family == "none" or lam == 0.0:
        return v.copy()
    t = step * lam
    if spec.family == "l1":
        return soft_threshold(v, t)
    if spec.family == "scad":
        a = spec.scad_a
        if step >= a - 1:
            raise ConfigError("SCAD prox closed form needs step < scad_a - 1")
        absv = np.abs(v)
        middle = ((a - 1) * v - np.sign(v) * a * t) / (a - 1 - step)
        return np.where(
            absv <= (1 + step) * lam,
            soft_threshold(v, t),
            np.where(absv <= a * lam, middle, v),
        )
    g = spec.mcp_gamma
    if step >= g:
        raise ConfigError("MCP prox closed form needs step < mcp_gamma")
    absv = np.abs(v)
    middle = soft_threshold(v, t) * g / (g - step)
    return np.where(absv <= g * lam, middle, v)


def penalty_derivatives(spec: PenaltySpec, beta_j: float) -> tuple[float, float]:
    """First and second derivative of P at |beta_j|, beta_j != 0.

    At exact zeros the influence function is identically zero and these
    derivatives are never consulted, hence the hard error.
    """
    if beta_j == 0:
        raise ZeroCoefficient("penalty derivatives are undefined at beta_j = 0")
    b = abs(float(beta_j))
    lam = spec.lam
    if spec.family == "none" or lam == 0.0:
        return 0.0, 0.0
    if spec.family == "l1":
        return lam, 0.0
    if spec.family == "scad":
        a = spec.scad_a
        if b <= lam:
            return lam, 0.0
        if b <= a * lam:
            return (a * lam - b) / (a - 1), -1.0 / (a - 1)
        return 0.0, 0.0
    g = spec.mcp_gamma
    if b < g * lam:
        return lam - b / g, -1.0 / g
    return 0.0, 0.0
