"""Model parameters, coupling-regime classification, and quadrature settings.

Dimensionless couplings of the spin chain

    H = (1/2) sum_j [ J{ (1+gamma)/2 sx_j sx_{j+1} + (1-gamma)/2 sy_j sy_{j+1} }
                      + (D/2)(sx_j sy_{j+1} - sy_j sx_{j+1})
                      + (h1 + (-1)^j h2) sz_j ]

are gamma (x-y anisotropy), d = D/J, lambda1 = h1/J, lambda2 = h2/J.
Temperature enters only through betaJ = J/(kB T); betaJ = math.inf is the
distinguished zero-temperature value and selects ground-state branches
instead of evaluating sinh/cosh of huge arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import DomainError


class Regime(Enum):
    """Relation between the DM strength d and the anisotropy gamma."""

    WEAK_DM = "weak_dm"      # d < gamma
    BOUNDARY = "boundary"    # d = gamma within tolerance
    STRONG_DM = "strong_dm"  # d > gamma


@dataclass(frozen=True)
class ModelParams:
    """Immutable coupling set; J > 0 is the energy unit."""

    gamma: float
    d: float = 0.0
    lambda1: float = 0.0
    lambda2: float = 0.0
    J: float = 1.0
    betaJ: float = math.inf

    def __post_init__(self):
        if not (0.0 < self.gamma <= 1.0):
            raise DomainError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not (self.d >= 0.0 and math.isfinite(self.d)):
            raise DomainError(f"d must be finite and >= 0, got {self.d}")
        for name in ("lambda1", "lambda2"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not (self.J > 0.0 and math.isfinite(self.J)):
            raise DomainError(f"J must be finite and > 0, got {self.J}")
        if math.isnan(self.betaJ) or self.betaJ < 0.0:
            raise DomainError(f"betaJ must be >= 0 (inf allowed), got {self.betaJ}")

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.betaJ)

    @property
    def lambda_plus(self) -> float:
        return self.lambda1 + self.lambda2

    @property
    def lambda_minus(self) -> float:
        return self.lambda1 - self.lambda2

    def replace(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and depth budget for the adaptive integrator.

    abs_tol is the requested absolute accuracy of the integral estimate;
    rel_tol (optional, 0 disables) relaxes it to rel_tol*|I| when that is
    larger.  max_depth bounds interval bisection depth.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 0.0
    max_depth: int = 48

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")
        if self.rel_tol < 0.0:
            raise DomainError(f"rel_tol must be >= 0, got {self.rel_tol}")
        if self.max_depth < 1:
            raise DomainError(f"max_depth must be >= 1, got {self.max_depth}")


def classify_regime(p: ModelParams, eps: float = 1e-12) -> Regime:
    """Compare d against gamma with an explicit equality tolerance eps.

    On the boundary (|d - gamma| <= eps) the weak-DM formulas apply; both
    branches of the zero-temperature closed forms coincide there.
    """
    if not eps > 0.0:
        raise DomainError(f"eps must be > 0, got {eps}")
    if p.d < p.gamma - eps:
        return Regime.WEAK_DM
    if p.d > p.gamma + eps:
        return Regime.STRONG_DM
    return Regime.BOUNDARY
