"""Two-site density matrices, logarithmic negativity, and entanglement scans.

The nearest-neighbor even-odd state of the chain has the Pauli expansion

    rho = (1/4) [ I + mz_e sz(x)I + mz_o I(x)sz + sum_a C^aa sa(x)sa
                  + C^xy sx(x)sy + C^yx sy(x)sx ]

with the even site as the first tensor factor.  Entanglement is the
logarithmic negativity L = log2(2 N + 1), N the negativity of the
partial transpose; for a 4x4 Hermitian partial transpose the trace norm
comes from its eigenvalues directly.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .blocks import thermal_correlators_alt
from .correlators import CorrelatorSet
from .errors import DomainError, NotAState
from .params import ModelParams, QuadratureSpec
from .scans import ScanGrid
from .uniform import thermal_correlators_uniform, zero_T_correlators_uniform

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_ID = np.eye(2, dtype=complex)
_PAULI = {"i": _ID, "x": _SX, "y": _SY, "z": _SZ}


def assemble_rdm(cs: CorrelatorSet, psd_tol: float = 1e-6) -> np.ndarray:
    """4x4 even-odd density matrix from a correlator set.

    Raises NotAState when an eigenvalue is more negative than -psd_tol,
    which signals a broken correlator set upstream rather than roundoff.
    """
    rho = (np.eye(4, dtype=complex)
           + cs.mz_e * np.kron(_SZ, _ID) + cs.mz_o * np.kron(_ID, _SZ)
           + cs.cxx * np.kron(_SX, _SX) + cs.cyy * np.kron(_SY, _SY)
           + cs.czz * np.kron(_SZ, _SZ)
           + cs.cxy * np.kron(_SX, _SY) + cs.cyx * np.kron(_SY, _SX)) / 4.0
    low = float(np.linalg.eigvalsh(rho).min())
    if low < -psd_tol:
        raise NotAState(f"reconstructed state has eigenvalue {low:.3e}")
    return rho


def pauli_coefficients(rho: np.ndarray) -> dict:
    """Coefficients c_PQ = Tr[rho (P x Q)] of the two-site Pauli basis."""
    out = {}
    for a, A in _PAULI.items():
        for b, B in _PAULI.items():
            out[a + b] = complex(np.trace(rho @ np.kron(A, B)))
    return out


def partial_transpose(rho: np.ndarray, site: int = 0) -> np.ndarray:
    """Transpose one qubit of a 4x4 two-qubit matrix."""
    if rho.shape != (4, 4):
        raise DomainError("partial transpose expects a 4x4 matrix")
    r = rho.reshape(2, 2, 2, 2)
    if site == 0:
        r = r.transpose(2, 1, 0, 3)
    elif site == 1:
        r = r.transpose(0, 3, 2, 1)
    else:
        raise DomainError("site must be 0 or 1")
    return r.reshape(4, 4)


def negativity(rho: np.ndarray, site: int = 0) -> float:
    """Absolute sum of negative partial-transpose eigenvalues."""
    ev = np.linalg.eigvalsh(partial_transpose(rho, site))
    if np.all(ev >= -1e-12):
        return 0.0
    return float(-ev[ev < 0.0].sum())


def log_negativity(rho: np.ndarray, site: int = 0) -> float:
    return math.log2(2.0 * negativity(rho, site) + 1.0)


def equilibrium_correlators(p: ModelParams, spec: QuadratureSpec = QuadratureSpec()) -> CorrelatorSet:
    """Route to the cheapest exact formula for the given parameters."""
    if p.lambda2 == 0.0:
        if p.zero_temperature:
            return zero_T_correlators_uniform(p, spec)
        return thermal_correlators_uniform(p, spec)
    return thermal_correlators_alt(p, spec)


def equilibrium_ln(p: ModelParams, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Nearest-neighbor logarithmic negativity of the equilibrium state."""
    return log_negativity(assemble_rdm(equilibrium_correlators(p, spec)))


def ent_derivative(p: ModelParams, which: str = "lambda1", h: float = 1e-4,
                   spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Central difference dL/d(field) of the zero-temperature entanglement.

    Both sides of the difference go through the same analytic route
    (uniform closed forms only when the shifted points stay at
    lambda2 = 0), so route-mismatch noise never enters the quotient.
    """
    if which not in ("lambda1", "lambda2"):
        raise DomainError(f"which must be 'lambda1' or 'lambda2', got {which!r}")
    if not h > 0.0:
        raise DomainError(f"step h must be > 0, got {h}")
    p = p.replace(betaJ=math.inf)
    up = p.replace(**{which: getattr(p, which) + h})
    dn = p.replace(**{which: getattr(p, which) - h})
    if up.lambda2 == 0.0 and dn.lambda2 == 0.0:
        ln_up = log_negativity(assemble_rdm(zero_T_correlators_uniform(up, spec)))
        ln_dn = log_negativity(assemble_rdm(zero_T_correlators_uniform(dn, spec)))
    else:
        ln_up = log_negativity(assemble_rdm(thermal_correlators_alt(up, spec)))
        ln_dn = log_negativity(assemble_rdm(thermal_correlators_alt(dn, spec)))
    return (ln_up - ln_dn) / (2.0 * h)


def derivative_ladder(p: ModelParams, which: str = "lambda1",
                      steps=(1e-2, 1e-3, 1e-4),
                      spec: QuadratureSpec = QuadratureSpec()) -> dict:
    """Finite-difference magnitudes per step; still growing at the smallest
    step is the operational signature of a diverging derivative."""
    return {h: abs(ent_derivative(p, which, h, spec)) for h in steps}


def factorization_scan(grid: ScanGrid, eps_L: float = 1e-6,
                       spec: QuadratureSpec = QuadratureSpec()) -> list:
    """Grid points whose zero-temperature entanglement is below eps_L.

    Returns (ix, iy, x, y, ln) tuples; the caller compares detected sets
    against factorization curves or tracks how their area grows with the
    DM strength.
    """
    if grid.y is None:
        raise DomainError("factorization scan needs a two-axis grid")
    out = []
    for ix, iy, p in grid.points():
        p = p.replace(betaJ=math.inf)
        ln = equilibrium_ln(p, spec)
        if ln < eps_L:
            out.append((ix, iy, grid.x.values()[ix], grid.y.values()[iy], ln))
    return out


class Monotonicity(Enum):
    MONOTONIC = "monotonic"
    NON_MONOTONIC = "non_monotonic"


def thermal_monotonicity(p: ModelParams, beta_grid, noise_floor: float = 1e-9,
                         spec: QuadratureSpec = QuadratureSpec()) -> Monotonicity:
    """Classify L(betaJ) on an ascending grid of at least 20 points.

    Non-monotonic means an interior local extremum with prominence above
    the noise floor on both sides.
    """
    beta_grid = np.asarray(beta_grid, dtype=float)
    if beta_grid.size < 20 or np.any(np.diff(beta_grid) <= 0):
        raise DomainError("beta_grid must be ascending with >= 20 points")
    ln = np.array([equilibrium_ln(p.replace(betaJ=float(b)), spec) for b in beta_grid])

    def has_peak(v):
        prefix = np.minimum.accumulate(v)
        suffix = np.minimum.accumulate(v[::-1])[::-1]
        for j in range(1, v.size - 1):
            if v[j] - prefix[j - 1] > noise_floor and v[j] - suffix[j + 1] > noise_floor:
                return True
        return False

    if has_peak(ln) or has_peak(-ln):
        return Monotonicity.NON_MONOTONIC
    return Monotonicity.MONOTONIC
