"""Closed-form physics of the uniform-field chain (lambda2 = 0).

With only the uniform field the Jordan-Wigner chain has a single fermion
species and a 2x2 Bogoliubov problem per momentum phi in [0, pi]:

    Lambda(phi) = sqrt((cos phi + lambda1)^2 + gamma^2 sin^2 phi)
    omega(phi)  = J (d sin phi + Lambda(phi)),   phi in [-pi, pi]

The DM tilt d*sin(phi) is proportional to the identity in the 2x2 block,
so for d < gamma the ground state (and every zero-temperature observable)
is independent of d.  For d > gamma the tilted band dips below zero on
(-phi2, -phi1); those modes fill, and the zero-temperature correlators
pick up the split-domain forms with the chiral offsets at the roots
phi1 <= phi2 of omega(-phi) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlators import CorrelatorSet, from_moments
from .errors import DomainError
from .params import ModelParams, QuadratureSpec, Regime, classify_regime
from .quadrature import integrate_vec


def dispersion_lambda(phi, lambda1: float, gamma: float):
    """Lambda(phi) of the 2x2 block; vectorized over phi."""
    c = np.cos(phi)
    s = np.sin(phi)
    return np.sqrt((c + lambda1) ** 2 + (gamma * s) ** 2)


@dataclass(frozen=True)
class DispersionPoint:
    phi: float
    omega: float
    Lambda: float


@dataclass(frozen=True)
class RootPair:
    phi1: float
    phi2: float
    real_solutions: bool


def spectrum_uniform(p: ModelParams, phi: float) -> DispersionPoint:
    """Single-particle excitation energy at momentum phi (lambda2 must be 0)."""
    if p.lambda2 != 0.0:
        raise DomainError("uniform spectrum requires lambda2 = 0")
    lam = float(dispersion_lambda(phi, p.lambda1, p.gamma))
    return DispersionPoint(phi=phi, omega=p.J * (p.d * math.sin(phi) + lam), Lambda=lam)


def root_pair(p: ModelParams, eps: float = 1e-12) -> RootPair:
    """Roots phi1 <= phi2 in [0, pi] of d*sin(phi) = Lambda(phi).

    Squaring gives a quadratic in c = cos(phi):
        (1 + d^2 - gamma^2) c^2 + 2 lambda1 c + (lambda1^2 - d^2 + gamma^2) = 0
    with discriminant/4 = (d^2 - gamma^2)(1 + d^2 - gamma^2 - lambda1^2).
    Real solutions exist only for d > gamma and lambda1^2 <= 1 + d^2 - gamma^2.
    """
    A = p.d ** 2 - p.gamma ** 2
    if classify_regime(p, eps) is not Regime.STRONG_DM:
        return RootPair(math.nan, math.nan, False)
    if p.lambda1 ** 2 > (1.0 + A) * (1.0 + 1e-14) + eps:
        return RootPair(math.nan, math.nan, False)

    coeff = 1.0 + A
    disc = A * (coeff - p.lambda1 ** 2)
    if disc < 0.0:
        if disc > -eps:
            disc = 0.0  # double root at the boundary of the chiral region
        else:
            return RootPair(math.nan, math.nan, False)
    sq = math.sqrt(disc)
    c_hi = min(1.0, max(-1.0, (-p.lambda1 + sq) / coeff))
    c_lo = min(1.0, max(-1.0, (-p.lambda1 - sq) / coeff))
    phi1 = math.acos(c_hi)
    phi2 = math.acos(c_lo)
    if sq < math.sqrt(eps):
        # nearly-degenerate discriminant: polish by bisection on the
        # sign change of d^2 sin^2 - Lambda^2 around the double root
        phi1, phi2 = _bisect_roots(p, phi1, phi2)
    return RootPair(phi1=phi1, phi2=phi2, real_solutions=True)


def _bisect_roots(p: ModelParams, phi1: float, phi2: float):
    def g(phi):
        lam = dispersion_lambda(phi, p.lambda1, p.gamma)
        return (p.d * np.sin(phi)) ** 2 - lam ** 2

    mid = 0.5 * (phi1 + phi2)
    if g(mid) <= 0.0:
        return mid, mid
    out = []
    for lo, hi, keep_low in ((0.0, mid, False), (mid, math.pi, True)):
        a_, b_ = lo, hi
        for _ in range(200):
            m = 0.5 * (a_ + b_)
            if (g(m) > 0.0) == keep_low:
                b_ = m
            else:
                a_ = m
        out.append(0.5 * (a_ + b_))
    return out[0], out[1]


def _domain_pieces(p: ModelParams):
    """Integration pieces and chiral offsets for the zero-temperature forms."""
    rp = root_pair(p)
    if rp.real_solutions:
        pieces = [(0.0, rp.phi1), (rp.phi2, math.pi)]
    else:
        pieces = [(0.0, math.pi)]
    return rp, pieces


def _lambda_minimum(p: ModelParams):
    """Interior minimum of Lambda(phi), a forced quadrature breakpoint."""
    if p.gamma >= 1.0:
        return None
    c_star = -p.lambda1 / (1.0 - p.gamma ** 2)
    if -1.0 < c_star < 1.0:
        return math.acos(c_star)
    return None


def zero_T_correlators_uniform(p: ModelParams, spec: QuadratureSpec = QuadratureSpec()) -> CorrelatorSet:
    """Zero-temperature correlators and magnetization, both DM branches."""
    if p.lambda2 != 0.0:
        raise DomainError("uniform correlators require lambda2 = 0")
    if not p.zero_temperature:
        raise DomainError("zero-temperature form needs betaJ = inf")

    g, l1 = p.gamma, p.lambda1

    def integrand(phi):
        c = np.cos(phi)
        s = np.sin(phi)
        lam = np.sqrt((c + l1) ** 2 + (g * s) ** 2)
        common = (lam - c - l1) * c
        return np.stack([
            (-g * s ** 2 + common) / lam,
            (+g * s ** 2 + common) / lam,
            -(l1 + c) / lam,
        ], axis=1) / math.pi

    rp, pieces = _domain_pieces(p)
    bp = _lambda_minimum(p)
    total = np.zeros(3)
    for a, b in pieces:
        pts = [bp] if bp is not None and a < bp < b else []
        total += integrate_vec(integrand, a, b, spec, breakpoints=pts, n_components=3)
    cxx, cyy, mz = total

    if rp.real_solutions:
        cxx += (math.sin(rp.phi2) - math.sin(rp.phi1)) / math.pi
        cyy += (math.sin(rp.phi2) - math.sin(rp.phi1)) / math.pi
        cxy = (math.cos(rp.phi2) - math.cos(rp.phi1)) / math.pi
        cyx = -cxy
    else:
        cxy = 0.0
        cyx = 0.0
    return from_moments(cxx, cyy, cxy, cyx, mz, mz)


def thermal_correlators_uniform(p: ModelParams, spec: QuadratureSpec = QuadratureSpec()) -> CorrelatorSet:
    """Finite-temperature correlators of the uniform-field chain.

    The cross correlators obey C^yx = -C^xy; the ED oracle and the
    beta -> inf limit of these integrals (which reproduces the d > gamma
    zero-temperature branch including the chiral offsets) both fix that
    sign.
    """
    if p.lambda2 != 0.0:
        raise DomainError("uniform correlators require lambda2 = 0")
    if p.zero_temperature:
        raise DomainError("use zero_T_correlators_uniform for betaJ = inf")

    g, l1, d, bJ = p.gamma, p.lambda1, p.d, p.betaJ

    def integrand(phi):
        c = np.cos(phi)
        s = np.sin(phi)
        lam = np.sqrt((c + l1) ** 2 + (g * s) ** 2)
        X = bJ * lam
        Y = bJ * d * s
        # scale by exp(-m) so cosh/sinh never overflow
        m = np.maximum(X, np.abs(Y))
        chX = 0.5 * (np.exp(X - m) + np.exp(-X - m))
        shX = 0.5 * (np.exp(X - m) - np.exp(-X - m))
        chY = 0.5 * (np.exp(Y - m) + np.exp(-Y - m))
        shY = 0.5 * (np.exp(Y - m) - np.exp(-Y - m))
        den = chX + chY
        gs2 = g * s ** 2
        core = gs2 + (c + l1) * c
        cxx = ((-core * shX / lam + c * chX) + c * chY) / den
        cyy = (((gs2 - (c + l1) * c) * shX / lam + c * chX) + c * chY) / den
        cxy = -s * shY / den
        mz = -(l1 + c) * shX / (lam * den)
        return np.stack([cxx, cyy, cxy, mz], axis=1) / math.pi

    bp = [x for x in (_lambda_minimum(p),) if x is not None]
    # beta*d*sin = beta*Lambda switchovers steepen the integrand for d > gamma
    rp = root_pair(p)
    if rp.real_solutions:
        bp += [rp.phi1, rp.phi2]
    cxx, cyy, cxy, mz = integrate_vec(
        integrand, 0.0, math.pi, spec, breakpoints=bp, n_components=4)
    return from_moments(cxx, cyy, cxy, -cxy, mz, mz)
