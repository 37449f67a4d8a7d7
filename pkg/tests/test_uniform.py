import math

import numpy as np
import pytest

from datxy import (DomainError, ModelParams, QuadratureSpec, root_pair,
                   spectrum_uniform, thermal_correlators_uniform,
                   zero_T_correlators_uniform)
from datxy.uniform import dispersion_lambda

SPEC = QuadratureSpec(abs_tol=1e-10)
FIELDS = ("cxx", "cyy", "cxy", "cyx", "czz", "mz_e", "mz_o")


def _maxdev(a, b):
    return max(abs(getattr(a, f) - getattr(b, f)) for f in FIELDS)


# ------------------------------------------------------------- spectrum ----

def test_spectrum_examples():
    dp = spectrum_uniform(ModelParams(gamma=0.8, d=0.0), math.pi / 2)
    assert dp.Lambda == pytest.approx(0.8, abs=1e-14)
    assert dp.omega == pytest.approx(0.8, abs=1e-14)

    dp = spectrum_uniform(ModelParams(gamma=0.8, d=1.0), -math.pi / 2)
    assert dp.omega == pytest.approx(-0.2, abs=1e-14)

    dp = spectrum_uniform(ModelParams(gamma=0.8, d=0.5, lambda1=1.0), math.pi)
    assert dp.Lambda == pytest.approx(0.0, abs=1e-12)
    assert dp.omega == pytest.approx(0.0, abs=1e-12)


def test_spectrum_requires_uniform_field():
    with pytest.raises(DomainError):
        spectrum_uniform(ModelParams(gamma=0.8, lambda2=0.1), 0.3)


def test_spectral_symmetry(rng):
    for _ in range(30):
        p = ModelParams(gamma=rng.uniform(0.1, 1.0), d=rng.uniform(0, 1.5),
                        lambda1=rng.uniform(-2, 2))
        phi = rng.uniform(-math.pi, math.pi)
        plus = spectrum_uniform(p, phi)
        minus = spectrum_uniform(p, -phi)
        assert plus.Lambda == pytest.approx(minus.Lambda, abs=1e-13)
        assert plus.omega - minus.omega == pytest.approx(
            2 * p.d * math.sin(phi), abs=1e-13)


# ------------------------------------------------------------ root pair ----

def _bisect_root(p, lo, hi):
    g = lambda phi: p.d * math.sin(phi) - float(dispersion_lambda(phi, p.lambda1, p.gamma))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(lo) * g(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_root_pair_against_bisection_oracle():
    p = ModelParams(gamma=0.8, d=1.0, lambda1=0.0)
    rp = root_pair(p)
    assert rp.real_solutions
    # oracle: sign changes of d sin(phi) - Lambda(phi) on [0, pi]
    phi1 = _bisect_root(p, 0.0, 0.5 * (rp.phi1 + rp.phi2))
    phi2 = _bisect_root(p, math.pi, 0.5 * (rp.phi1 + rp.phi2))
    assert rp.phi1 == pytest.approx(phi1, abs=1e-10)
    assert rp.phi2 == pytest.approx(phi2, abs=1e-10)
    assert rp.phi1 == pytest.approx(1.030, abs=2e-3)
    assert rp.phi2 == pytest.approx(2.112, abs=2e-3)


def test_root_pair_branches():
    assert not root_pair(ModelParams(gamma=0.8, d=0.5)).real_solutions
    # lambda1^2 = 4 exceeds 1 + d^2 - gamma^2 = 1.36
    assert not root_pair(ModelParams(gamma=0.8, d=1.0, lambda1=2.0)).real_solutions
    # boundary of the chiral region: double root
    p = ModelParams(gamma=0.8, d=1.0, lambda1=math.sqrt(1.36))
    rp = root_pair(p)
    assert rp.real_solutions
    assert rp.phi1 == pytest.approx(rp.phi2, abs=1e-6)


def test_root_pair_random_roots_satisfy_dispersion(rng):
    count = 0
    while count < 20:
        p = ModelParams(gamma=rng.uniform(0.1, 0.9), d=rng.uniform(0.2, 1.8),
                        lambda1=rng.uniform(-1.5, 1.5))
        rp = root_pair(p)
        if not rp.real_solutions:
            continue
        count += 1
        for phi in (rp.phi1, rp.phi2):
            lam = float(dispersion_lambda(phi, p.lambda1, p.gamma))
            assert p.d * math.sin(phi) == pytest.approx(lam, abs=1e-9)


# -------------------------------------------------- zero-T correlators ----

def test_factorization_point_is_product_state():
    from datxy import assemble_rdm, log_negativity
    p = ModelParams(gamma=0.8, d=0.5, lambda1=0.6)
    cs = zero_T_correlators_uniform(p, SPEC)
    assert log_negativity(assemble_rdm(cs)) == 0.0


def test_insensitivity_to_weak_dm():
    base = zero_T_correlators_uniform(ModelParams(gamma=0.8, d=0.0, lambda1=0.7), SPEC)
    for d in (0.3, 0.5, 0.79):
        cs = zero_T_correlators_uniform(ModelParams(gamma=0.8, d=d, lambda1=0.7), SPEC)
        assert _maxdev(cs, base) < 1e-9


def test_insensitivity_extends_beyond_gamma_without_real_roots():
    # lambda1^2 > 1 + d^2 - gamma^2 keeps the weak-DM solution valid
    base = zero_T_correlators_uniform(ModelParams(gamma=0.8, d=0.0, lambda1=2.0), SPEC)
    strong = zero_T_correlators_uniform(ModelParams(gamma=0.8, d=1.0, lambda1=2.0), SPEC)
    assert _maxdev(strong, base) < 1e-9


def test_chiral_branch_cross_correlators():
    p = ModelParams(gamma=0.8, d=1.0, lambda1=0.0)
    cs = zero_T_correlators_uniform(p, SPEC)
    c = math.sqrt(0.36 / 1.36)
    assert cs.cxy == pytest.approx(-2 * c / math.pi, abs=1e-12)
    assert cs.cyx == pytest.approx(+2 * c / math.pi, abs=1e-12)

    # oracle: finite momentum sums with the tilted band filled where negative
    N = 200_000
    phis = 2 * math.pi * np.arange(1, N // 2 + 1) / N
    lam = dispersion_lambda(phis, p.lambda1, p.gamma)
    occupied = p.d * np.sin(phis) > lam
    cxy_sum = float(np.sum(-2 * np.sin(phis) * occupied)) / N
    assert cs.cxy == pytest.approx(cxy_sum, abs=5e-5)


def test_sign_structure_zero_T(rng):
    for _ in range(10):
        p = ModelParams(gamma=rng.uniform(0.2, 1.0), d=rng.uniform(0, 1.6),
                        lambda1=rng.uniform(-1.5, 1.5))
        cs = zero_T_correlators_uniform(p, SPEC)
        assert cs.cxy == pytest.approx(-cs.cyx, abs=1e-12)


def test_saturation_large_field():
    cs = zero_T_correlators_uniform(ModelParams(gamma=0.8, d=0.3, lambda1=40.0), SPEC)
    assert cs.mz_e == pytest.approx(-1.0, abs=1e-3)


def test_wick_residual_zero_by_construction(rng):
    for _ in range(10):
        p = ModelParams(gamma=rng.uniform(0.2, 1.0), d=rng.uniform(0, 1.5),
                        lambda1=rng.uniform(-2, 2))
        cs = zero_T_correlators_uniform(p, SPEC)
        assert cs.wick_residual() == 0.0


# ------------------------------------------------- thermal correlators ----

def test_infinite_temperature_is_featureless():
    cs = thermal_correlators_uniform(
        ModelParams(gamma=0.8, d=0.5, lambda1=0.6, betaJ=0.0), SPEC)
    for f in FIELDS:
        assert abs(getattr(cs, f)) < 1e-12


def test_low_temperature_reduces_to_ground_state():
    # the tilted band minimum ~0.218 leaves a ~2e-6 physical tail at betaJ=50
    p50 = ModelParams(gamma=0.8, d=0.5, lambda1=0.6, betaJ=50.0)
    p100 = p50.replace(betaJ=100.0)
    cold = zero_T_correlators_uniform(p50.replace(betaJ=math.inf), SPEC)
    assert _maxdev(thermal_correlators_uniform(p50, SPEC), cold) < 3e-5
    assert _maxdev(thermal_correlators_uniform(p100, SPEC), cold) < 1e-6


def test_low_temperature_reduces_to_chiral_branch():
    # the strong-DM phase is gapless, so the beta -> inf approach to the
    # split-domain closed forms is algebraic: dev ~ const / beta^2
    p = ModelParams(gamma=0.8, d=1.2, lambda1=0.4)
    cold = zero_T_correlators_uniform(p, SPEC)
    devs = {b: _maxdev(thermal_correlators_uniform(p.replace(betaJ=b), SPEC), cold)
            for b in (200.0, 400.0, 800.0, 1600.0)}
    scaled = [devs[b] * b * b for b in (200.0, 400.0, 800.0)]
    assert max(scaled) / min(scaled) < 1.05
    assert devs[1600.0] < 1e-6


def test_thermal_cross_correlator_antisymmetry():
    cs = thermal_correlators_uniform(
        ModelParams(gamma=0.8, d=0.6, lambda1=0.5, betaJ=2.0), SPEC)
    assert cs.cxy == pytest.approx(-cs.cyx, abs=1e-14)
    assert cs.cxy != 0.0


def test_thermal_wick_identity_uses_single_mz():
    cs = thermal_correlators_uniform(
        ModelParams(gamma=0.8, d=0.4, lambda1=0.6, betaJ=2.0), SPEC)
    assert cs.mz_e == cs.mz_o
    assert cs.wick_residual() == 0.0
