import math

import numpy as np
import pytest

from datxy import DomainError, ModelParams, QuadratureSpec, Regime, classify_regime


def test_params_validation():
    with pytest.raises(DomainError):
        ModelParams(gamma=0.0)
    with pytest.raises(DomainError):
        ModelParams(gamma=1.2)
    with pytest.raises(DomainError):
        ModelParams(gamma=0.8, d=-0.1)
    with pytest.raises(DomainError):
        ModelParams(gamma=0.8, lambda1=math.inf)
    with pytest.raises(DomainError):
        ModelParams(gamma=0.8, J=0.0)
    with pytest.raises(DomainError):
        ModelParams(gamma=0.8, betaJ=-1.0)
    p = ModelParams(gamma=0.8, betaJ=math.inf)
    assert p.zero_temperature
    assert not p.replace(betaJ=2.0).zero_temperature


def test_lambda_combinations():
    p = ModelParams(gamma=0.8, lambda1=0.7, lambda2=0.2)
    assert p.lambda_plus == pytest.approx(0.9)
    assert p.lambda_minus == pytest.approx(0.5)


def test_regime_examples():
    assert classify_regime(ModelParams(gamma=0.8, d=0.5), 1e-12) is Regime.WEAK_DM
    assert classify_regime(ModelParams(gamma=0.8, d=0.8), 1e-12) is Regime.BOUNDARY
    assert classify_regime(ModelParams(gamma=0.1, d=0.2), 1e-12) is Regime.STRONG_DM


def test_regime_total_and_monotone_in_d(rng):
    order = [Regime.WEAK_DM, Regime.BOUNDARY, Regime.STRONG_DM]
    for _ in range(50):
        gamma = rng.uniform(0.05, 1.0)
        ds = np.sort(rng.uniform(0.0, 2.0, size=8))
        ranks = [order.index(classify_regime(ModelParams(gamma=gamma, d=float(d)), 1e-9))
                 for d in ds]
        assert all(a <= b for a, b in zip(ranks, ranks[1:]))


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_depth=0)
    assert QuadratureSpec().abs_tol == 1e-10
