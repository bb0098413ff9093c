"""Tests for the extended-precision oracle"""

import math

import numpy as np
import pytest

from besselk_ad.numerics.besselk import besselk, besselk_d1d2
from besselk_ad.numerics.errors import BesselDomainError
from besselk_ad.numerics.matern import MaternParams, matern_cov

DERIVATIVE_POINTS = [
    (0.3, 0.5),
    (1.85, 8.0),
    (3.001, 2.0),
    (1.85, 14.0),
    (4.7, 25.0),
    (1.2, 35.0),
    (1.062, 7.504),
    (0.3, 8.5),
]

GRID_NU = np.linspace(0.25, 10.0, 12)
GRID_X = np.geomspace(0.005, 30.0, 12)


def test_half_order_closed_form(oracle):
    """K_1/2(1) = sqrt(pi/2) / e to far beyond double precision"""
    import mpmath as mp

    with mp.workdps(50):
        expected = mp.sqrt(mp.pi / 2) * mp.exp(-1)
        got = oracle.oracle_besselk(0.5, 1.0, digits=40)
        assert abs(got - expected) < mp.mpf(10) ** -38


def test_agrees_with_mpmath_besselk(oracle):
    """The integral matches mpmath's own K_nu"""
    import mpmath as mp

    with mp.workdps(40):
        for nu, x in [(1.85, 14.0), (0.2, 0.05), (7.5, 3.0)]:
            ref = mp.besselk(nu, x)
            got = oracle.oracle_besselk(nu, x, digits=30)
            assert abs(got / ref - 1) < mp.mpf(10) ** -25


def test_double_precision_value_against_oracle(oracle):
    """K_1.85(14) agrees with the oracle to 1e-12"""
    ref = float(oracle.oracle_besselk(1.85, 14.0, digits=30))
    assert besselk(1.85, 14.0) == pytest.approx(ref, rel=1e-12)


def test_half_order_derivative(oracle):
    """d/dnu K at nu = 1/2 matches sqrt(pi/(2x)) e^x E1(2x)"""
    import mpmath as mp

    with mp.workdps(40):
        x = mp.mpf(20)
        expected = mp.sqrt(mp.pi / (2 * x)) * mp.exp(x) * mp.e1(2 * x)
        got = oracle.oracle_dnu_besselk(0.5, 20.0, k=1, digits=30)
        assert abs(got / expected - 1) < mp.mpf(10) ** -25
    _, d1, _ = besselk_d1d2(0.5, 20.0)
    assert d1 == pytest.approx(float(expected), rel=1e-9)


@pytest.mark.slow
def test_derivative_methods_agree(oracle):
    """Differentiated integrand and extended-precision differences agree"""
    for k in (1, 2):
        value = oracle.oracle_dnu_besselk(1.3, 2.0, k=k, digits=40, method="both")
        assert math.isfinite(float(value))


@pytest.mark.slow
@pytest.mark.parametrize("nu,x", DERIVATIVE_POINTS)
def test_dual_derivatives_against_oracle(oracle, nu, x):
    """Dual slots match the oracle: d1 to 1e-8, d2 to 1e-6"""
    _, d1, d2 = besselk_d1d2(nu, x)
    ref1 = float(oracle.oracle_dnu_besselk(nu, x, k=1, digits=25))
    ref2 = float(oracle.oracle_dnu_besselk(nu, x, k=2, digits=25))
    assert d1 == pytest.approx(ref1, rel=1e-8)
    assert d2 == pytest.approx(ref2, rel=1e-6)


def test_unknown_method(oracle):
    """An unknown derivative method is a ValueError"""
    with pytest.raises(ValueError):
        oracle.oracle_dnu_besselk(1.0, 1.0, method="guess")


def test_domain_checks(oracle):
    """Arguments outside the supported range are refused"""
    with pytest.raises(BesselDomainError):
        oracle.oracle_besselk(1.0, 0.0)
    with pytest.raises(BesselDomainError):
        oracle.oracle_besselk(60.0, 1.0)
    with pytest.raises(BesselDomainError):
        oracle.oracle_besselk(1.0, 1.0, digits=500)
    with pytest.raises(BesselDomainError):
        oracle.oracle_dnu_besselk(1.0, 1.0, k=3)
    with pytest.raises(BesselDomainError):
        oracle.oracle_temme_gamma_pair(0.8)


def test_matern_covariance(oracle):
    """The oracle kernel matches the double-precision kernel and is sigma^2 at d = 0"""
    theta = MaternParams(1.5, 2.5, 1.3)
    assert float(oracle.oracle_matern_cov(theta, 0.0)) == pytest.approx(2.25, rel=1e-15)
    for d in (0.05, 0.7, 3.0):
        ref = float(oracle.oracle_matern_cov(theta, d))
        assert matern_cov(theta, d) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(BesselDomainError):
        oracle.oracle_matern_cov(theta, -1.0)


def test_oracle_available(oracle):
    """With mpmath importable the oracle reports itself available"""
    assert oracle.oracle_available()


@pytest.mark.parametrize("nu,x", [(1.2, 35.0), (0.3, 45.0), (4.7, 40.0), (0.5001, 35.0)])
def test_large_argument_relative_accuracy(oracle, nu, x):
    """Tiny K at large x keeps full relative accuracy"""
    import mpmath as mp

    with mp.workdps(40):
        ref = mp.besselk(nu, x)
        got = oracle.oracle_besselk(nu, x, digits=30)
        assert abs(got / ref - 1) < mp.mpf(10) ** -25


def test_large_argument_derivative(oracle):
    """d/dnu at nu = 1/2 and x = 45 is resolved relative to its own size"""
    import mpmath as mp

    with mp.workdps(40):
        x = mp.mpf(45)
        expected = mp.sqrt(mp.pi / (2 * x)) * mp.exp(x) * mp.e1(2 * x)
        got = oracle.oracle_dnu_besselk(0.5, 45.0, k=1, digits=30)
        assert abs(got / expected - 1) < mp.mpf(10) ** -25


def test_order_zero_temme_pair_is_computed(oracle):
    """At nu = 0 the pair is (-gamma_E, 1), reached through mpmath's rgamma"""
    import mpmath as mp

    gam1, gam2 = oracle.oracle_temme_gamma_pair(0.0, digits=30)
    with mp.workdps(30):
        assert abs(gam1 + mp.euler) < mp.mpf(10) ** -25
        assert abs(gam2 - 1) < mp.mpf(10) ** -25


@pytest.mark.slow
def test_accuracy_over_parameter_grid(oracle):
    """At least 99% of grid nodes meet d1 <= 1e-8 and d2 <= 1e-6 against the oracle"""
    passed = 0
    worst = (0.0, None)
    for nu in GRID_NU:
        for x in GRID_X:
            nu, x = float(nu), float(x)
            _, d1, d2 = besselk_d1d2(nu, x)
            ref1 = float(oracle.oracle_dnu_besselk(nu, x, k=1, digits=25))
            ref2 = float(oracle.oracle_dnu_besselk(nu, x, k=2, digits=25))
            err1 = abs(d1 - ref1) / abs(ref1)
            err2 = abs(d2 - ref2) / abs(ref2)
            if err1 <= 1e-8 and err2 <= 1e-6:
                passed += 1
            if max(err1, err2) > worst[0]:
                worst = (max(err1, err2), (nu, x))
    assert passed / (len(GRID_NU) * len(GRID_X)) >= 0.99, f"worst node {worst}"
    assert worst[0] < 1e-5
