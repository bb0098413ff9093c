"""Tests for the gamma-family kernels"""

import math

import pytest
from scipy import special

from besselk_ad.numerics.dual import seed
from besselk_ad.numerics.errors import BesselDomainError, BesselError, NumericOverflowError
from besselk_ad.numerics.gamma import (
    EULER_GAMMA,
    GAMMA_PAIR_EXPANSION,
    gamma_fn,
    log_gamma_fn,
    reciprocal_gamma_coefficients,
    temme_gamma_pair,
    upper_incomplete_gamma,
    upper_incomplete_gamma_scaled,
)
from besselk_ad.oracle.finite_diff import adaptive_fd


def direct_pair(nu):
    minus, plus = special.rgamma(1.0 - nu), special.rgamma(1.0 + nu)
    return (minus - plus) / (2.0 * nu), (minus + plus) / 2.0


@pytest.mark.parametrize("z", [0.3, 1.0, 2.5, 7.25, -0.5, -2.3])
def test_gamma_fn_derivatives(z):
    """d/dz Gamma and d2/dz2 Gamma agree with a tenth-order stencil"""
    g = gamma_fn(seed(z))
    assert g.val == pytest.approx(math.gamma(z), rel=1e-15)
    h0 = 0.02
    assert g.d1 == pytest.approx(adaptive_fd(math.gamma, z, 1, h0=h0), rel=1e-9)
    assert g.d2 == pytest.approx(adaptive_fd(math.gamma, z, 2, h0=h0), rel=1e-7)


def test_gamma_fn_pole():
    """Non-positive integers are poles"""
    with pytest.raises(BesselDomainError):
        gamma_fn(-3.0)
    with pytest.raises(BesselDomainError):
        gamma_fn(seed(0.0))


def test_gamma_fn_overflow_is_a_bessel_error():
    """Gamma past the double range raises inside the package hierarchy"""
    with pytest.raises(NumericOverflowError) as info:
        gamma_fn(200.0)
    assert isinstance(info.value, BesselError)
    assert isinstance(info.value, OverflowError)


@pytest.mark.parametrize("z", [0.4, 1.3, 7.25, 200.0, 1500.0])
def test_log_gamma_fn(z):
    """log Gamma and its order-derivatives, finite where Gamma overflows"""
    lg = log_gamma_fn(seed(z))
    assert lg.val == pytest.approx(math.lgamma(z), rel=1e-14)
    assert lg.d1 == pytest.approx(special.digamma(z), rel=1e-14)
    assert lg.d2 == pytest.approx(special.polygamma(1, z), rel=1e-12)
    with pytest.raises(BesselDomainError):
        log_gamma_fn(0.0)


def test_reciprocal_gamma_series():
    """The generated series reproduces 1/Gamma(1+x)"""
    coeffs = reciprocal_gamma_coefficients()
    assert coeffs[0] == 1.0
    assert coeffs[1] == pytest.approx(EULER_GAMMA)
    for x in (-0.5, -0.2, 0.1, 0.5):
        series = sum(c * x**k for k, c in enumerate(coeffs))
        assert series == pytest.approx(special.rgamma(1.0 + x), rel=1e-14)


def test_temme_pair_at_zero():
    """The nu = 0 limits are (-gamma, 1) with zero odd derivatives"""
    g1, g2 = temme_gamma_pair(seed(0.0))
    assert g1.val == pytest.approx(-EULER_GAMMA, rel=1e-15)
    assert g2.val == 1.0
    assert g1.d1 == 0.0 and g2.d1 == 0.0
    assert math.isfinite(g1.d2) and math.isfinite(g2.d2)


@pytest.mark.parametrize("nu", [0.01, 0.2, 0.37, -0.45, 0.5])
def test_temme_pair_matches_definition(nu):
    """Away from zero the pair matches its defining quotient"""
    g1, g2 = temme_gamma_pair(nu)
    e1, e2 = direct_pair(nu)
    assert g1 == pytest.approx(e1, rel=1e-13)
    assert g2 == pytest.approx(e2, rel=1e-14)


def test_temme_pair_continuous_across_expansion_radius():
    """Taylor form and series agree at the switch point, derivatives included"""
    r = GAMMA_PAIR_EXPANSION.radius
    inside = temme_gamma_pair(seed(r * (1.0 - 1e-9)))
    outside = temme_gamma_pair(seed(r * (1.0 + 1e-9)))
    for a, b in zip(inside, outside):
        assert a.val == pytest.approx(b.val, rel=1e-13)
        assert a.d1 == pytest.approx(b.d1, rel=1e-8, abs=1e-12)
        assert a.d2 == pytest.approx(b.d2, rel=1e-8)


def test_temme_pair_out_of_range():
    """|nu| above one half is rejected"""
    with pytest.raises(BesselDomainError):
        temme_gamma_pair(0.75)


@pytest.mark.parametrize("s,x", [(2.5, 1.0), (2.5, 10.0), (0.7, 0.3), (4.0, 6.0)])
def test_upper_incomplete_gamma_positive_order(s, x):
    """Gamma(s, x) for s > 0 on both sides of the series/fraction switch"""
    expected = special.gammaincc(s, x) * special.gamma(s)
    assert upper_incomplete_gamma(s, x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("x", [3.0, 7.0, 17.0])
def test_upper_incomplete_gamma_non_positive_order(x):
    """Gamma(0, x) = E1(x) and Gamma(-1, x) by the downward recurrence"""
    e1 = special.exp1(x)
    assert upper_incomplete_gamma(0.0, x) == pytest.approx(e1, rel=1e-13)
    expected = math.exp(-x) / x - e1
    assert upper_incomplete_gamma(-1.0, x) == pytest.approx(expected, rel=1e-12)


def test_scaled_incomplete_gamma_survives_large_x():
    """e^x Gamma(s, x) stays finite where Gamma(s, x) underflows"""
    x = 800.0
    scaled = upper_incomplete_gamma_scaled(-3.0, x)
    # e^x Gamma(s, x) ~ x^(s-1) (1 + (s-1)/x + (s-1)(s-2)/x^2 + ...)
    series = 1.0 - 4.0 / x + 20.0 / x**2 - 120.0 / x**3
    assert scaled == pytest.approx(x**-4.0 * series, rel=1e-8)
    assert upper_incomplete_gamma(-3.0, x) == 0.0


def test_incomplete_gamma_order_derivative():
    """d/ds Gamma(s, x) through the continued fraction matches a stencil"""
    s, x = -2.0, 4.0
    out = upper_incomplete_gamma_scaled(seed(s), x)

    def f(v):
        return upper_incomplete_gamma_scaled(v, x)

    assert out.d1 == pytest.approx(adaptive_fd(f, s, 1, h0=0.1), rel=1e-9)


def test_incomplete_gamma_domain():
    """x must be positive"""
    with pytest.raises(BesselDomainError):
        upper_incomplete_gamma(1.0, 0.0)


def test_incomplete_gamma_against_oracle(oracle):
    """Double precision agrees with the extended-precision oracle"""
    for s, x in [(-3.0, 25.0), (0.5, 2.0), (-7.0, 60.0)]:
        ref = float(oracle.oracle_upper_incomplete_gamma(s, x, 30))
        assert upper_incomplete_gamma(s, x) == pytest.approx(ref, rel=1e-12)


def test_temme_pair_against_oracle(oracle):
    """Both members of the pair agree with the oracle to near machine precision"""
    for nu in (0.0, 5e-4, 0.25):
        r1, r2 = oracle.oracle_temme_gamma_pair(nu, 30)
        g1, g2 = temme_gamma_pair(nu)
        assert g1 == pytest.approx(float(r1), rel=1e-14)
        assert g2 == pytest.approx(float(r2), rel=1e-14)
