"""Tests for second-order dual numbers"""

import math

import pytest

from besselk_ad.numerics import dual
from besselk_ad.numerics.dual import Dual2, lift, seed
from besselk_ad.numerics.errors import BesselDomainError


def close(a, b, rel=1e-14):
    return all(x == pytest.approx(y, rel=rel, abs=1e-300) for x, y in zip(a.as_tuple(), b))


def test_seed_and_lift():
    """Seeded variables carry a unit first slot, constants carry none"""
    assert seed(2.0).as_tuple() == (2.0, 1.0, 0.0)
    assert lift(2.0).as_tuple() == (2.0, 0.0, 0.0)


def test_product_rule_cubic():
    """x^3 at 2 gives (8, 12, 12)"""
    x = seed(2.0)
    assert close(x * x * x, (8.0, 12.0, 12.0))


def test_reciprocal():
    """1/x at 2 gives (1/2, -1/4, 1/4)"""
    assert close(1.0 / seed(2.0), (0.5, -0.25, 0.25))


def test_quotient_matches_product_with_reciprocal():
    """a/b equals a * (1/b) slot by slot"""
    a = dual.sin(seed(0.7))
    b = dual.exp(seed(0.7))
    assert close(a / b, (a * (1.0 / b)).as_tuple(), rel=1e-13)


def test_exp_log_roundtrip():
    """log(exp(x)) is x with derivatives (1, 0)"""
    out = dual.log(dual.exp(seed(0.3)))
    assert out.val == pytest.approx(0.3)
    assert out.d1 == pytest.approx(1.0)
    assert out.d2 == pytest.approx(0.0, abs=1e-14)


def test_sqrt_slots():
    """sqrt(x) at 4 gives (2, 1/4, -1/32)"""
    assert close(dual.sqrt(seed(4.0)), (2.0, 0.25, -1.0 / 32.0))


def test_power_with_dual_exponent():
    """2^x at 3 gives 8 (1, ln 2, ln^2 2)"""
    ln2 = math.log(2.0)
    assert close(dual.power(2.0, seed(3.0)), (8.0, 8.0 * ln2, 8.0 * ln2 * ln2), rel=1e-13)


def test_power_with_constant_exponent():
    """x^2.5 at 1.5 by the chain rule"""
    x = 1.5
    expected = (x**2.5, 2.5 * x**1.5, 3.75 * x**0.5)
    assert close(dual.power(seed(x), 2.5), expected, rel=1e-13)


def test_trig_identity_has_no_derivative():
    """sin^2 + cos^2 is constant"""
    x = seed(1.1)
    out = dual.sin(x) * dual.sin(x) + dual.cos(x) * dual.cos(x)
    assert out.val == pytest.approx(1.0)
    assert out.d1 == pytest.approx(0.0, abs=1e-15)
    assert out.d2 == pytest.approx(0.0, abs=1e-15)


def test_hyperbolic_identity_has_no_derivative():
    """cosh^2 - sinh^2 is constant"""
    x = seed(0.8)
    out = dual.cosh(x) * dual.cosh(x) - dual.sinh(x) * dual.sinh(x)
    assert out.val == pytest.approx(1.0)
    assert out.d1 == pytest.approx(0.0, abs=1e-14)
    assert out.d2 == pytest.approx(0.0, abs=1e-14)


def test_functions_accept_floats():
    """Plain floats pass straight through to math"""
    assert dual.exp(1.0) == math.exp(1.0)
    assert dual.sqrt(9.0) == 3.0
    assert isinstance(dual.log(2.0), float)


def test_domain_errors():
    """Invalid arguments raise BesselDomainError"""
    with pytest.raises(BesselDomainError):
        dual.log(seed(0.0))
    with pytest.raises(BesselDomainError):
        seed(1.0) / lift(0.0)
    with pytest.raises(BesselDomainError):
        dual.sqrt(seed(0.0))
    with pytest.raises(BesselDomainError):
        dual.power(-2.0, seed(0.5))


def test_domain_error_is_value_error():
    """Callers can catch domain errors as ValueError"""
    with pytest.raises(ValueError):
        dual.log(-1.0)


def test_comparisons_use_primal_value():
    """Ordering ignores derivative slots; equality does not"""
    a = Dual2(1.0, 5.0, 0.0)
    b = Dual2(1.0, 0.0, 0.0)
    assert not a < b and a <= b and a >= b
    assert a != b
    assert b == 1.0
    assert a > 0.5


def test_abs_of_negative():
    """abs flips every slot below zero"""
    assert abs(Dual2(-2.0, 1.0, 3.0)).as_tuple() == (2.0, -1.0, -3.0)


def test_negligible_is_slotwise():
    """A term is negligible only when every slot is small"""
    total = Dual2(1.0, 1.0, 1.0)
    assert dual.negligible([Dual2(1e-17, 1e-17, 1e-17)], total, 1e-15)
    assert not dual.negligible([Dual2(1e-17, 1e-3, 1e-17)], total, 1e-15)
    assert dual.small_relative(1e-17, 1.0, 1e-15)
