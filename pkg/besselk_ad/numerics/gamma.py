"""
Gamma-family primitives that accept floats or ``Dual2``.

- ``gamma_fn``: Euler gamma with order-derivatives through the polygamma chain rule.
- ``log_gamma_fn``: its logarithm, for orders where Gamma itself overflows.
- ``temme_gamma_pair``: the (Gamma1, Gamma2) pair used by the Temme series.
- ``upper_incomplete_gamma``: Gamma(s, x), plus the exponentially scaled form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from scipy import special

from besselk_ad.numerics.dual import (
    Dual2,
    Scalar,
    chain,
    exp,
    power,
    small_relative,
    value,
)
from besselk_ad.numerics.errors import (
    BesselDomainError,
    ConvergenceError,
    NumericOverflowError,
)

EULER_GAMMA = 0.5772156649015329
PSI2_AT_1 = -2.4041138063191885  # psi''(1) = -2 zeta(3)
PSI4_AT_1 = -24.886266123440878  # psi''''(1) = -24 zeta(5)

_FPMIN = 1e-300


def _trigamma(v: float) -> float:
    if v > 0.0:
        return float(special.polygamma(1, v))
    # reflection: psi1(1 - v) + psi1(v) = pi^2 / sin^2(pi v)
    s = math.sin(math.pi * v)
    return math.pi**2 / (s * s) - float(special.polygamma(1, 1.0 - v))


def gamma_fn(z: Scalar) -> Scalar:
    """Gamma(z); for duals d1 = Gamma*psi*z' and d2 = Gamma*(psi^2 + psi1)*z'^2 + Gamma*psi*z''."""
    v = value(z)
    if v <= 0.0 and v == math.floor(v):
        raise BesselDomainError(f"gamma pole at {v}")
    try:
        g = math.gamma(v)
    except OverflowError as exc:
        raise NumericOverflowError(f"Gamma({v}) overflows") from exc
    if not isinstance(z, Dual2):
        return g
    psi = float(special.digamma(v))
    return chain(z, g, g * psi, g * (psi * psi + _trigamma(v)))


def log_gamma_fn(z: Scalar) -> Scalar:
    """log Gamma(z) for z > 0; finite far past the point where Gamma itself overflows."""
    v = value(z)
    if not v > 0.0:
        raise BesselDomainError(f"log Gamma needs a positive argument, got {v}")
    lg = math.lgamma(v)
    if not isinstance(z, Dual2):
        return lg
    return chain(z, lg, float(special.digamma(v)), _trigamma(v))


@dataclass(frozen=True)
class GammaPairExpansion:
    """Even Taylor coefficients (degrees 0, 2, 4) of Gamma1 and Gamma2 about 0."""

    coeffs1: Tuple[float, float, float]
    coeffs2: Tuple[float, float, float]
    radius: float = 1e-3


def _closed_form_expansion(radius: float = 1e-3) -> GammaPairExpansion:
    g, pi2 = EULER_GAMMA, math.pi**2
    c2 = (g * g - pi2 / 6.0) / 2.0
    c3 = (2.0 * g**3 - g * pi2 - 2.0 * PSI2_AT_1) / 12.0
    c4 = (
        60.0 * g**4 - 60.0 * g * g * pi2 + pi2 * pi2 - 240.0 * g * PSI2_AT_1
    ) / 1440.0
    c5 = (
        12.0 * g**5
        - 20.0 * g**3 * pi2
        + g * pi2 * pi2
        - 120.0 * g * g * PSI2_AT_1
        + 20.0 * pi2 * PSI2_AT_1
        - 12.0 * PSI4_AT_1
    ) / 1440.0
    return GammaPairExpansion(
        coeffs1=(-g, -c3, -c5), coeffs2=(1.0, c2, c4), radius=radius
    )


def reciprocal_gamma_coefficients(terms: int = 28) -> Tuple[float, ...]:
    """
    Taylor coefficients c_k of 1/Gamma(1+x) = sum c_k x^k.

    Built from log(1/Gamma(1+x)) = gamma*x - sum_{k>=2} (-1)^k zeta(k) x^k / k
    through the power-series exponential recurrence n f_n = sum k h_k f_{n-k}.
    """
    h = [0.0, EULER_GAMMA]
    h += [-((-1.0) ** k) * float(special.zeta(k)) / k for k in range(2, terms)]
    f = [1.0]
    for n in range(1, terms):
        f.append(sum(k * h[k] * f[n - k] for k in range(1, n + 1)) / n)
    return tuple(f)


GAMMA_PAIR_EXPANSION = _closed_form_expansion()
_RGAMMA = reciprocal_gamma_coefficients()
_EVEN = _RGAMMA[0::2]
_ODD = _RGAMMA[1::2]


def _horner(coeffs, t: Scalar) -> Scalar:
    acc: Scalar = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


def temme_gamma_pair(
    nu: Scalar, expansion: GammaPairExpansion = GAMMA_PAIR_EXPANSION
) -> Tuple[Scalar, Scalar]:
    """
    (Gamma1, Gamma2) for |nu| <= 1/2 where

        Gamma1 = (1/Gamma(1-nu) - 1/Gamma(1+nu)) / (2 nu)
        Gamma2 = (1/Gamma(1-nu) + 1/Gamma(1+nu)) / 2

    Gamma1(0) = -gamma and Gamma2(0) = 1. No quotient is ever formed, so all
    three slots are finite at nu = 0.
    """
    v = value(nu)
    if abs(v) > 0.5 + 1e-12:
        raise BesselDomainError(f"temme_gamma_pair needs |nu| <= 1/2, got {v}")
    t = nu * nu
    if abs(v) < expansion.radius:
        return _horner(expansion.coeffs1, t), _horner(expansion.coeffs2, t)
    gam1 = -1.0 * _horner(_ODD, t)
    gam2 = _horner(_EVEN, t)
    return gam1, gam2


def _continued_fraction_scaled(
    s: Scalar, x: Scalar, max_terms: int, tol: float
) -> Scalar:
    # modified Lentz for e^x Gamma(s, x) = x^s / (x + 1 - s - 1*(1-s)/(x + 3 - s - ...))
    b = x + 1.0 - s
    c: Scalar = 1.0 / _FPMIN
    d: Scalar = 1.0 / b
    h = d
    for i in range(1, max_terms + 1):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        if abs(value(d)) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(value(c)) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        new_h = h * (d * c)
        if small_relative(new_h - h, new_h, tol):
            return power(x, s) * new_h
        h = new_h
    raise ConvergenceError(
        f"incomplete gamma continued fraction did not converge in {max_terms} terms "
        f"(s={value(s)}, x={value(x)})"
    )


def _lower_series_scaled(s: Scalar, x: Scalar, max_terms: int, tol: float) -> Scalar:
    # e^x gamma(s, x) = x^s * sum x^n / (s (s+1) ... (s+n))
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(max_terms):
        ap = ap + 1.0
        term = term * x / ap
        total = total + term
        if small_relative(term, total, tol):
            return power(x, s) * total
    raise ConvergenceError(
        f"lower incomplete gamma series did not converge (s={value(s)}, x={value(x)})"
    )


def upper_incomplete_gamma_scaled(
    s: Scalar, x: Scalar, max_terms: int = 60, tol: float = 1e-15
) -> Scalar:
    """e^x * Gamma(s, x), finite where Gamma(s, x) itself underflows."""
    xv, sv = value(x), value(s)
    if xv <= 0.0:
        raise BesselDomainError(f"upper incomplete gamma needs x > 0, got {xv}")
    if xv <= sv + 1.0 and sv > 0.0:
        return exp(x) * gamma_fn(s) - _lower_series_scaled(s, x, 4 * max_terms, tol)
    return _continued_fraction_scaled(s, x, max_terms, tol)


def upper_incomplete_gamma(
    s: Scalar, x: Scalar, max_terms: int = 60, tol: float = 1e-15
) -> Scalar:
    """Gamma(s, x) = integral from x to infinity of t^(s-1) e^(-t) dt."""
    xv, sv = value(x), value(s)
    if xv <= 0.0:
        raise BesselDomainError(f"upper incomplete gamma needs x > 0, got {xv}")
    if xv <= sv + 1.0 and sv > 0.0:
        lower = exp(-1.0 * x) * _lower_series_scaled(s, x, 4 * max_terms, tol)
        return gamma_fn(s) - lower
    return exp(-1.0 * x) * _continued_fraction_scaled(s, x, max_terms, tol)

