"""
Temme's method: K_mu and K_{mu+1} for |mu| <= 1/2, then upward recurrence in
the order. Below ``cf_min_x`` the pair comes from Temme's power series; above
it from Steed's continued fraction, which has no cancellation at moderate x.
Every step is dual-generic, so integer orders carry correct order-derivatives.
"""

from __future__ import annotations

import math
from typing import Tuple

from besselk_ad.numerics.dual import (
    Scalar,
    cosh,
    exp,
    log,
    negligible,
    power,
    sin,
    sinh,
    sqrt,
    value,
)
from besselk_ad.numerics.errors import ConvergenceError
from besselk_ad.numerics.gamma import GAMMA_PAIR_EXPANSION, temme_gamma_pair

_SINHC_RADIUS = 0.5
_SINHC_TERMS = tuple(1.0 / math.factorial(2 * k + 1) for k in range(10))


def _pi_mu_over_sin(mu: Scalar) -> Scalar:
    y = math.pi * mu
    if abs(value(mu)) < GAMMA_PAIR_EXPANSION.radius:
        y2 = y * y
        return 1.0 + y2 * (1.0 / 6.0 + y2 * (7.0 / 360.0 + y2 * (31.0 / 15120.0)))
    return y / sin(y)


def _sinhc(e: Scalar) -> Scalar:
    if abs(value(e)) < _SINHC_RADIUS:
        e2 = e * e
        acc: Scalar = _SINHC_TERMS[-1]
        for c in reversed(_SINHC_TERMS[:-1]):
            acc = acc * e2 + c
        return acc
    return sinh(e) / e


def temme_pair(
    mu: Scalar, x: Scalar, tol: float = 1e-15, max_terms: int = 100
) -> Tuple[Scalar, Scalar]:
    """(K_mu(x), K_{mu+1}(x)) for |mu| <= 1/2."""
    half_x = 0.5 * x
    log_two_over_x = -1.0 * log(half_x)
    gam1, gam2 = temme_gamma_pair(mu)
    gampl = gam2 - mu * gam1  # 1/Gamma(1+mu)
    gammi = gam2 + mu * gam1  # 1/Gamma(1-mu)

    e = mu * log_two_over_x
    ff = _pi_mu_over_sin(mu) * (
        gam1 * cosh(e) + gam2 * _sinhc(e) * log_two_over_x
    )
    # p and q are mirror images under mu -> -mu; keep them computed that way
    p = 0.5 * exp(e) / gampl
    q = 0.5 * exp(-1.0 * e) / gammi

    c: Scalar = 1.0
    d = half_x * half_x
    mu2 = mu * mu
    total = ff
    total1 = p
    for i in range(1, max_terms + 1):
        ff = (i * ff + p + q) / (i * i - mu2)
        c = c * d / i
        p = p / (i - mu)
        q = q / (i + mu)
        delta = c * ff
        total = total + delta
        delta1 = c * (p - i * ff)
        total1 = total1 + delta1
        if negligible((delta,), total, tol) and negligible((delta1,), total1, tol):
            return total, total1 * (2.0 / x)
    raise ConvergenceError(
        f"Temme series did not converge in {max_terms} terms "
        f"(mu={value(mu)}, x={value(x)})"
    )


def steed_pair(
    mu: Scalar, x: Scalar, tol: float = 1e-15, max_terms: int = 1000
) -> Tuple[Scalar, Scalar]:
    """(K_mu(x), K_{mu+1}(x)) for |mu| <= 1/2 by Steed's continued fraction; x >~ 2."""
    a1 = 0.25 - mu * mu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1: Scalar = 0.0
    q2: Scalar = 1.0
    q = a1
    c = a1
    a = -1.0 * a1
    s = 1.0 + q * delh
    for i in range(2, max_terms + 1):
        a = a - 2.0 * (i - 1)
        c = -1.0 * a * c / i
        q1, q2 = q2, (q1 - b * q2) / a
        q = q + c * q2
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if negligible((dels,), s, tol) and negligible((delh,), h, tol):
            k_mu = sqrt(math.pi / (2.0 * x)) * exp(-1.0 * x) / s
            return k_mu, k_mu * (mu + x + 0.5 - a1 * h) / x
    raise ConvergenceError(
        f"Steed continued fraction did not converge in {max_terms} terms "
        f"(mu={value(mu)}, x={value(x)})"
    )


def besselk_temme(
    nu: Scalar,
    x: Scalar,
    tol: float = 1e-15,
    max_terms: int = 100,
    scaled: bool = False,
    cf_min_x: float = 2.0,
) -> Scalar:
    """
    K_nu(x) for nu = n + mu, n = round(nu), |mu| <= 1/2, via the Temme pair and

        K_{mu+i+1} = 2 (mu+i) / x * K_{mu+i} + K_{mu+i-1}

    With ``scaled`` the recurrence runs on s_i = x^(mu+i) K_{mu+i}:

        s_{i+1} = 2 (mu+i) s_i + x^2 s_{i-1}

    The pair comes from ``steed_pair`` once x >= ``cf_min_x``.
    """
    n = int(math.floor(value(nu) + 0.5))
    mu = nu - n
    if value(x) >= cf_min_x:
        k_prev, k_cur = steed_pair(mu, x, tol)
    else:
        k_prev, k_cur = temme_pair(mu, x, tol, max_terms)
    if scaled:
        k_prev = k_prev * power(x, mu)
        k_cur = k_cur * power(x, mu + 1.0)
        step = x * x
        for i in range(1, n):
            k_prev, k_cur = k_cur, 2.0 * (mu + i) * k_cur + step * k_prev
    else:
        for i in range(1, n):
            k_prev, k_cur = k_cur, 2.0 * (mu + i) / x * k_cur + k_prev
    return k_prev if n == 0 else k_cur
