"""
Half-integer orders.

At nu = n + 1/2 the Hankel expansion terminates after n+1 terms and is exact.
Its order-derivatives do not terminate, so when derivatives are tracked the
exponentially improved form is used instead:

    K_nu(x) = sqrt(pi/(2x)) e^(-x) (sum_{k<l} a_k(nu) x^(-k) + R_l)
    R_l     = (-1)^l 2 cos(nu pi) sum_{k<m} a_k(nu) x^(-k) G_{l-k}(2x)
    G_p(y)  = Gamma(p) / (2 pi) * e^y Gamma(1-p, y)

cos(nu pi) is formed as (-1)^(n+1) sin(pi delta), delta = nu - n - 1/2, so its
value is exactly zero at half-integers while its derivative is not.
"""

from __future__ import annotations

import math

from besselk_ad.numerics.dual import Dual2, Scalar, exp, log, sin, sqrt, value
from besselk_ad.numerics.gamma import upper_incomplete_gamma_scaled
from besselk_ad.numerics.branches.large_arg import hankel_coefficients


def g_remainder(p: int, y: Scalar) -> Scalar:
    """G_p(y) for integer p >= 1."""
    return math.factorial(p - 1) / (2.0 * math.pi) * upper_incomplete_gamma_scaled(
        1.0 - p, y
    )


def remainder_depths(n: int, l: int, m: int) -> tuple[int, int]:
    """Effective (l, m) for the order n + 1/2."""
    l_eff = max(l, n + 1)
    m_eff = min(max(m, n + 3), l_eff)
    return l_eff, m_eff


def besselk_halfint(
    nu: Scalar,
    x: Scalar,
    tracking: bool,
    l: int = 14,
    m: int = 4,
    scaled: bool = False,
) -> Scalar:
    n = int(math.floor(value(nu)))
    delta = nu - (n + 0.5)
    tracking = tracking or isinstance(nu, Dual2) or isinstance(x, Dual2)
    inv_x = 1.0 / x

    if not tracking and value(delta) == 0.0:
        total: Scalar = 0.0
        xp: Scalar = 1.0
        for a in hankel_coefficients(nu, n + 1):
            total = total + a * xp
            xp = xp * inv_x
    else:
        l_eff, m_eff = remainder_depths(n, l, m)
        coeffs = hankel_coefficients(nu, l_eff)
        powers = [1.0]
        for _ in range(1, l_eff):
            powers.append(powers[-1] * inv_x)
        total = 0.0
        for a, xp in zip(coeffs, powers):
            total = total + a * xp
        y = 2.0 * x
        tail: Scalar = 0.0
        for k in range(m_eff):
            tail = tail + coeffs[k] * powers[k] * g_remainder(l_eff - k, y)
        sign = -1.0 if (l_eff + n + 1) % 2 else 1.0
        cos_nu_pi = sign * sin(math.pi * delta)
        total = total + 2.0 * cos_nu_pi * tail

    if scaled:
        return math.sqrt(math.pi / 2.0) * exp((nu - 0.5) * log(x) - x) * total
    return sqrt(math.pi / 2.0 * inv_x) * exp(-1.0 * x) * total
