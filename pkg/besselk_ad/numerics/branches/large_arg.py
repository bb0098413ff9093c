"""Hankel large-argument expansion."""

from __future__ import annotations

import math
from typing import List

from besselk_ad.numerics.dual import Scalar, exp, log, sqrt


def hankel_coefficients(nu: Scalar, count: int) -> List[Scalar]:
    """a_0..a_{count-1} with a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (8^k k!)."""
    four_nu2 = 4.0 * nu * nu
    coeffs: List[Scalar] = [1.0]
    for k in range(1, count):
        coeffs.append(coeffs[-1] * (four_nu2 - (2 * k - 1) ** 2) / (8.0 * k))
    return coeffs


def besselk_large_arg(
    nu: Scalar, x: Scalar, trunc: int, scaled: bool = False
) -> Scalar:
    """K_nu(x) ~ sqrt(pi/(2x)) e^(-x) sum_{k<trunc} a_k(nu) x^(-k)."""
    inv_x = 1.0 / x
    total: Scalar = 0.0
    xp: Scalar = 1.0
    for a in hankel_coefficients(nu, trunc):
        total = total + a * xp
        xp = xp * inv_x
    if scaled:
        return math.sqrt(math.pi / 2.0) * exp((nu - 0.5) * log(x) - x) * total
    return sqrt(math.pi / 2.0 * inv_x) * exp(-1.0 * x) * total
