"""Uniform large-order expansion, written so it stays regular as nu -> 0."""

from __future__ import annotations

import math

from besselk_ad.numerics.dual import Scalar, exp, log, sqrt
from besselk_ad.numerics.errors import BesselDomainError
from besselk_ad.numerics.uk_polynomials import UkTable, build_uk_table, eval_uk_reduced


def besselk_uae(
    nu: Scalar,
    x: Scalar,
    trunc: int,
    table: UkTable | None = None,
    scaled: bool = False,
) -> Scalar:
    """
    K_nu(x) from the expansion of K_nu(nu z) at z = x / nu.

    With s = sqrt(nu^2 + x^2) the expansion reads

        K_nu(x) ~ sqrt(pi / (2 s)) exp(-nu eta) sum_{k<trunc} (-1)^k s^(-k) W_k(nu^2 / s^2)
        nu eta  = s + nu log(x / (nu + s))

    which is the usual sqrt(pi/(2 nu)) (1+z^2)^(-1/4) sum (-1)^k U_k(p) / nu^k
    with p = nu / s and U_k(p) = p^k W_k(p^2). Both nu-dependencies, the
    prefactor and the rescaled argument, flow through the duals.
    """
    table = table or build_uk_table()
    if trunc < 1 or trunc - 1 > table.max_order:
        raise BesselDomainError(
            f"UAE truncation {trunc} needs U_k up to k={trunc - 1}, "
            f"table has {table.max_order}"
        )
    s = sqrt(nu * nu + x * x)
    r = 1.0 / s
    nu_r = nu * r
    q = nu_r * nu_r
    nu_eta = s + nu * log(x / (nu + s))

    total: Scalar = 1.0
    rk: Scalar = 1.0
    for k in range(1, trunc):
        rk = -1.0 * rk * r
        total = total + rk * eval_uk_reduced(table, k, q)

    exponent = -1.0 * nu_eta
    if scaled:
        exponent = exponent + nu * log(x)
    return sqrt(math.pi / 2.0 * r) * exp(exponent) * total
