"""Small-argument series for non-integer order."""

from __future__ import annotations

from besselk_ad.numerics.dual import Scalar, exp, log, negligible, power, value
from besselk_ad.numerics.errors import ConvergenceError
from besselk_ad.numerics.gamma import gamma_fn


def besselk_series(
    nu: Scalar,
    x: Scalar,
    tol: float = 1e-15,
    max_terms: int = 100,
    scaled: bool = False,
) -> Scalar:
    """
    K_nu(x) as

        1/2 sum_k (x/2)^(2k) / k! * (A_k + B_k),
        A_k = Gamma(nu) (x/2)^(-nu) / ((1-nu)_k),  B_k = Gamma(-nu) (x/2)^nu / ((1+nu)_k)

    where the Pochhammer ratios are updated algebraically, so only Gamma(nu)
    and Gamma(-nu) are ever evaluated. With ``scaled`` the result is
    x^nu K_nu(x), with the (x/2)^(-nu) x^nu product folded in exactly.
    The order must stay clear of the integers.
    """
    log_half_x = log(0.5 * x)
    if scaled:
        a = gamma_fn(nu) * power(2.0, nu)
        b = gamma_fn(-1.0 * nu) * exp(nu * log(0.5 * x * x))
    else:
        a = gamma_fn(nu) * exp(-1.0 * nu * log_half_x)
        b = gamma_fn(-1.0 * nu) * exp(nu * log_half_x)

    quarter_x2 = 0.25 * x * x
    t: Scalar = 1.0
    total = 0.5 * (a + b)
    for k in range(1, max_terms + 1):
        t = t * quarter_x2 / k
        a = a / (k - nu)
        b = b / (k + nu)
        ta, tb = t * a, t * b
        total = total + 0.5 * (ta + tb)
        if negligible((ta, tb), total, tol):
            return total
    raise ConvergenceError(
        f"series for K_nu did not converge in {max_terms} terms "
        f"(nu={value(nu)}, x={value(x)})"
    )
