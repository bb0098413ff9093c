"""
Extended-precision reference values built on mpmath.

K_nu(x) comes from the integral representation

    e^x K_nu(x) = integral_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt

by tanh-sinh quadrature of the scaled integrand, unscaled afterwards. This
shares no code with the double-precision kernels. mpmath is imported on
first use; without it every entry point raises ``OracleUnavailableError``.
"""

from __future__ import annotations

import functools
import logging
from typing import Any, Callable, Tuple

from besselk_ad.numerics.errors import (
    BesselDomainError,
    ConvergenceError,
    OracleDisagreementError,
    OracleUnavailableError,
)

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 50
MAX_DIGITS = 100
MAX_ORDER = 50.0
AGREEMENT_DIGITS = 20
_GUARD_DIGITS = 10
# tanh-sinh degree cap for retries; the first attempt uses mpmath's own
_RETRY_DEGREES = (None, 10, 12)


@functools.lru_cache(maxsize=None)
def _mpmath() -> Any:
    try:
        import mpmath
    except ImportError as exc:
        raise OracleUnavailableError(
            "the reference oracle needs mpmath (pip install mpmath)"
        ) from exc
    return mpmath


def oracle_available() -> bool:
    try:
        _mpmath()
    except OracleUnavailableError:
        return False
    return True


def _check(nu: float, x: float, digits: int) -> None:
    if not x > 0.0:
        raise BesselDomainError(f"oracle needs x > 0, got {x}")
    if abs(nu) > MAX_ORDER:
        raise BesselDomainError(f"oracle supports |nu| <= {MAX_ORDER}, got {nu}")
    if not 1 <= digits <= MAX_DIGITS:
        raise BesselDomainError(f"oracle digits must lie in [1, {MAX_DIGITS}]")


def _cutoff(mp: Any, nu: Any, x: Any, digits: int, power: int = 0) -> Any:
    # first T with exp(-x (cosh T - 1) + |nu| T) T^power below 10^-(digits+guard)
    target = (digits + _GUARD_DIGITS) * mp.log(10)
    nu = abs(nu)
    t = mp.mpf(1)
    for _ in range(200):
        decay = x * (mp.cosh(t) - 1) - nu * t - power * mp.log(t + 1)
        if decay > target:
            return t
        t *= mp.mpf("1.25")
    raise ConvergenceError(f"no integration cutoff found for nu={nu}, x={x}")


def _integrate(mp: Any, integrand: Callable[[Any], Any], upper: Any, digits: int) -> Any:
    pieces = 8
    tol = mp.mpf(10) ** (-digits)
    for attempt, degree in enumerate(_RETRY_DEGREES):
        options = {} if degree is None else {"maxdegree": degree}
        nodes = mp.linspace(0, upper, pieces + 1)
        result, err = mp.quad(integrand, nodes, error=True, **options)
        if err <= tol * max(abs(result), mp.mpf(10) ** (-mp.mp.dps)):
            return result
        logger.warning(
            "oracle quadrature error %s above target on attempt %d, refining",
            mp.nstr(err, 3),
            attempt + 1,
        )
        pieces *= 2
    raise ConvergenceError(f"oracle quadrature did not converge (error {mp.nstr(err, 3)})")


def _besselk_mp(mp: Any, nu: Any, x: Any, digits: int, k: int = 0) -> Any:
    """k-th nu-derivative of the integral at the current working precision."""
    upper = _cutoff(mp, nu, x, digits, power=k)
    even = mp.cosh if k % 2 == 0 else mp.sinh

    def integrand(t: Any) -> Any:
        # e^x folded in so the error target is relative to an O(1) quantity
        return mp.exp(-x * (mp.cosh(t) - 1)) * t**k * even(nu * t)

    return _integrate(mp, integrand, upper, digits) * mp.exp(-x)


def oracle_besselk(nu: float, x: float, digits: int = DEFAULT_DIGITS) -> Any:
    """K_nu(x) as an mpmath ``mpf`` good to about ``digits - 5`` significant digits."""
    _check(nu, x, digits)
    mp = _mpmath()
    with mp.workdps(digits + _GUARD_DIGITS):
        value = _besselk_mp(mp, mp.mpf(nu), mp.mpf(x), digits)
    return value


def _dnu_by_quadrature(mp: Any, nu: Any, x: Any, k: int, digits: int) -> Any:
    return _besselk_mp(mp, nu, x, digits, k)


def _dnu_by_differences(mp: Any, nu: Any, x: Any, k: int, digits: int) -> Any:
    step = mp.mpf(10) ** (-(digits // 4))
    return mp.diff(lambda v: _besselk_mp(mp, v, x, digits), nu, n=k, h=step)


_DNU_METHODS = {
    "quadrature": _dnu_by_quadrature,
    "diff": _dnu_by_differences,
}


def oracle_dnu_besselk(
    nu: float,
    x: float,
    k: int = 1,
    digits: int = DEFAULT_DIGITS,
    method: str = "quadrature",
) -> Any:
    """
    d^k/dnu^k K_nu(x) for k in {1, 2}.

    ``method`` is ``"quadrature"`` (differentiated integrand), ``"diff"``
    (extended-precision central differences of the integral) or ``"both"``,
    which runs the two and raises ``OracleDisagreementError`` unless they agree
    to 20 digits relative to max(|d1|, |d2|, K).
    """
    if k not in (1, 2):
        raise BesselDomainError(f"oracle derivative order must be 1 or 2, got {k}")
    _check(nu, x, digits)
    mp = _mpmath()
    with mp.workdps(digits + _GUARD_DIGITS):
        nu_mp, x_mp = mp.mpf(nu), mp.mpf(x)
        if method != "both":
            try:
                runner = _DNU_METHODS[method]
            except KeyError:
                raise ValueError(
                    f"unknown oracle method {method!r}; choose from "
                    f"{', '.join(sorted(_DNU_METHODS))} or 'both'"
                ) from None
            return runner(mp, nu_mp, x_mp, k, digits)

        by_quad = _dnu_by_quadrature(mp, nu_mp, x_mp, k, digits)
        by_diff = _dnu_by_differences(mp, nu_mp, x_mp, k, digits)
        scale = max(abs(by_quad), abs(by_diff), _besselk_mp(mp, nu_mp, x_mp, digits))
        gap = abs(by_quad - by_diff)
        if gap > mp.mpf(10) ** (-AGREEMENT_DIGITS) * scale:
            raise OracleDisagreementError(
                f"oracle derivative methods disagree at nu={nu}, x={x}, k={k}: "
                f"{mp.nstr(by_quad, 25)} vs {mp.nstr(by_diff, 25)}"
            )
        return by_quad


@functools.lru_cache(maxsize=4096)
def _matern_cached(sigma: float, rho: float, nu: float, d: float, digits: int) -> Any:
    mp = _mpmath()
    with mp.workdps(digits + _GUARD_DIGITS):
        s2 = mp.mpf(sigma) ** 2
        if d == 0.0:
            return s2
        nu_mp = mp.mpf(nu)
        z = mp.sqrt(2 * nu_mp) * mp.mpf(d) / mp.mpf(rho)
        k = _besselk_mp(mp, nu_mp, z, digits)
        return s2 * mp.power(2, 1 - nu_mp) / mp.gamma(nu_mp) * z**nu_mp * k


def oracle_matern_cov(theta: Any, d: float, digits: int = 30) -> Any:
    """Matern covariance at distance ``d`` with the oracle kernel; cached per (theta, d)."""
    if d < 0.0:
        raise BesselDomainError(f"distance must be nonnegative, got {d}")
    return _matern_cached(
        float(theta.sigma), float(theta.rho), float(theta.nu), float(d), digits
    )


def oracle_temme_gamma_pair(nu: float, digits: int = DEFAULT_DIGITS) -> Tuple[Any, Any]:
    """(Gamma1, Gamma2) at extended precision; at nu = 0 Gamma1 is -d/dt 1/Gamma(1+t)."""
    if abs(nu) > 0.5:
        raise BesselDomainError(f"temme gamma pair needs |nu| <= 1/2, got {nu}")
    mp = _mpmath()
    with mp.workdps(digits + 2 * _GUARD_DIGITS):
        if nu == 0.0:
            return -mp.diff(mp.rgamma, 1), mp.rgamma(1)
        v = mp.mpf(nu)
        minus, plus = mp.rgamma(1 - v), mp.rgamma(1 + v)
        return (minus - plus) / (2 * v), (minus + plus) / 2


def oracle_upper_incomplete_gamma(s: float, x: float, digits: int = DEFAULT_DIGITS) -> Any:
    """Gamma(s, x) at extended precision."""
    if not x > 0.0:
        raise BesselDomainError(f"upper incomplete gamma needs x > 0, got {x}")
    mp = _mpmath()
    with mp.workdps(digits + _GUARD_DIGITS):
        return mp.gammainc(mp.mpf(s), a=mp.mpf(x))

