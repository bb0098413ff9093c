"""
Matern covariance

    M(d) = sigma^2 * 2^(1-nu) / Gamma(nu) * z^nu K_nu(z),   z = sqrt(2 nu) d / rho

with its gradient and Hessian in theta = (sigma, rho, nu).

sigma and rho derivatives are analytic. Using d/dz [z^nu K_nu(z)] = -z^nu K_{nu-1}(z),

    dM/drho = sigma^2 c(nu) T / rho,     T = z^(nu+1) K_{nu-1}(z)
    d2M/drho2 = sigma^2 c(nu) (z^2 S - (2 nu + 1) T) / rho^2,   S = z^nu K_nu(z)

Every nu derivative comes from one Dual2 pass with nu seeded through c(nu),
the sqrt(2 nu) inside z, and both Bessel factors.
"""

from __future__ import annotations

import contextlib
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from besselk_ad.numerics.besselk import (
    DEFAULT_BRANCH_CONFIG,
    BranchConfig,
    besselk_xnu_scaled,
)
from besselk_ad.numerics.dual import Scalar, exp, power, seed, sqrt
from besselk_ad.numerics.errors import BesselDomainError
from besselk_ad.numerics.gamma import log_gamma_fn
from besselk_ad.oracle.finite_diff import naive_fd

logger = logging.getLogger(__name__)

PARAM_NAMES = ("sigma", "rho", "nu")
SIGMA, RHO, NU = range(3)
FD_KERNEL_STEP = 1e-6
LOG_TWO = math.log(2.0)


@dataclass(frozen=True)
class MaternParams:
    sigma: float
    rho: float
    nu: float

    def __post_init__(self) -> None:
        for name in PARAM_NAMES:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise BesselDomainError(f"Matern {name} must be positive and finite, got {v}")

    def as_array(self) -> np.ndarray:
        return np.array([self.sigma, self.rho, self.nu], dtype=float)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "MaternParams":
        sigma, rho, nu = (float(v) for v in values)
        return cls(sigma, rho, nu)


_fd_kernel_default = False


def fd_kernel_mode_toggle(on: bool) -> None:
    """Switch the process-wide default for nu-derivatives to naive finite differences."""
    global _fd_kernel_default
    _fd_kernel_default = bool(on)
    logger.debug("finite-difference kernel mode %s", "on" if on else "off")


def fd_kernel_enabled() -> bool:
    return _fd_kernel_default


@contextlib.contextmanager
def fd_kernel_mode(on: bool = True) -> Iterator[None]:
    previous = _fd_kernel_default
    fd_kernel_mode_toggle(on)
    try:
        yield
    finally:
        fd_kernel_mode_toggle(previous)


def _check_distance(d: float) -> None:
    if not d >= 0.0:
        raise BesselDomainError(f"distance must be nonnegative, got {d}")


def _normalizer(nu: Scalar) -> Scalar:
    # 2^(1-nu) / Gamma(nu) in log form; Gamma overflows past nu ~ 171
    return exp((1.0 - nu) * LOG_TWO - log_gamma_fn(nu))


def _lag(nu: Scalar, d: float, rho: float) -> Scalar:
    return sqrt(2.0 * nu) * (d / rho)


def _shifted_scaled(nu: Scalar, z: Scalar, cfg: BranchConfig) -> Scalar:
    """T = z^(nu+1) K_{nu-1}(z), kept in x^mu K_mu form with mu >= 0."""
    if nu >= 1.0:
        return z * z * besselk_xnu_scaled(nu - 1.0, z, cfg)
    return power(z, 2.0 * nu) * besselk_xnu_scaled(1.0 - nu, z, cfg)


def matern_cov(
    theta: MaternParams, d: float, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> float:
    _check_distance(d)
    s2 = theta.sigma * theta.sigma
    if d == 0.0:
        return s2
    nu = theta.nu
    return s2 * _normalizer(nu) * besselk_xnu_scaled(nu, _lag(nu, d, theta.rho), cfg)


def _drho(theta: MaternParams, nu: Scalar, d: float, cfg: BranchConfig) -> Scalar:
    z = _lag(nu, d, theta.rho)
    s2 = theta.sigma * theta.sigma
    return s2 * _normalizer(nu) * _shifted_scaled(nu, z, cfg) / theta.rho


def _nu_fd_entries(
    theta: MaternParams, d: float, cfg: BranchConfig
) -> Tuple[float, float, float]:
    def cov_at(v: float) -> float:
        return matern_cov(MaternParams(theta.sigma, theta.rho, v), d, cfg)

    def drho_at(v: float) -> float:
        return float(_drho(theta, v, d, cfg))

    h = FD_KERNEL_STEP
    return (
        naive_fd(cov_at, theta.nu, h, 1),
        naive_fd(cov_at, theta.nu, h, 2),
        naive_fd(drho_at, theta.nu, h, 1),
    )


def matern_cov_grad_hess(
    theta: MaternParams,
    d: float,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Value, gradient and Hessian in (sigma, rho, nu) from a single nu-seeded pass."""
    _check_distance(d)
    sigma, rho = theta.sigma, theta.rho
    grad = np.zeros(3)
    hess = np.zeros((3, 3))
    if d == 0.0:
        grad[SIGMA] = 2.0 * sigma
        hess[SIGMA, SIGMA] = 2.0
        return sigma * sigma, grad, hess

    nu = seed(theta.nu)
    z = _lag(nu, d, rho)
    c = _normalizer(nu)
    s2 = sigma * sigma
    s_fn = besselk_xnu_scaled(nu, z, cfg)
    t_fn = _shifted_scaled(nu, z, cfg)
    cov = s2 * c * s_fn
    drho = s2 * c * t_fn / rho

    m, dnu, dnunu = cov.as_tuple()
    dr, drnu = drho.val, drho.d1
    use_fd = fd_kernel_enabled() if fd_kernel is None else fd_kernel
    if use_fd:
        dnu, dnunu, drnu = _nu_fd_entries(theta, d, cfg)

    zv, cv = z.val, c.val
    grad[SIGMA] = 2.0 * m / sigma
    grad[RHO] = dr
    grad[NU] = dnu

    hess[SIGMA, SIGMA] = 2.0 * cv * s_fn.val
    hess[SIGMA, RHO] = 2.0 * dr / sigma
    hess[SIGMA, NU] = 2.0 * dnu / sigma
    hess[RHO, RHO] = s2 * cv * (zv * zv * s_fn.val - (2.0 * theta.nu + 1.0) * t_fn.val) / (
        rho * rho
    )
    hess[RHO, NU] = drnu
    hess[NU, NU] = dnunu
    lower = np.tril_indices(3, -1)
    hess[lower] = hess.T[lower]
    return m, grad, hess


def matern_grad(
    theta: MaternParams,
    d: float,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> np.ndarray:
    return matern_cov_grad_hess(theta, d, cfg, fd_kernel)[1]


def matern_hess(
    theta: MaternParams,
    d: float,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> np.ndarray:
    return matern_cov_grad_hess(theta, d, cfg, fd_kernel)[2]
