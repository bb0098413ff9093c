"""Reference values: mpmath quadrature and high-order finite differences."""

from besselk_ad.oracle.finite_diff import (
    adaptive_fd,
    adaptive_fd_partial,
    fd_weights,
    naive_fd,
)
from besselk_ad.oracle.quadrature import (
    oracle_available,
    oracle_besselk,
    oracle_dnu_besselk,
    oracle_matern_cov,
    oracle_temme_gamma_pair,
    oracle_upper_incomplete_gamma,
)

__all__ = [
    "adaptive_fd",
    "adaptive_fd_partial",
    "fd_weights",
    "naive_fd",
    "oracle_available",
    "oracle_besselk",
    "oracle_dnu_besselk",
    "oracle_matern_cov",
    "oracle_temme_gamma_pair",
    "oracle_upper_incomplete_gamma",
]
