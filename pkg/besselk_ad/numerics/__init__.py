"""Dual-number K_nu kernels, Matern covariance, Gaussian likelihood and optimizer."""

from besselk_ad.numerics.besselk import (
    DEFAULT_BRANCH_CONFIG,
    BranchConfig,
    BranchTag,
    besselk,
    besselk_d1d2,
    besselk_with_branch,
    besselk_xnu_scaled,
    select_branch,
)
from besselk_ad.numerics.dual import Dual2, lift, seed, value
from besselk_ad.numerics.errors import (
    BesselDomainError,
    BesselError,
    ConfigError,
    ConvergenceError,
    DatasetError,
    FactorizationError,
    OracleDisagreementError,
    OracleUnavailableError,
)
from besselk_ad.numerics.gamma import (
    gamma_fn,
    temme_gamma_pair,
    upper_incomplete_gamma,
    upper_incomplete_gamma_scaled,
)
from besselk_ad.numerics.likelihood import (
    CovarianceBundle,
    Dataset,
    Level,
    assemble,
    covariance_matrix,
    fisher_info,
    grid_locations,
    nll,
    nll_and_grad,
    nll_grad,
    nll_hess,
    profile_neg2loglik,
    profile_nll,
    profile_sigma2,
    simulate,
)
from besselk_ad.numerics.matern import (
    MaternParams,
    fd_kernel_mode,
    fd_kernel_mode_toggle,
    matern_cov,
    matern_cov_grad_hess,
    matern_grad,
    matern_hess,
)
from besselk_ad.numerics.optimizer import (
    CurvatureMode,
    FitResult,
    OptimOptions,
    fit,
    observed_curvature,
)
from besselk_ad.numerics.uk_polynomials import UkTable, build_uk_table, eval_uk

__all__ = [
    "DEFAULT_BRANCH_CONFIG",
    "BranchConfig",
    "BranchTag",
    "besselk",
    "besselk_d1d2",
    "besselk_with_branch",
    "besselk_xnu_scaled",
    "select_branch",
    "Dual2",
    "lift",
    "seed",
    "value",
    "BesselDomainError",
    "BesselError",
    "ConfigError",
    "ConvergenceError",
    "DatasetError",
    "FactorizationError",
    "OracleDisagreementError",
    "OracleUnavailableError",
    "gamma_fn",
    "temme_gamma_pair",
    "upper_incomplete_gamma",
    "upper_incomplete_gamma_scaled",
    "CovarianceBundle",
    "Dataset",
    "Level",
    "assemble",
    "covariance_matrix",
    "fisher_info",
    "grid_locations",
    "nll",
    "nll_and_grad",
    "nll_grad",
    "nll_hess",
    "profile_neg2loglik",
    "profile_nll",
    "profile_sigma2",
    "simulate",
    "MaternParams",
    "fd_kernel_mode",
    "fd_kernel_mode_toggle",
    "matern_cov",
    "matern_cov_grad_hess",
    "matern_grad",
    "matern_hess",
    "CurvatureMode",
    "FitResult",
    "OptimOptions",
    "fit",
    "observed_curvature",
    "UkTable",
    "build_uk_table",
    "eval_uk",
]
