"""K_nu(x) with exact order-derivatives, Matern covariances and Gaussian likelihoods."""

from besselk_ad.numerics import (
    DEFAULT_BRANCH_CONFIG,
    BranchConfig,
    BranchTag,
    Dataset,
    Dual2,
    FitResult,
    MaternParams,
    OptimOptions,
    besselk,
    besselk_d1d2,
    besselk_xnu_scaled,
    fisher_info,
    fit,
    grid_locations,
    matern_cov,
    matern_grad,
    matern_hess,
    nll,
    nll_grad,
    nll_hess,
    profile_nll,
    select_branch,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BRANCH_CONFIG",
    "BranchConfig",
    "BranchTag",
    "Dataset",
    "Dual2",
    "FitResult",
    "MaternParams",
    "OptimOptions",
    "besselk",
    "besselk_d1d2",
    "besselk_xnu_scaled",
    "fisher_info",
    "fit",
    "grid_locations",
    "matern_cov",
    "matern_grad",
    "matern_hess",
    "nll",
    "nll_grad",
    "nll_hess",
    "profile_nll",
    "select_branch",
    "simulate",
    "__version__",
]
