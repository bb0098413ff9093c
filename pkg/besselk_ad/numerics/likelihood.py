"""
Gaussian negative log-likelihood over Matern parameters.

For m independent mean-zero replicates z_r sharing one covariance Sigma(theta),

    nll(theta) = 1/2 sum_r [log|Sigma| + z_r' Sigma^-1 z_r]

The 2 pi constant is omitted, so values differ from other software by
n m log(2 pi) / 2. All solves reuse one Cholesky factor; no explicit inverse
is formed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.spatial.distance import pdist, squareform

from besselk_ad.numerics.besselk import DEFAULT_BRANCH_CONFIG, BranchConfig
from besselk_ad.numerics.errors import DatasetError, FactorizationError
from besselk_ad.numerics.matern import MaternParams, matern_cov, matern_cov_grad_hess

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
ProfileParams = Tuple[float, float]
Kernel = Callable[[MaternParams, float], float]
N_PARAMS = 3


@dataclass(frozen=True, eq=False)
class Dataset:
    """``locations`` is (n, d) with d in {1, 2}; ``replicates`` is (m, n)."""

    locations: np.ndarray
    replicates: np.ndarray

    def __post_init__(self) -> None:
        locs = np.asarray(self.locations, dtype=float)
        if locs.ndim == 1:
            locs = locs[:, None]
        reps = np.atleast_2d(np.asarray(self.replicates, dtype=float))
        if locs.ndim != 2 or locs.shape[1] not in (1, 2):
            raise DatasetError(f"locations must be (n, 1) or (n, 2), got shape {locs.shape}")
        if locs.shape[0] == 0:
            raise DatasetError("dataset has no locations")
        if reps.ndim != 2 or reps.shape[1] != locs.shape[0]:
            raise DatasetError(
                f"replicates must be (m, {locs.shape[0]}), got shape {reps.shape}"
            )
        if not (np.all(np.isfinite(locs)) and np.all(np.isfinite(reps))):
            raise DatasetError("dataset contains non-finite values")
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "replicates", reps)
        if locs.shape[0] > 1 and np.min(self.distances) <= 0.0:
            raise DatasetError("dataset has duplicate locations")

    @property
    def n(self) -> int:
        return self.locations.shape[0]

    @property
    def m(self) -> int:
        return self.replicates.shape[0]

    @property
    def dim(self) -> int:
        return self.locations.shape[1]

    @cached_property
    def distances(self) -> np.ndarray:
        """Condensed pairwise Euclidean distances."""
        return pdist(self.locations)

    def with_replicates(self, replicates: np.ndarray) -> "Dataset":
        return Dataset(self.locations, replicates)

    @classmethod
    def from_csv(cls, path: PathLike) -> "Dataset":
        from besselk_ad.utils.datasets import read_dataset_csv

        locations, replicates = read_dataset_csv(path)
        return cls(locations, replicates)

    def to_csv(self, path: PathLike) -> Path:
        from besselk_ad.utils.datasets import write_dataset_csv

        return write_dataset_csv(path, self.locations, self.replicates)


def grid_locations(side: int, dim: int = 2) -> np.ndarray:
    """side^dim points on a regular grid over [0, 1]^dim."""
    axis = np.linspace(0.0, 1.0, side)
    if dim == 1:
        return axis[:, None]
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([xx.ravel(), yy.ravel()])


class Level(str, Enum):
    VALUE = "value"
    GRAD = "grad"
    HESS = "hess"


@dataclass(eq=False)
class CovarianceBundle:
    sigma_mat: np.ndarray
    chol: np.ndarray
    d_mats: Optional[Tuple[np.ndarray, ...]] = None
    dd_mats: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)

    def dd(self, j: int, k: int) -> np.ndarray:
        return self.dd_mats[(j, k) if j <= k else (k, j)]

    @property
    def logdet(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol))))

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return cho_solve((self.chol, True), rhs)


def _from_condensed(values: np.ndarray, diagonal: float) -> np.ndarray:
    mat = squareform(values, checks=False) if values.size else np.zeros((1, 1))
    np.fill_diagonal(mat, diagonal)
    return mat


def factorize(sigma_mat: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(sigma_mat)):
        raise FactorizationError("covariance matrix has non-finite entries")
    try:
        return cholesky(sigma_mat, lower=True)
    except LinAlgError as exc:
        raise FactorizationError(f"covariance matrix is not positive definite: {exc}") from exc


def covariance_matrix(
    theta: MaternParams,
    dataset: Dataset,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    kernel: Optional[Kernel] = None,
) -> np.ndarray:
    """
    Sigma(theta) alone, without factorising it.

    ``kernel(theta, d)`` replaces the Matern covariance for off-diagonal
    entries; the diagonal is always sigma^2.
    """
    unique, inverse = np.unique(dataset.distances, return_inverse=True)
    if kernel is None:
        values = np.array([matern_cov(theta, float(d), cfg) for d in unique])
    else:
        values = np.array([float(kernel(theta, float(d))) for d in unique])
    return _from_condensed(values[inverse], theta.sigma * theta.sigma)


def assemble(
    theta: MaternParams,
    dataset: Dataset,
    level: Union[Level, str] = Level.VALUE,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> CovarianceBundle:
    """
    Sigma and, by ``level``, its first and second parameter derivatives.

    The kernel is evaluated once per distinct pairwise distance, which on
    regular grids is far fewer than n(n-1)/2.
    """
    level = Level(level)
    if level is Level.VALUE:
        sigma_mat = covariance_matrix(theta, dataset, cfg)
        return CovarianceBundle(sigma_mat, factorize(sigma_mat))

    unique, inverse = np.unique(dataset.distances, return_inverse=True)
    s2 = theta.sigma * theta.sigma
    k = unique.size
    values = np.empty(k)
    grads = np.empty((k, N_PARAMS))
    hessians = np.empty((k, N_PARAMS, N_PARAMS))
    for i, d in enumerate(unique):
        values[i], grads[i], hessians[i] = matern_cov_grad_hess(theta, float(d), cfg, fd_kernel)
    _, grad0, hess0 = matern_cov_grad_hess(theta, 0.0, cfg, fd_kernel)

    sigma_mat = _from_condensed(values[inverse], s2)
    chol = factorize(sigma_mat)
    d_mats = tuple(
        _from_condensed(grads[inverse, j], grad0[j]) for j in range(N_PARAMS)
    )
    dd_mats: Dict[Tuple[int, int], np.ndarray] = {}
    if level is Level.HESS:
        for j in range(N_PARAMS):
            for kk in range(j, N_PARAMS):
                dd_mats[(j, kk)] = _from_condensed(hessians[inverse, j, kk], hess0[j, kk])
    return CovarianceBundle(sigma_mat, chol, d_mats, dd_mats)


def _quadratic(bundle: CovarianceBundle, dataset: Dataset) -> float:
    y = solve_triangular(bundle.chol, dataset.replicates.T, lower=True)
    return float(np.sum(y * y))


def nll_from_bundle(bundle: CovarianceBundle, dataset: Dataset) -> float:
    return 0.5 * (dataset.m * bundle.logdet + _quadratic(bundle, dataset))


def grad_from_bundle(bundle: CovarianceBundle, dataset: Dataset) -> np.ndarray:
    # A holds Sigma^-1 z_r in its columns
    a = bundle.solve(dataset.replicates.T)
    grad = np.empty(N_PARAMS)
    for j, dj in enumerate(bundle.d_mats):
        trace = np.trace(bundle.solve(dj))
        grad[j] = 0.5 * (dataset.m * trace - float(np.sum(a * (dj @ a))))
    return grad


def nll(
    theta: MaternParams, dataset: Dataset, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> float:
    return nll_from_bundle(assemble(theta, dataset, Level.VALUE, cfg), dataset)


def nll_and_grad(
    theta: MaternParams,
    dataset: Dataset,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> Tuple[float, np.ndarray]:
    bundle = assemble(theta, dataset, Level.GRAD, cfg, fd_kernel)
    return nll_from_bundle(bundle, dataset), grad_from_bundle(bundle, dataset)


def nll_grad(
    theta: MaternParams,
    dataset: Dataset,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> np.ndarray:
    """-d log L / d theta_j = 1/2 [m tr(Sigma^-1 Sigma_j) - sum_r a_r' Sigma_j a_r]."""
    return nll_and_grad(theta, dataset, cfg, fd_kernel)[1]


def nll_hess_from_bundle(bundle: CovarianceBundle, dataset: Dataset) -> np.ndarray:
    m = dataset.m
    a = bundle.solve(dataset.replicates.T)
    w = [bundle.solve(dj) for dj in bundle.d_mats]
    v = [solve_triangular(bundle.chol, dj @ a, lower=True) for dj in bundle.d_mats]
    hess = np.empty((N_PARAMS, N_PARAMS))
    for j in range(N_PARAMS):
        for k in range(j, N_PARAMS):
            djk = bundle.dd(j, k)
            trace_term = -float(np.sum(w[k] * w[j].T)) + np.trace(bundle.solve(djk))
            quad_term = 2.0 * float(np.sum(v[j] * v[k])) - float(np.sum(a * (djk @ a)))
            hess[j, k] = 0.5 * (m * trace_term + quad_term)
            hess[k, j] = hess[j, k]
    return hess


def nll_hess(
    theta: MaternParams,
    dataset: Dataset,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> np.ndarray:
    """Observed information: the exact Hessian of ``nll``."""
    return nll_hess_from_bundle(assemble(theta, dataset, Level.HESS, cfg, fd_kernel), dataset)


def fisher_from_bundle(bundle: CovarianceBundle, dataset: Dataset) -> np.ndarray:
    w = [bundle.solve(dj) for dj in bundle.d_mats]
    info = np.empty((N_PARAMS, N_PARAMS))
    for j in range(N_PARAMS):
        for k in range(j, N_PARAMS):
            info[j, k] = 0.5 * dataset.m * float(np.sum(w[j] * w[k].T))
            info[k, j] = info[j, k]
    return info


def fisher_info(
    theta: MaternParams,
    dataset: Dataset,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> np.ndarray:
    """Expected information m/2 tr(Sigma^-1 Sigma_j Sigma^-1 Sigma_k)."""
    return fisher_from_bundle(assemble(theta, dataset, Level.GRAD, cfg, fd_kernel), dataset)


def _profile_parts(
    theta1: ProfileParams, dataset: Dataset, cfg: BranchConfig
) -> Tuple[float, float]:
    rho, nu = theta1
    bundle = assemble(MaternParams(1.0, rho, nu), dataset, Level.VALUE, cfg)
    sigma2 = _quadratic(bundle, dataset) / (dataset.n * dataset.m)
    return bundle.logdet, sigma2


def profile_sigma2(
    theta1: ProfileParams, dataset: Dataset, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> float:
    """Closed-form maximiser sigma^2 = (nm)^-1 sum_r z_r' Sigma_1^-1 z_r."""
    return _profile_parts(theta1, dataset, cfg)[1]


def profile_nll(
    theta1: ProfileParams, dataset: Dataset, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> float:
    """min over sigma of ``nll``, for theta1 = (rho, nu)."""
    logdet1, sigma2 = _profile_parts(theta1, dataset, cfg)
    nm = dataset.n * dataset.m
    return 0.5 * (dataset.m * logdet1 + nm * np.log(sigma2) + nm)


def profile_neg2loglik(
    theta1: ProfileParams, dataset: Dataset, cfg: BranchConfig = DEFAULT_BRANCH_CONFIG
) -> float:
    """m log|Sigma_1| + nm log sigma^2, i.e. 2 profile_nll - nm."""
    logdet1, sigma2 = _profile_parts(theta1, dataset, cfg)
    return dataset.m * logdet1 + dataset.n * dataset.m * float(np.log(sigma2))


def simulate(
    theta: MaternParams,
    locations: Sequence[Sequence[float]] | np.ndarray,
    m: int,
    seed: int,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
) -> Dataset:
    """m replicates z = L w with w standard normal; deterministic in ``seed``."""
    if m < 1:
        raise DatasetError(f"need at least one replicate, got m={m}")
    shell = Dataset(np.asarray(locations, dtype=float), np.zeros((1, len(locations))))
    bundle = assemble(theta, shell, Level.VALUE, cfg)
    rng = np.random.default_rng(seed)
    w = rng.standard_normal((m, shell.n))
    logger.debug("simulated %d replicates at %d locations (seed %d)", m, shell.n, seed)
    return shell.with_replicates(w @ bundle.chol.T)
