"""
Second-order maximum likelihood for Matern parameters.

The search runs over eta = log(theta) so positivity never needs a bound.
Each iteration takes the curvature selected by ``mode`` (exact Hessian,
expected Fisher information or a damped BFGS approximation), shifts it by
tau*I until a Cholesky factorisation succeeds, and backtracks along the
resulting direction until a trial point lowers nll and meets the Armijo
condition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from besselk_ad.numerics.besselk import DEFAULT_BRANCH_CONFIG, BranchConfig
from besselk_ad.numerics.errors import BesselError, ConfigError
from besselk_ad.numerics.likelihood import (
    Dataset,
    Level,
    assemble,
    fisher_from_bundle,
    grad_from_bundle,
    nll,
    nll_from_bundle,
    nll_hess_from_bundle,
)
from besselk_ad.numerics.matern import PARAM_NAMES, MaternParams

logger = logging.getLogger(__name__)

ARMIJO_C = 1e-4
MAX_BACKTRACKS = 40
MAX_SHIFT_DOUBLINGS = 200
# log-parameters past this are rejected as trial points
MAX_ABS_ETA = 50.0


class CurvatureMode(str, Enum):
    HESSIAN = "Hessian"
    FISHER = "Fisher"
    BFGS = "BFGS"


@dataclass(frozen=True)
class OptimOptions:
    mode: CurvatureMode = CurvatureMode.HESSIAN
    max_iters: int = 100
    grad_tol: float = 1e-8
    init: MaternParams = field(default_factory=lambda: MaternParams(1.0, 1.0, 1.0))
    ridge0: float = 1e-8
    fixed: FrozenSet[str] = frozenset()
    fd_kernel: Optional[bool] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", CurvatureMode(self.mode))
        object.__setattr__(self, "fixed", frozenset(self.fixed))
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.grad_tol > 0.0:
            raise ConfigError(f"grad_tol must be positive, got {self.grad_tol}")
        if not self.ridge0 > 0.0:
            raise ConfigError(f"ridge0 must be positive, got {self.ridge0}")
        unknown = self.fixed - set(PARAM_NAMES)
        if unknown:
            raise ConfigError(f"unknown fixed parameters: {', '.join(sorted(unknown))}")
        if len(self.fixed) == len(PARAM_NAMES):
            raise ConfigError("at least one parameter must be free")


@dataclass
class FitResult:
    theta_hat: MaternParams
    iterations: int
    converged: bool
    nll: float
    mode: CurvatureMode
    grad_norm: float
    history: List[float] = field(default_factory=list)


def eta_gradient(theta: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """d nll / d eta for eta = log(theta)."""
    return grad * theta


def eta_hessian(theta: np.ndarray, grad: np.ndarray, hess: np.ndarray) -> np.ndarray:
    """D H D + diag(g * theta) with D = diag(theta)."""
    return theta[:, None] * hess * theta[None, :] + np.diag(grad * theta)


def eta_fisher(theta: np.ndarray, info: np.ndarray) -> np.ndarray:
    return theta[:, None] * info * theta[None, :]


@dataclass
class _State:
    eta: np.ndarray
    nll: float
    grad: np.ndarray
    curvature: Optional[np.ndarray]


Evaluator = Callable[[np.ndarray], _State]


def _evaluator(
    dataset: Dataset, mode: CurvatureMode, cfg: BranchConfig, fd_kernel: Optional[bool]
) -> Evaluator:
    level = Level.HESS if mode is CurvatureMode.HESSIAN else Level.GRAD

    def evaluate(eta: np.ndarray) -> _State:
        theta = np.exp(eta)
        bundle = assemble(MaternParams.from_array(theta), dataset, level, cfg, fd_kernel)
        value = nll_from_bundle(bundle, dataset)
        grad = grad_from_bundle(bundle, dataset)
        if mode is CurvatureMode.HESSIAN:
            curvature = eta_hessian(theta, grad, nll_hess_from_bundle(bundle, dataset))
        elif mode is CurvatureMode.FISHER:
            curvature = eta_fisher(theta, fisher_from_bundle(bundle, dataset))
        else:
            curvature = None
        return _State(eta, value, eta_gradient(theta, grad), curvature)

    return evaluate


def shifted_direction(
    curvature: np.ndarray, grad: np.ndarray, ridge0: float
) -> Tuple[np.ndarray, float]:
    """Solve (B + tau I) p = -g with the smallest tau in {0, ridge0 * 2^k} that factorises."""
    eye = np.eye(curvature.shape[0])
    tau = 0.0
    for _ in range(MAX_SHIFT_DOUBLINGS):
        try:
            factor = cho_factor(curvature + tau * eye, lower=True)
        except LinAlgError:
            tau = ridge0 if tau == 0.0 else 2.0 * tau
            continue
        return -cho_solve(factor, grad), tau
    raise LinAlgError(f"curvature could not be shifted to positive definite (tau={tau:.3g})")


def damped_bfgs_update(b: np.ndarray, s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Powell-damped BFGS update; keeps b positive definite."""
    bs = b @ s
    sbs = float(s @ bs)
    sy = float(s @ y)
    if sbs <= 0.0:
        return b
    weight = 1.0 if sy >= 0.2 * sbs else 0.8 * sbs / (sbs - sy)
    r = weight * y + (1.0 - weight) * bs
    return b - np.outer(bs, bs) / sbs + np.outer(r, r) / float(s @ r)


def _trial_nll(eta: np.ndarray, dataset: Dataset, cfg: BranchConfig) -> float:
    """nll at a line-search point; anything unevaluable counts as +inf."""
    if np.any(np.abs(eta) > MAX_ABS_ETA):
        return np.inf
    try:
        value = nll(MaternParams.from_array(np.exp(eta)), dataset, cfg)
    except (BesselError, ArithmeticError) as exc:
        logger.debug("trial point %s rejected: %s", np.exp(eta), exc)
        return np.inf
    return value if np.isfinite(value) else np.inf


def fit(
    dataset: Dataset,
    opts: OptimOptions = OptimOptions(),
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
) -> FitResult:
    """
    Minimise ``nll`` from ``opts.init``.

    Convergence means the largest free component of the eta-space gradient is
    at most ``grad_tol``. Hitting ``max_iters`` or a failed line search
    returns the last accepted point with ``converged=False``.
    """
    free = np.array([name not in opts.fixed for name in PARAM_NAMES])
    evaluate = _evaluator(dataset, opts.mode, cfg, opts.fd_kernel)
    state = evaluate(np.log(opts.init.as_array()))
    history = [state.nll]
    bfgs = np.eye(int(free.sum()))
    iterations = 0
    converged = False

    while True:
        g = state.grad[free]
        grad_norm = float(np.max(np.abs(g)))
        if grad_norm <= opts.grad_tol:
            converged = True
            break
        if iterations >= opts.max_iters:
            break

        if opts.mode is CurvatureMode.BFGS:
            curvature = bfgs
        else:
            curvature = state.curvature[np.ix_(free, free)]
        try:
            direction, tau = shifted_direction(curvature, g, opts.ridge0)
        except LinAlgError as exc:
            logger.info("stopping: %s", exc)
            break
        slope = float(g @ direction)

        step = 1.0
        accepted = None
        for _ in range(MAX_BACKTRACKS):
            trial = state.eta.copy()
            trial[free] += step * direction
            f_trial = _trial_nll(trial, dataset, cfg)
            if f_trial < state.nll and f_trial <= state.nll + ARMIJO_C * step * slope:
                accepted = trial
                break
            step *= 0.5
        if accepted is None:
            logger.info("stopping: line search failed at iteration %d", iterations + 1)
            break

        try:
            new_state = evaluate(accepted)
        except (BesselError, ArithmeticError) as exc:
            logger.info("stopping: derivatives failed at accepted point: %s", exc)
            break
        if opts.mode is CurvatureMode.BFGS:
            bfgs = damped_bfgs_update(
                bfgs, new_state.eta[free] - state.eta[free], new_state.grad[free] - g
            )
        state = new_state
        iterations += 1
        history.append(state.nll)
        logger.debug(
            "iter %d: nll=%.12g |g|=%.3e step=%.3g shift=%.3g theta=%s",
            iterations,
            state.nll,
            float(np.max(np.abs(state.grad[free]))),
            step,
            tau,
            np.exp(state.eta),
        )

    result = FitResult(
        theta_hat=MaternParams.from_array(np.exp(state.eta)),
        iterations=iterations,
        converged=converged,
        nll=state.nll,
        mode=opts.mode,
        grad_norm=float(np.max(np.abs(state.grad[free]))),
        history=history,
    )
    logger.info(
        "%s fit %s after %d iterations: nll=%.12g |g|=%.3e",
        opts.mode.value,
        "converged" if converged else "stopped",
        iterations,
        result.nll,
        result.grad_norm,
    )
    return result


def observed_curvature(
    result: FitResult,
    dataset: Dataset,
    cfg: BranchConfig = DEFAULT_BRANCH_CONFIG,
    fd_kernel: Optional[bool] = None,
) -> np.ndarray:
    """Unshifted eta-space Hessian of ``nll`` at ``result.theta_hat``."""
    return _evaluator(dataset, CurvatureMode.HESSIAN, cfg, fd_kernel)(
        np.log(result.theta_hat.as_array())
    ).curvature
