"""
fit-demo: six maximum-likelihood fits of one simulated Matern dataset.

The arms cross the source of nu-derivatives (AD through K_nu, or naive
finite differences of the kernel) with the curvature used by the optimizer
(BFGS, expected Fisher information, exact Hessian). A second CSV holds the
nu column of the NLL Hessian at the all-ones initializer and at every
arm's estimate, against adaptive second differences of the NLL itself.
"""

from __future__ import annotations

import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import click
import numpy as np

from besselk_ad.numerics.besselk import BranchConfig
from besselk_ad.numerics.likelihood import (
    Dataset,
    grid_locations,
    nll,
    nll_grad,
    nll_hess,
    simulate,
)
from besselk_ad.numerics.matern import NU, PARAM_NAMES, RHO, SIGMA, MaternParams
from besselk_ad.numerics.optimizer import (
    CurvatureMode,
    FitResult,
    OptimOptions,
    eta_gradient,
    fit,
)
from besselk_ad.oracle.finite_diff import adaptive_fd, adaptive_fd_partial
from besselk_ad.scripts.common import (
    banner,
    branch_config,
    config_option,
    done,
    out_option,
    section,
    show_settings,
    write_rows,
)

THETA_TRUE = (1.5, 2.5, 1.3)
INIT = MaternParams(1.0, 1.0, 1.0)

FIT_FIELDS = [
    "method",
    "converged",
    "iterations",
    "nll",
    "grad_norm",
    "true_grad_norm",
    "sigma",
    "rho",
    "nu",
    "elapsed_s",
]
HESSIAN_FIELDS = [
    "point",
    "sigma",
    "rho",
    "nu",
    "entry",
    "ad",
    "fd",
    "reference",
    "ad_rel_err",
    "fd_rel_err",
]

ARMS: Tuple[Tuple[str, bool, CurvatureMode], ...] = tuple(
    (f"{source} ({mode.value})", source == "FD", mode)
    for source in ("AD", "FD")
    for mode in (CurvatureMode.BFGS, CurvatureMode.FISHER, CurvatureMode.HESSIAN)
)


def demo_locations(n: int, seed: int) -> np.ndarray:
    """A regular grid when n is a perfect square, else seeded uniform points."""
    side = math.isqrt(n)
    if side * side == n:
        return grid_locations(side)
    return np.random.default_rng(seed).uniform(size=(n, 2))


def demo_dataset(
    n: int, m: int, seed: int, theta_true: MaternParams, cfg: BranchConfig
) -> Dataset:
    return simulate(theta_true, demo_locations(n, seed), m, seed, cfg)


def true_grad_norm(theta: MaternParams, dataset: Dataset, cfg: BranchConfig) -> float:
    """Largest eta-space gradient component with AD kernel derivatives."""
    values = theta.as_array()
    g = nll_grad(theta, dataset, cfg, fd_kernel=False)
    return float(np.max(np.abs(eta_gradient(values, g))))


def run_arms(
    dataset: Dataset, cfg: BranchConfig, max_iters: int = 100
) -> List[Tuple[str, FitResult, float]]:
    """Sequential fits; each is timed on its own."""
    results = []
    for label, use_fd, mode in ARMS:
        opts = OptimOptions(mode=mode, max_iters=max_iters, init=INIT, fd_kernel=use_fd)
        t0 = time.perf_counter()
        result = fit(dataset, opts, cfg)
        results.append((label, result, time.perf_counter() - t0))
    return results


def fit_rows(
    results: List[Tuple[str, FitResult, float]], dataset: Dataset, cfg: BranchConfig
) -> List[Dict[str, object]]:
    rows = []
    for label, result, elapsed in results:
        theta = result.theta_hat
        rows.append(
            {
                "method": label,
                "converged": result.converged,
                "iterations": result.iterations,
                "nll": result.nll,
                "grad_norm": result.grad_norm,
                "true_grad_norm": true_grad_norm(theta, dataset, cfg),
                "sigma": theta.sigma,
                "rho": theta.rho,
                "nu": theta.nu,
                "elapsed_s": elapsed,
            }
        )
    return rows


def reference_nu_column(
    theta: MaternParams, dataset: Dataset, cfg: BranchConfig
) -> np.ndarray:
    """
    Second nu-derivatives of ``nll`` by adaptive differences of the NLL value.

    The diagonal entry differences along nu; mixed entries use

        d2f/da db = (D2_(a+b) f - D2_(a-b) f) / 4

    with D2_u the second directional difference along u.
    """
    base = theta.as_array()
    h0 = 0.05 * float(base.min())

    def nll_at(point: np.ndarray) -> float:
        return nll(MaternParams.from_array(point), dataset, cfg)

    def along(direction: np.ndarray) -> float:
        return float(adaptive_fd(lambda t: nll_at(base + t * direction), 0.0, 2, h0=h0))

    column = np.empty(len(PARAM_NAMES))
    column[NU] = adaptive_fd_partial(nll_at, base, NU, 2, h0=h0)
    unit = np.eye(len(PARAM_NAMES))
    for j in (SIGMA, RHO):
        column[j] = 0.25 * (along(unit[j] + unit[NU]) - along(unit[j] - unit[NU]))
    return column


def hessian_column_rows(
    points: List[Tuple[str, MaternParams]], dataset: Dataset, cfg: BranchConfig
) -> List[Dict[str, object]]:
    rows = []
    for point, theta in points:
        ad = nll_hess(theta, dataset, cfg, fd_kernel=False)[:, NU]
        fd = nll_hess(theta, dataset, cfg, fd_kernel=True)[:, NU]
        ref = reference_nu_column(theta, dataset, cfg)
        for j, name in enumerate(PARAM_NAMES):
            scale = abs(ref[j]) if ref[j] != 0.0 else math.nan
            rows.append(
                {
                    "point": point,
                    "sigma": theta.sigma,
                    "rho": theta.rho,
                    "nu": theta.nu,
                    "entry": f"{name},nu",
                    "ad": ad[j],
                    "fd": fd[j],
                    "reference": ref[j],
                    "ad_rel_err": abs(ad[j] - ref[j]) / scale,
                    "fd_rel_err": abs(fd[j] - ref[j]) / scale,
                }
            )
    return rows


def hessian_columns_path(out_path: Path) -> Path:
    return out_path.with_name(f"{out_path.stem}_hessian_columns.csv")


@click.command("fit-demo")
@click.option("--n", "n", type=click.IntRange(min=2), default=256, show_default=True)
@click.option("--m", "m", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--seed", type=int, default=2024, show_default=True)
@click.option(
    "--theta",
    "theta_true",
    type=(float, float, float),
    default=THETA_TRUE,
    show_default=True,
    help="True (sigma, rho, nu) for the simulation.",
)
@click.option("--max-iters", type=click.IntRange(min=1), default=100, show_default=True)
@out_option("fit_demo.csv")
@config_option
def fit_demo(
    n: int,
    m: int,
    seed: int,
    theta_true: Tuple[float, float, float],
    max_iters: int,
    out_path: Path,
    config_path: Optional[Path],
) -> None:
    """AD and FD kernels crossed with BFGS, Fisher and Hessian curvature."""
    cfg = branch_config(config_path)
    truth = MaternParams(*theta_true)
    banner("📈 Matern maximum-likelihood fit demo")
    show_settings(
        {
            "locations": n,
            "replicates": m,
            "seed": seed,
            "true theta": theta_true,
            "init": (INIT.sigma, INIT.rho, INIT.nu),
            "max iterations": max_iters,
        }
    )

    dataset = demo_dataset(n, m, seed, truth, cfg)
    results = run_arms(dataset, cfg, max_iters)
    rows = fit_rows(results, dataset, cfg)
    write_rows(out_path, FIT_FIELDS, rows)

    section("📊 Fits")
    for row in rows:
        mark = "✅" if row["converged"] else "❌"
        print(
            f"   {mark} {row['method']:<15} iters={row['iterations']:<4} "
            f"nll={row['nll']:.8f} theta=({row['sigma']:.4f}, {row['rho']:.4f}, "
            f"{row['nu']:.4f})"
        )

    points = [("init", INIT)] + [(label, result.theta_hat) for label, result, _ in results]
    columns_path = hessian_columns_path(out_path)
    write_rows(columns_path, HESSIAN_FIELDS, hessian_column_rows(points, dataset, cfg))
    print(f"\n   Hessian columns: {columns_path}")
    done("Fit demo", out_path)
