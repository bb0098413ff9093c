"""
covmat-diag: conditioning of Matern covariance matrices on a regular grid.

For each (rho, nu) the unit-variance covariance over a side x side grid on
[0, 1]^2 is assembled and timed, then checked by a dense symmetric
eigensolve and a Cholesky log-determinant. A failed factorisation is
written as NaN with status ``cholesky_failed``.
"""

from __future__ import annotations

import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import click
import numpy as np
from scipy.linalg import eigvalsh

from besselk_ad.numerics.besselk import BranchConfig
from besselk_ad.numerics.errors import FactorizationError
from besselk_ad.numerics.likelihood import (
    Dataset,
    covariance_matrix,
    factorize,
    grid_locations,
)
from besselk_ad.numerics.matern import MaternParams
from besselk_ad.oracle.quadrature import oracle_matern_cov
from besselk_ad.scripts.common import (
    banner,
    branch_config,
    config_option,
    done,
    float_list,
    out_option,
    section,
    show_settings,
    write_rows,
)

DEFAULT_RHOS = (0.01, 1.0, 100.0)
DEFAULT_NUS = (0.4, 1.25, 3.5)
DEFAULT_SIDE = 24
ORACLE_DIGITS = 30

COVMAT_FIELDS = [
    "rho",
    "nu",
    "n",
    "assembly_s",
    "lambda_min",
    "logdet",
    "status",
]
ORACLE_FIELDS = [
    "oracle_lambda_min",
    "oracle_logdet",
    "oracle_status",
    "lambda_min_rel_diff",
    "logdet_rel_diff",
]


def _logdet(sigma_mat: np.ndarray) -> tuple[float, str]:
    try:
        chol = factorize(sigma_mat)
    except FactorizationError:
        return math.nan, "cholesky_failed"
    return 2.0 * float(np.sum(np.log(np.diag(chol)))), "ok"


def _rel_diff(a: float, b: float) -> float:
    if not (math.isfinite(a) and math.isfinite(b)):
        return math.nan
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def _oracle_kernel(digits: int):
    def kernel(theta: MaternParams, d: float) -> float:
        return float(oracle_matern_cov(theta, d, digits))

    return kernel


def diagnose(
    rho: float,
    nu: float,
    shell: Dataset,
    cfg: BranchConfig,
    with_oracle: bool = False,
    digits: int = ORACLE_DIGITS,
) -> Dict[str, object]:
    theta = MaternParams(1.0, rho, nu)
    t0 = time.perf_counter()
    sigma_mat = covariance_matrix(theta, shell, cfg)
    assembly_s = time.perf_counter() - t0

    lambda_min = float(eigvalsh(sigma_mat, subset_by_index=[0, 0])[0])
    logdet, status = _logdet(sigma_mat)
    row: Dict[str, object] = {
        "rho": rho,
        "nu": nu,
        "n": shell.n,
        "assembly_s": assembly_s,
        "lambda_min": lambda_min,
        "logdet": logdet,
        "status": status,
    }
    if with_oracle:
        ref = covariance_matrix(theta, shell, cfg, kernel=_oracle_kernel(digits))
        ref_lambda = float(eigvalsh(ref, subset_by_index=[0, 0])[0])
        ref_logdet, ref_status = _logdet(ref)
        row.update(
            {
                "oracle_lambda_min": ref_lambda,
                "oracle_logdet": ref_logdet,
                "oracle_status": ref_status,
                "lambda_min_rel_diff": _rel_diff(lambda_min, ref_lambda),
                "logdet_rel_diff": _rel_diff(logdet, ref_logdet),
            }
        )
    return row


def run_covmat_diag(
    rhos: Sequence[float],
    nus: Sequence[float],
    cfg: BranchConfig,
    side: int = DEFAULT_SIDE,
    with_oracle: bool = False,
    digits: int = ORACLE_DIGITS,
) -> List[Dict[str, object]]:
    locations = grid_locations(side)
    shell = Dataset(locations, np.zeros((1, len(locations))))
    return [
        diagnose(rho, nu, shell, cfg, with_oracle, digits) for rho in rhos for nu in nus
    ]


@click.command("covmat-diag")
@click.option(
    "--rho",
    "rho_text",
    default=",".join(str(r) for r in DEFAULT_RHOS),
    show_default=True,
    help="Comma-separated range parameters.",
)
@click.option(
    "--nu",
    "nu_text",
    default=",".join(str(v) for v in DEFAULT_NUS),
    show_default=True,
    help="Comma-separated smoothness parameters.",
)
@click.option(
    "--side",
    type=click.IntRange(min=2),
    default=DEFAULT_SIDE,
    show_default=True,
    help="Grid points per axis on [0, 1]^2.",
)
@click.option(
    "--oracle",
    "with_oracle",
    is_flag=True,
    help="Also build each matrix from the mpmath kernel and compare.",
)
@click.option("--digits", type=int, default=ORACLE_DIGITS, show_default=True)
@out_option("covmat_diag.csv")
@config_option
def covmat_diag(
    rho_text: str,
    nu_text: str,
    side: int,
    with_oracle: bool,
    digits: int,
    out_path: Path,
    config_path: Optional[Path],
) -> None:
    """Assembly time, smallest eigenvalue and log-determinant per (rho, nu)."""
    rhos, nus = float_list(rho_text), float_list(nu_text)
    cfg = branch_config(config_path)
    banner("🧮 Covariance matrix diagnostics")
    show_settings(
        {
            "rho": rhos,
            "nu": nus,
            "grid": f"{side} x {side} on [0, 1]^2",
            "oracle": f"mpmath ({digits} digits)" if with_oracle else "off",
        }
    )

    rows = run_covmat_diag(rhos, nus, cfg, side, with_oracle, digits)
    write_rows(out_path, COVMAT_FIELDS + (ORACLE_FIELDS if with_oracle else []), rows)

    section("📊 Results")
    for row in rows:
        print(
            f"   rho={row['rho']:<8g} nu={row['nu']:<6g} "
            f"lambda_min={row['lambda_min']:.2e} logdet={row['logdet']:.2e} "
            f"({row['assembly_s']:.3f} s, {row['status']})"
        )
    done("Covariance diagnostics", out_path)
