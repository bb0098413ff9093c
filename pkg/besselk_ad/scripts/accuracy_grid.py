"""
accuracy-grid: K_nu(x) and its order derivatives against a reference on a
dense (nu, x) grid.

Every node gets the double-precision value, the Dual2 derivatives and
naive finite differences (h = 1e-6) of the same function, each compared
with the mpmath oracle. ``--no-oracle`` swaps the derivative reference for
the adaptive tenth-order stencil and leaves the value reference empty.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import asdict, dataclass, fields
from multiprocessing import Pool
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import click
import numpy as np

from besselk_ad.numerics.besselk import BranchConfig, besselk, besselk_with_branch
from besselk_ad.numerics.dual import seed
from besselk_ad.numerics.errors import ConfigError
from besselk_ad.oracle.finite_diff import adaptive_fd, naive_fd
from besselk_ad.oracle.quadrature import (
    DEFAULT_DIGITS,
    oracle_besselk,
    oracle_dnu_besselk,
)
from besselk_ad.scripts.common import (
    banner,
    branch_config,
    config_option,
    done,
    out_option,
    show_settings,
    write_rows,
)
from besselk_ad.utils.config import max_workers

NAIVE_STEP = 1e-6
_TINY = float(np.finfo(float).tiny)


@dataclass(frozen=True)
class GridSpec:
    nu_lo: float = 0.25
    nu_hi: float = 10.0
    x_lo: float = 0.005
    x_hi: float = 30.0
    nu_steps: int = 100
    x_steps: int = 100

    def __post_init__(self) -> None:
        if not self.nu_lo < self.nu_hi:
            raise ConfigError(f"nu range must be increasing, got [{self.nu_lo}, {self.nu_hi}]")
        if not 0.0 < self.x_lo < self.x_hi:
            raise ConfigError(f"x range must satisfy 0 < lo < hi, got [{self.x_lo}, {self.x_hi}]")
        if self.nu_steps < 2 or self.x_steps < 2:
            raise ConfigError("grid needs at least 2 steps per axis")

    def nodes(self) -> Iterator[Tuple[float, float]]:
        """nu-major: every x for the first nu, then the next nu."""
        nus = np.linspace(self.nu_lo, self.nu_hi, self.nu_steps)
        xs = np.linspace(self.x_lo, self.x_hi, self.x_steps)
        for nu in nus:
            for x in xs:
                yield float(nu), float(x)

    @property
    def size(self) -> int:
        return self.nu_steps * self.x_steps


@dataclass
class AccuracyRecord:
    nu: float
    x: float
    branch: str
    value: float
    ref: float
    abs_err: float
    rel_err: float
    d1: float
    d1_ref: float
    d1_fd: float
    d2: float
    d2_ref: float
    d2_fd: float
    digit_gain_d1: float
    digit_gain_d2: float


ACCURACY_FIELDS = [f.name for f in fields(AccuracyRecord)]


def digit_gain(ad: float, fd: float, ref: float) -> float:
    """log10|ad - ref| - log10|fd - ref|; negative means AD is closer."""
    return math.log10(max(abs(ad - ref), _TINY)) - math.log10(max(abs(fd - ref), _TINY))


def _references(
    nu: float, x: float, cfg: BranchConfig, use_oracle: bool, digits: int
) -> Tuple[float, float, float]:
    if use_oracle:
        return (
            float(oracle_besselk(nu, x, digits)),
            float(oracle_dnu_besselk(nu, x, 1, digits)),
            float(oracle_dnu_besselk(nu, x, 2, digits)),
        )

    def k_of(v: float) -> float:
        return besselk(v, x, cfg)

    return math.nan, float(adaptive_fd(k_of, nu, 1)), float(adaptive_fd(k_of, nu, 2))


def accuracy_row(
    node: Tuple[float, float],
    cfg: BranchConfig,
    use_oracle: bool = True,
    digits: int = DEFAULT_DIGITS,
) -> AccuracyRecord:
    nu, x = node
    dual, tag = besselk_with_branch(seed(nu), x, cfg)
    val, d1, d2 = dual.as_tuple()

    def k_of(v: float) -> float:
        return besselk(v, x, cfg)

    d1_fd = naive_fd(k_of, nu, NAIVE_STEP, 1)
    d2_fd = naive_fd(k_of, nu, NAIVE_STEP, 2)
    ref, d1_ref, d2_ref = _references(nu, x, cfg, use_oracle, digits)
    abs_err = abs(val - ref)
    return AccuracyRecord(
        nu=nu,
        x=x,
        branch=tag.value,
        value=val,
        ref=ref,
        abs_err=abs_err,
        rel_err=abs_err / abs(ref) if ref else math.nan,
        d1=d1,
        d1_ref=d1_ref,
        d1_fd=d1_fd,
        d2=d2,
        d2_ref=d2_ref,
        d2_fd=d2_fd,
        digit_gain_d1=digit_gain(d1, d1_fd, d1_ref),
        digit_gain_d2=digit_gain(d2, d2_fd, d2_ref),
    )


def run_accuracy_grid(
    spec: GridSpec,
    cfg: BranchConfig,
    use_oracle: bool = True,
    digits: int = DEFAULT_DIGITS,
    workers: Optional[int] = None,
) -> List[AccuracyRecord]:
    """Rows in grid order; worker processes only change the wall time."""
    worker = functools.partial(accuracy_row, cfg=cfg, use_oracle=use_oracle, digits=digits)
    nodes = list(spec.nodes())
    workers = max_workers() if workers is None else max(1, workers)
    if workers == 1:
        return [worker(node) for node in nodes]
    chunk = max(1, len(nodes) // (4 * workers))
    with Pool(processes=workers) as pool:
        return pool.map(worker, nodes, chunksize=chunk)


def summarize(records: List[AccuracyRecord]) -> dict:
    rel = np.array([r.rel_err for r in records])
    gains1 = np.array([r.digit_gain_d1 for r in records])
    gains2 = np.array([r.digit_gain_d2 for r in records])
    finite_rel = rel[np.isfinite(rel)]
    return {
        "median_rel_err": float(np.median(finite_rel)) if finite_rel.size else math.nan,
        "max_rel_err": float(np.max(finite_rel)) if finite_rel.size else math.nan,
        "median_digit_gain_d1": float(np.median(gains1)),
        "median_digit_gain_d2": float(np.median(gains2)),
        "ad_beats_fd_d1": float(np.mean(gains1 < 0.0)),
    }


@click.command("accuracy-grid")
@click.option("--nu-lo", type=float, default=0.25, show_default=True)
@click.option("--nu-hi", type=float, default=10.0, show_default=True)
@click.option("--x-lo", type=float, default=0.005, show_default=True)
@click.option("--x-hi", type=float, default=30.0, show_default=True)
@click.option(
    "--steps", type=int, default=100, show_default=True, help="Grid points per axis."
)
@click.option(
    "--digits",
    type=int,
    default=DEFAULT_DIGITS,
    show_default=True,
    help="Working digits of the mpmath reference.",
)
@click.option(
    "--no-oracle",
    is_flag=True,
    help="Use the adaptive finite-difference reference instead of mpmath.",
)
@out_option("accuracy_grid.csv")
@config_option
def accuracy_grid(
    nu_lo: float,
    nu_hi: float,
    x_lo: float,
    x_hi: float,
    steps: int,
    digits: int,
    no_oracle: bool,
    out_path: Path,
    config_path: Optional[Path],
) -> None:
    """Value, d1 and d2 errors with digit gain over naive finite differences."""
    spec = GridSpec(nu_lo, nu_hi, x_lo, x_hi, steps, steps)
    cfg = branch_config(config_path)
    banner("🔬 K_nu accuracy grid")
    show_settings(
        {
            "nu range": f"[{nu_lo}, {nu_hi}]",
            "x range": f"[{x_lo}, {x_hi}]",
            "grid": f"{steps} x {steps}",
            "reference": "adaptive FD" if no_oracle else f"mpmath ({digits} digits)",
            "workers": max_workers(),
        }
    )

    t0 = time.perf_counter()
    records = run_accuracy_grid(spec, cfg, use_oracle=not no_oracle, digits=digits)
    write_rows(out_path, ACCURACY_FIELDS, (asdict(r) for r in records))

    stats = summarize(records)
    print(f"\n   Rows: {len(records)} in {time.perf_counter() - t0:.1f} s")
    if not no_oracle:
        print(f"   Median relative error: {stats['median_rel_err']:.3e}")
        print(f"   Max relative error: {stats['max_rel_err']:.3e}")
    # digit gain is negative where AD is closer to the reference
    print(f"   Median digit gain d1: {stats['median_digit_gain_d1']:.2f}")
    print(f"   Median digit gain d2: {stats['median_digit_gain_d2']:.2f}")
    print(f"   AD closer than FD (d1): {100 * stats['ad_beats_fd_d1']:.1f}% of nodes")
    done("Accuracy grid", out_path)
