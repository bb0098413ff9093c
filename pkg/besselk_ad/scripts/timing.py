"""
timing: cost of K_nu and its order derivatives, AD against finite differences.

The finite-difference arms call the same double-precision K_nu two or three
times per derivative, so the comparison isolates the cost of carrying
derivative slots.
"""

from __future__ import annotations

import statistics
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import click

from besselk_ad.numerics.besselk import BranchConfig, besselk, select_branch
from besselk_ad.numerics.dual import seed
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
from besselk_ad.utils.system_metrics import SystemMonitor

TIMING_PAIRS: Tuple[Tuple[float, float], ...] = (
    (0.5, 1.0),
    (1.0, 1.0),
    (3.001, 1.0),
    (3.001, 8.0),
    (1.85, 1.0),
    (1.85, 8.0),
    (1.85, 14.0),
    (1.85, 29.0),
    (1.85, 35.0),
)
BATCHES = 5
FD_STEP = 1e-6

ARMS = ("value", "d1_ad", "d1_fd", "d2_ad", "d2_fd")

TIMING_FIELDS = [
    "nu",
    "x",
    "branch",
    "case",
    "inner",
    *(f"{arm}_ns" for arm in ARMS),
    "d1_speedup",
    "d2_speedup",
    "cpu_usage_percent",
    "memory_usage_mb",
    "peak_rss_mb",
]


def _arms(nu: float, x: float, cfg: BranchConfig) -> Dict[str, Callable[[], object]]:
    h = FD_STEP

    def value() -> object:
        return besselk(nu, x, cfg)

    def d1_ad() -> object:
        return besselk(seed(nu), x, cfg).d1

    def d1_fd() -> object:
        return (besselk(nu + h, x, cfg) - besselk(nu, x, cfg)) / h

    def d2_ad() -> object:
        return besselk(seed(nu), x, cfg).d2

    def d2_fd() -> object:
        return (
            besselk(nu + h, x, cfg) - 2.0 * besselk(nu, x, cfg) + besselk(nu - h, x, cfg)
        ) / (h * h)

    return {
        "value": value,
        "d1_ad": d1_ad,
        "d1_fd": d1_fd,
        "d2_ad": d2_ad,
        "d2_fd": d2_fd,
    }


def median_call_ns(fn: Callable[[], object], inner: int, batches: int = BATCHES) -> float:
    """Median over ``batches`` of the mean per-call time, after one warmup batch."""
    for _ in range(min(inner, 1000)):
        fn()
    per_call: List[float] = []
    for _ in range(batches):
        t0 = time.perf_counter_ns()
        for _ in range(inner):
            fn()
        per_call.append((time.perf_counter_ns() - t0) / inner)
    return statistics.median(per_call)


def time_pair(nu: float, x: float, cfg: BranchConfig, inner: int) -> Dict[str, object]:
    tag = select_branch(nu, x, True, cfg)
    row: Dict[str, object] = {
        "nu": nu,
        "x": x,
        "branch": tag.value,
        "case": tag.describe(),
        "inner": inner,
    }
    for name, fn in _arms(nu, x, cfg).items():
        row[f"{name}_ns"] = median_call_ns(fn, inner)
    row["d1_speedup"] = row["d1_fd_ns"] / row["d1_ad_ns"]
    row["d2_speedup"] = row["d2_fd_ns"] / row["d2_ad_ns"]
    return row


def run_timing(
    cfg: BranchConfig,
    inner: int,
    pairs: Sequence[Tuple[float, float]] = TIMING_PAIRS,
) -> List[Dict[str, object]]:
    rows: List[Dict[str, object]] = []
    for nu, x in pairs:
        mon = SystemMonitor()
        mon.start()
        row = time_pair(nu, x, cfg, inner)
        mon.sample()
        mon.stop()
        row.update(mon.get_averages())
        rows.append(row)
    return rows


@click.command("timing")
@click.option(
    "--inner",
    type=click.IntRange(min=1),
    default=100_000,
    show_default=True,
    help="Calls per timed batch.",
)
@out_option("timing.csv")
@config_option
def timing(inner: int, out_path: Path, config_path: Optional[Path]) -> None:
    """Per-call wall time of value, d1 and d2 by AD and by finite differences."""
    cfg = branch_config(config_path)
    banner("⏱️  K_nu timing")
    show_settings({"pairs": len(TIMING_PAIRS), "inner calls": inner, "batches": BATCHES})

    rows = run_timing(cfg, inner)
    write_rows(out_path, TIMING_FIELDS, rows)

    section("📊 Median ns per call")
    print(
        f"   {'(nu, x)':<16}{'branch':<16}{'value':>10}{'d1 AD':>10}{'d1 FD':>10}"
        f"{'d2 AD':>10}{'d2 FD':>10}"
    )
    for row in rows:
        pair = f"({row['nu']}, {row['x']:g})"
        print(
            f"   {pair:<16}{row['branch']:<16}{row['value_ns']:>10.0f}"
            f"{row['d1_ad_ns']:>10.0f}{row['d1_fd_ns']:>10.0f}"
            f"{row['d2_ad_ns']:>10.0f}{row['d2_fd_ns']:>10.0f}"
        )
    done("Timing", out_path)
