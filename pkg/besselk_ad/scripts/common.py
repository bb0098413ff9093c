"""Shared pieces of the diagnostics subcommands: banners, CSV output, options."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

import click

from besselk_ad.numerics.besselk import BranchConfig
from besselk_ad.utils.config import load_branch_config
from besselk_ad.utils.datasets import FLOAT_FORMAT

RULE = "=" * 70
SUBRULE = "-" * 70


def banner(title: str) -> None:
    print("\n" + RULE)
    print(title)
    print(RULE)


def section(title: str) -> None:
    print("\n" + title)
    print(SUBRULE)


def show_settings(settings: Mapping[str, Any]) -> None:
    print("\n📋 Configuration:")
    for key, val in settings.items():
        print(f"   {key}: {val}")


def done(title: str, out: Optional[Path] = None) -> None:
    print("\n" + RULE)
    print(f"✅ {title} Complete!")
    if out is not None:
        print(f"   Output: {out}")


def fmt(v: Any) -> Any:
    """Floats at full round-trip precision; everything else untouched."""
    if isinstance(v, float):
        return format(v, FLOAT_FORMAT)
    return v


def write_rows(
    out_path: Path, fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]]
) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(fieldnames))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: fmt(row.get(k, "")) for k in fieldnames})
    return out_path


def append_result(results_file: Path, fieldnames: Sequence[str], row: Mapping[str, Any]) -> None:
    results_file.parent.mkdir(parents=True, exist_ok=True)
    file_exists = results_file.exists()

    with results_file.open("a", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(fieldnames))
        if not file_exists:
            writer.writeheader()
        writer.writerow({k: fmt(row.get(k, "")) for k in fieldnames})


def float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}") from exc


def safe_log10(v: float) -> float:
    return math.log10(max(abs(v), 1e-300))


def config_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="BranchConfig overrides as YAML or key=value lines.",
    )(fn)


def out_option(default: str) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    return click.option(
        "--out",
        "out_path",
        type=click.Path(dir_okay=False, path_type=Path),
        default=default,
        show_default=True,
        help="Output CSV file.",
    )


def branch_config(config_path: Optional[Path]) -> BranchConfig:
    if config_path is not None and not Path(config_path).exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")
    return load_branch_config(config_path)
