"""uk-table: exact rational coefficients of the U_k polynomials."""

from __future__ import annotations

from pathlib import Path

import click

from besselk_ad.numerics.uk_polynomials import (
    MAX_SUPPORTED_ORDER,
    build_uk_table,
    dump_uk_table_csv,
)
from besselk_ad.scripts.common import banner, done, out_option, show_settings


@click.command("uk-table")
@click.option(
    "--max-order",
    type=click.IntRange(min=0),
    default=MAX_SUPPORTED_ORDER,
    show_default=True,
    help="Highest k to generate.",
)
@out_option("uk_table.csv")
def uk_table(max_order: int, out_path: Path) -> None:
    """Dump U_0..U_k as (k, power, numerator, denominator) rows."""
    banner("🧾 U_k polynomial table")
    show_settings({"max order": max_order})
    table = build_uk_table(max_order)
    dump_uk_table_csv(table, out_path)
    done("U_k table", out_path)
