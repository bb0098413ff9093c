"""
besselk-diagnostics: accuracy, timing, covariance and fitting diagnostics.

Every subcommand writes one CSV (``--out``). Exit codes: 0 on success, 2 for
domain, configuration, dataset and factorisation errors, 3 for I/O errors.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict, Tuple

import click

from besselk_ad import __version__
from besselk_ad.numerics.errors import (
    BesselDomainError,
    ConfigError,
    DatasetError,
    FactorizationError,
    OracleUnavailableError,
)
from besselk_ad.scripts.accuracy_grid import accuracy_grid
from besselk_ad.scripts.common import append_result, banner, done, section
from besselk_ad.scripts.covmat_diag import covmat_diag
from besselk_ad.scripts.fit_demo import fit_demo
from besselk_ad.scripts.profile_surface import profile_surface
from besselk_ad.scripts.timing import timing
from besselk_ad.scripts.uk_table import uk_table

logger = logging.getLogger(__name__)

EXIT_DOMAIN = 2
EXIT_IO = 3

DOMAIN_ERRORS = (
    BesselDomainError,
    ConfigError,
    DatasetError,
    FactorizationError,
    OracleUnavailableError,
)


class DiagnosticsGroup(click.Group):
    """Maps library errors to the documented exit codes."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except DOMAIN_ERRORS as exc:
            click.echo(f"❌ {type(exc).__name__}: {exc}", err=True)
            ctx.exit(EXIT_DOMAIN)
        except OSError as exc:
            click.echo(f"❌ I/O error: {exc}", err=True)
            ctx.exit(EXIT_IO)


@click.group(cls=DiagnosticsGroup)
@click.version_option(__version__, prog_name="besselk-diagnostics")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
    help="Library log level (messages go to stderr).",
)
def cli(log_level: str) -> None:
    """Diagnostics for K_nu order derivatives and Matern likelihood fitting."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


CommandSettings = Callable[[bool], Dict[str, Any]]

# name -> (command, extra settings given the --quick flag)
COMMANDS: Dict[str, Tuple[click.Command, CommandSettings]] = {
    "uk-table": (uk_table, lambda quick: {}),
    "accuracy-grid": (
        accuracy_grid,
        lambda quick: {"steps": 6, "no_oracle": True} if quick else {},
    ),
    "timing": (timing, lambda quick: {"inner": 200} if quick else {}),
    "covmat-diag": (covmat_diag, lambda quick: {"side": 8} if quick else {}),
    "profile-surface": (
        profile_surface,
        lambda quick: {"steps": 5, "n": 36, "m": 2} if quick else {},
    ),
    "fit-demo": (
        fit_demo,
        lambda quick: {"n": 36, "m": 2, "max_iters": 20} if quick else {},
    ),
}

SUMMARY_FIELDS = ["timestamp", "command", "status", "duration_s", "output", "error_message"]


@click.command("run-all")
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("diagnostics"),
    show_default=True,
    help="Directory for every command's CSV and summary.csv.",
)
@click.option(
    "--command",
    "selected",
    multiple=True,
    type=click.Choice(sorted(COMMANDS)),
    help="Command(s) to run. Can be passed multiple times. Default: all.",
)
@click.option("--quick", is_flag=True, help="Small grids and no oracle, for smoke runs.")
@click.pass_context
def run_all(ctx: click.Context, out_dir: Path, selected: Tuple[str, ...], quick: bool) -> None:
    """Run the diagnostics in turn and append one summary row per command."""
    banner("🧪 besselk-diagnostics: run-all")
    names = [name for name in COMMANDS if not selected or name in selected]
    summary_file = out_dir / "summary.csv"
    failures = 0

    for name in names:
        command, settings = COMMANDS[name]
        output = out_dir / f"{name.replace('-', '_')}.csv"
        section(f"🚀 {name}")
        started = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        t0 = time.perf_counter()
        status, error = "success", ""
        try:
            ctx.invoke(command, out_path=output, **settings(quick))
        except Exception as exc:  # recorded in the summary; the next command still runs
            logger.debug("%s failed", name, exc_info=True)
            status, error = "fail", f"{type(exc).__name__}: {exc}"
            failures += 1
            print(f"\n❌ {name} failed: {error}")
        append_result(
            summary_file,
            SUMMARY_FIELDS,
            {
                "timestamp": started,
                "command": name,
                "status": status,
                "duration_s": round(time.perf_counter() - t0, 3),
                "output": str(output),
                "error_message": error,
            },
        )

    done("run-all", summary_file)
    if failures:
        print(f"⚠️  {failures} of {len(names)} command(s) failed")


for _command in (
    accuracy_grid,
    timing,
    covmat_diag,
    profile_surface,
    fit_demo,
    uk_table,
    run_all,
):
    cli.add_command(_command)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
