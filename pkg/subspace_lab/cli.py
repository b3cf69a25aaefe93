# subspace_lab/cli.py

"""Command-line entry point: ``python -m subspace_lab roth|subspace ...``."""

import functools
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

import click

from subspace_lab import experiments
from subspace_lab.config import Settings, settings
from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.arith.places import as_rational
from subspace_lab.core.subspace.systems import load_system
from subspace_lab.errors import ConfigError, InvariantViolation, SubspaceLabError
from subspace_lab.reports import Report, write_report

logger = logging.getLogger(__name__)


class LabError(click.ClickException):
    """A library failure surfaced with its own exit code."""

    def __init__(self, error: SubspaceLabError):
        super().__init__(str(error))
        self.exit_code = error.exit_code


def _rational(ctx, param, value):
    if value is None:
        return None
    try:
        return as_rational(value)
    except (SubspaceLabError, ValueError, ZeroDivisionError) as e:
        raise click.BadParameter(f"{value!r} is not an exact rational") from e


def run_options(func):
    """--precision-cap, --threads, --format and --out, shared by every command."""

    @click.option("--precision-cap", type=int, default=None, help="Bit cap for certified comparisons.")
    @click.option("--threads", type=int, default=None, help="Worker processes for scans.")
    @click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None, help="Report format.")
    @click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the report here.")
    @functools.wraps(func)
    def wrapper(*args, precision_cap, threads, fmt, out, **kwargs):
        updates = {}
        if precision_cap is not None:
            updates["PRECISION_CAP"] = precision_cap
        if threads is not None:
            updates["THREADS"] = threads
        if fmt is not None:
            updates["REPORT_FORMAT"] = fmt
        run_settings = settings.model_copy(update=updates)
        try:
            report = func(*args, run_settings=run_settings, **kwargs)
            _emit(report, run_settings, out)
        except SubspaceLabError as e:
            logger.error(f"{type(e).__name__}: {e}")
            raise LabError(e) from e
        return report

    return wrapper


def _emit(report: Report, run_settings: Settings, out: Optional[Path]):
    text = write_report(report, run_settings.REPORT_FORMAT, out)
    if out is None:
        click.echo(text)
    else:
        click.echo(f"Wrote {out}")


def _parse_xi(text: str) -> AlgebraicReal:
    return AlgebraicReal.parse(text)


def _read_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not read {path}: {e}") from e


def _parse_places(entries) -> Dict[str, str]:
    places: Dict[str, str] = {}
    for entry in entries:
        if "=" not in entry:
            raise ConfigError(f"--D expects place=value, got {entry!r}")
        place, value = entry.split("=", 1)
        places[place.strip()] = value.strip()
    return places


@click.group()
@click.option("--log-level", default=None, help="Logging level for this run (default from settings).")
def main(log_level: Optional[str]):
    """Experiments on rational approximation and systems of linear form inequalities."""
    if log_level:
        logging.getLogger().setLevel(log_level.upper())


# ---------------------------------------------------------------------------
# roth

@main.group()
def roth():
    """Rational approximations |xi - alpha| <= H(alpha)^(-2-delta)."""


@roth.command("scan")
@click.option("--xi", required=True, help="poly=[c0,...,cd];interval=[lo,hi]")
@click.option("--delta", required=True, callback=_rational, help="Exact rational in (0, 1].")
@click.option("--max-height", type=int, required=True, help="Largest H(alpha) scanned.")
@run_options
def roth_scan(xi: str, delta, max_height: int, run_settings: Settings):
    """Scan, classify and audit the gap principle; exit 2 on a violation."""
    report = experiments.run_roth_scan(
        _parse_xi(xi), delta, max_height, run_settings.THREADS, run_settings.PRECISION_CAP
    )
    if not report.gap_principle_holds:
        _emit_then_fail(report, run_settings, f"{len(report.gap_violations)} gap principle violations")
    return report


def _emit_then_fail(report: Report, run_settings: Settings, message: str):
    click.echo(write_report(report, run_settings.REPORT_FORMAT))
    raise InvariantViolation(message)


@roth.command("bounds")
@click.option("--xi", required=True, help="poly=[c0,...,cd];interval=[lo,hi]")
@click.option("--delta", required=True, callback=_rational)
@run_options
def roth_bounds(xi: str, delta, run_settings: Settings):
    """Explicit bounds on the number of solutions."""
    return experiments.run_roth_bounds(_parse_xi(xi), delta)


@roth.command("cover")
@click.option("--Q", "Q", required=True, callback=_rational, help="Start of the range, at least 2.")
@click.option("--E", "E", required=True, callback=_rational, help="The range is [Q, Q^E).")
@click.option("--delta", required=True, callback=_rational)
@run_options
def roth_cover(Q, E, delta, run_settings: Settings):
    """Windows [Q_k, Q_k^(1+delta/2)) covering [Q, Q^E)."""
    return experiments.run_roth_cover(Q, E, delta)


# ---------------------------------------------------------------------------
# subspace

@main.group()
def subspace():
    """Systems |L_i^(v)(x)|_v <= C_v H(x)^(c_iv) loaded from TOML."""


@subspace.command("scan")
@click.option("--system", "system_path", required=True, type=click.Path(path_type=Path))
@click.option("--max-height", type=int, required=True)
@run_options
def subspace_scan(system_path: Path, max_height: int, run_settings: Settings):
    """Enumerate the solutions with max-norm up to --max-height."""
    system = load_system(system_path)
    return experiments.run_subspace_scan(system, max_height, run_settings.THREADS, run_settings.PRECISION_CAP)


@subspace.command("cluster")
@click.option("--system", "system_path", required=True, type=click.Path(path_type=Path))
@click.option("--max-height", type=int, required=True)
@click.option("--window-Q", "window_Q", multiple=True, callback=lambda c, p, v: [_rational(c, p, q) for q in v])
@run_options
def subspace_cluster(system_path: Path, max_height: int, window_Q: List, run_settings: Settings):
    """Spans of window groups and partition classes; exit 2 if one is the whole space."""
    system = load_system(system_path)
    return experiments.run_cluster(system, max_height, window_Q, run_settings.THREADS, run_settings.PRECISION_CAP)


@subspace.command("u0")
@click.option("--system", "system_path", required=True, type=click.Path(path_type=Path))
@run_options
def subspace_u0(system_path: Path, run_settings: Settings):
    """Slope table, U0 and semistability."""
    return experiments.run_u0(load_system(system_path), run_settings.CLOSURE_CAP)


@subspace.command("bounds")
@click.option("--n", "n", type=int, required=True)
@click.option("--delta", required=True, callback=_rational)
@click.option("--R", "R", type=int, default=None, help="Number of distinct forms (default n * places).")
@click.option("--D", "D", type=int, default=1, show_default=True)
@click.option("--d", "d", type=int, default=1, show_default=True, help="Degree of the ground field.")
@click.option("--H", "H", default="1", callback=_rational, show_default=True)
@click.option("--places", type=int, default=1, show_default=True, help="|S|, used for the default R.")
@run_options
def subspace_bounds(n: int, delta, R: Optional[int], D: int, d: int, H, places: int, run_settings: Settings):
    """Comparison table of the explicit bounds."""
    return experiments.run_bounds(n, delta, R, D, d, H, places)


@subspace.command("partition")
@click.option("--vectors", required=True, type=click.Path(path_type=Path), help="JSON list of vectors.")
@click.option("--M", "M", default=None, callback=_rational, help="Partition parameter M >= 1.")
@click.option("--M-squared", "M_squared", default=None, callback=_rational, help="M^2, for irrational M.")
@run_options
def subspace_partition(vectors: Path, M, M_squared, run_settings: Settings):
    """Assign each vector its partition class."""
    if (M is None) == (M_squared is None):
        raise ConfigError("give exactly one of --M and --M-squared")
    return experiments.run_partition(_read_json(vectors), M_squared if M is None else M * M)


@subspace.command("cover")
@click.option("--points", required=True, type=click.Path(path_type=Path), help="JSON list of rational points.")
@click.option("--D", "D", multiple=True, help="place=value, e.g. inf=4 or 2=1/2.")
@run_options
def subspace_cover(points: Path, D, run_settings: Settings):
    """Cover the points by proper subspaces."""
    return experiments.run_cover(_read_json(points), _parse_places(D))
