"""Command-line front end.

Every command builds a :class:`RunConfig` (YAML file plus flag overrides),
runs one verification, prints one line per check and optionally writes a JSON
report with CSV tables.  Exit codes: 0 pass, 1 check failure, 2 configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import sys

import click

from . import verify
from .catalog import MobiusTransform, dilation, parse_transform, plane_rotation, translation
from .config import RunConfig, load_config
from .errors import ConfigError, DegenerateImmersionError, DomainError, InsufficientOrderError, SingularityError
from .quadrature import FINE_GRID

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

DEFAULT_INVERSION = "inversion:center=3,0,0,0,0;radius=1"
DEFAULT_POINTS = {"willmore": 50, "w3": 20, "rivvy": 20, "appendix": 20, "conserve": 20}


class CommandFailed(Exception):
    """Raised inside a command when the report has a failing asserted check."""


def _common(func):
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML run configuration."),
        click.option("--spec", help="Immersion, e.g. sphere:r=1 or ellipsoid:axes=1,1,1,1,1.5."),
        click.option("--degree", type=int, help="Jet degree (2..6, at least the command minimum)."),
        click.option("--seed", type=int, help="Seed for sample points."),
        click.option("--points", type=int, help="Number of sample points."),
        click.option("--tol-identity", type=float, help="Relative tolerance for pointwise identities."),
        click.option("--tol-quadrature", type=float, help="Relative tolerance for integrals."),
        click.option("--out", type=click.Path(dir_okay=False), help="Write the JSON report here."),
        click.option("--tables", type=click.Path(file_okay=False), help="Directory for CSV tables."),
        click.option("--informational", is_flag=True, default=None, help="Report residuals without asserting them."),
        click.option("--json", "as_json", is_flag=True, help="Print the JSON report instead of check lines."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _config(command: str, kw: dict, **extra) -> RunConfig:
    tolerances = {}
    if kw.get("tol_identity") is not None:
        tolerances["identity"] = kw["tol_identity"]
    if kw.get("tol_quadrature") is not None:
        tolerances["quadrature"] = kw["tol_quadrature"]
    output = {k: v for k, v in (("report", kw.get("out")), ("tables", kw.get("tables"))) if v is not None}
    overrides = {
        "spec": kw.get("spec"),
        "degree": kw.get("degree"),
        "seed": kw.get("seed"),
        "points": kw.get("points"),
        "informational": kw.get("informational"),
        "tolerances": tolerances or None,
        "output": output or None,
        **extra,
    }
    cfg = load_config(kw.get("config_path"), overrides)
    cfg.check_degree(command)
    return cfg


def _emit(report, cfg: RunConfig, as_json: bool) -> None:
    if as_json:
        click.echo(report.to_json())
    else:
        for line in report.lines():
            click.echo(line)
    if cfg.output.report is not None:
        for path in report.write(cfg.output.report, cfg.output.tables):
            click.echo(f"wrote {path}", err=True)
    if not report.passed:
        raise CommandFailed(report.command)


@click.group()
def cli():
    """Evaluate the fourth-order conformal energy and verify its identities."""


@cli.command()
@_common
@click.option("--region", help="atlas (closed immersions), unit-box, or a chart name.")
@click.option("--mu", type=float, help="Weight of the |h0|^4 term.")
@click.option("--local", is_flag=True, help="Also report ||grad H||_2 + ||H||_4 over the region.")
def energy(region, mu, local, as_json, **kw):
    """Integrate the energy density with Richardson-checked quadrature."""
    cfg = _config("energy", kw, region=region, mu=mu)
    grid = cfg.grid.spec() if cfg.grid else None
    report = verify.run_energy(cfg.immersion(), grid, cfg.region, cfg.mu, cfg.tolerances.tolerances(), local,
                               cfg.echo(), cfg.degree)
    _emit(report, cfg, as_json)


@cli.command()
@click.argument("which", type=click.Choice(sorted(verify.RESIDUALS)))
@_common
@click.option("--chart", help="Sample from one chart instead of the whole atlas.")
def residual(which, chart, as_json, **kw):
    """Pointwise residual of the operator W, W3, the identity tensor or the appendix identity."""
    cfg = _config(which, kw, chart=chart)
    run = verify.RESIDUALS[which]
    report = run(cfg.immersion(), cfg.points or DEFAULT_POINTS[which], cfg.seed, cfg.degree, cfg.chart,
                 cfg.tolerances.tolerances(), cfg.informational, cfg.echo())
    _emit(report, cfg, as_json)


@cli.command()
@_common
@click.option("--chart", help="Sample from one chart instead of the whole atlas.")
def conserve(chart, as_json, **kw):
    """Divergences of the translation, dilation and rotation currents."""
    cfg = _config("conserve", kw, chart=chart)
    points = cfg.points or DEFAULT_POINTS["conserve"]
    report = verify.run_conserve(cfg.immersion(), points, cfg.seed, cfg.degree, cfg.chart,
                                 cfg.tolerances.tolerances(), cfg.informational, cfg.echo())
    _emit(report, cfg, as_json)


def standard_transforms(transform: MobiusTransform | None = None) -> dict[str, MobiusTransform]:
    """The off-surface inversion (or a given transform) plus a dilation, rotation and translation."""
    return {
        "inversion" if transform is None else "transform": transform or parse_transform(DEFAULT_INVERSION),
        "dilation": MobiusTransform((dilation(1.7),)),
        "rotation": MobiusTransform((plane_rotation(0, 4, 0.6),)),
        "translation": MobiusTransform((translation([0.3, -0.2, 0.5, 0.1, 0.4]),)),
    }


@cli.command()
@_common
@click.option("--transform", help="Moebius map, e.g. 'inversion:center=3,0,0,0,0;radius=1' (factors joined by |).")
@click.option("--only", is_flag=True, help="Test only the given transform.")
def invariance(transform, only, as_json, **kw):
    """Energy before and after Moebius transformations."""
    if kw.get("spec") is None and kw.get("config_path") is None:
        kw["spec"] = "perturbed-sphere:r=1;eps=0.1;mode=2"
    cfg = _config("invariance", kw, transform=transform)
    given = cfg.mobius()
    transforms = {"transform": given} if (only and given is not None) else standard_transforms(given)
    grid = cfg.grid.spec() if cfg.grid else FINE_GRID
    report = verify.run_invariance(cfg.immersion(), transforms, grid, cfg.tolerances.tolerances(), cfg.echo())
    _emit(report, cfg, as_json)


def run(argv=None) -> int:
    """Run the command line and return the exit code."""
    try:
        cli.main(args=argv, prog_name="willmore4", standalone_mode=False)
    except CommandFailed:
        return EXIT_FAIL
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return EXIT_CONFIG
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except (ConfigError, DomainError, InsufficientOrderError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        return EXIT_CONFIG
    except (DegenerateImmersionError, SingularityError, FloatingPointError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERICAL
    return EXIT_PASS


def main() -> None:
    sys.exit(run())


__all__ = ["cli", "run", "main", "standard_transforms", "DEFAULT_INVERSION"]
