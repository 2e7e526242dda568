"""Command-line interface: rank routes, dump elevation profiles, serve HTTP.

Exit codes: 0 success, 2 usage or configuration problem, 3 no route (or
unknown route id), 4 upstream provider failure. `rank --format json`
emits exactly the bytes the HTTP endpoint would return for the same
query, with no trailing newline.
"""

from __future__ import annotations

import click

from .config import AppConfig, load_config, load_config_file
from .errors import (
    ConfigError,
    DemBoundsError,
    DemNodataError,
    DemParseError,
    DirectionsProviderError,
    ElevationProviderError,
    MissingElevationError,
    NoRouteError,
    PolylineError,
)
from .geo import GeoPoint, Route, decode_polyline
from .ranking import MODES, canonical_json, ranked_to_geojson, report_table
from .service import Engine, build_app

_PROVIDER_ERRORS = (
    DirectionsProviderError,
    ElevationProviderError,
    DemBoundsError,
    DemNodataError,
    DemParseError,
    MissingElevationError,
)

EXIT_USAGE = 2
EXIT_NO_ROUTE = 3
EXIT_PROVIDER = 4


def _fail(code: int, message: str) -> SystemExit:
    click.echo(f"error: {message}", err=True)
    return SystemExit(code)


def _load(config_path: str | None) -> AppConfig:
    """Config from the given file, or from environment variables alone."""
    try:
        if config_path is not None:
            return load_config_file(config_path)
        return load_config("{}")
    except ConfigError as exc:
        raise _fail(EXIT_USAGE, str(exc))
    except OSError as exc:
        raise _fail(EXIT_USAGE, f"cannot read config: {exc}")


def _build_engine(config: AppConfig) -> Engine:
    try:
        return Engine(config)
    except OSError as exc:
        raise _fail(EXIT_USAGE, f"cannot load configured data: {exc}")
    except DemParseError as exc:
        raise _fail(EXIT_USAGE, f"bad elevation grid: {exc}")


def _parse_latlng(
    ctx: click.Context, param: click.Parameter, value: str | None
) -> GeoPoint | None:
    if value is None:
        return None
    parts = value.split(",")
    if len(parts) != 2:
        raise click.BadParameter("expected LAT,LNG")
    try:
        lat, lng = float(parts[0]), float(parts[1])
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a LAT,LNG pair")
    try:
        return GeoPoint(lat, lng)
    except ValueError as exc:
        raise click.BadParameter(str(exc))


@click.group()
@click.version_option(package_name="terrarank")
def main() -> None:
    """Rank alternative routes by distance weighted with terrain climb."""


@main.command()
@click.option("--origin", required=True, callback=_parse_latlng, help="Start as LAT,LNG.")
@click.option("--dest", required=True, callback=_parse_latlng, help="End as LAT,LNG.")
@click.option(
    "--mode",
    type=click.Choice(MODES),
    default="shortest",
    show_default=True,
    help="Ranking preference.",
)
@click.option("--alpha", type=float, default=None, help="Override the slope weight factor.")
@click.option("--k", type=int, default=None, help="Number of candidate routes to request.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["table", "json", "geojson"]),
    default="table",
    show_default=True,
)
@click.option("--config", "config_path", type=click.Path(), default=None)
def rank(origin, dest, mode, alpha, k, fmt, config_path) -> None:
    """Rank candidate routes between two points."""
    if alpha is not None and alpha < 0:
        raise click.BadParameter("must be >= 0", param_hint="'--alpha'")
    if k is not None and k < 1:
        raise click.BadParameter("must be >= 1", param_hint="'--k'")
    config = _load(config_path)
    engine = _build_engine(config)
    try:
        report, ranked = engine.rank(origin, dest, mode, alpha=alpha, k=k)
    except NoRouteError as exc:
        raise _fail(EXIT_NO_ROUTE, str(exc))
    except _PROVIDER_ERRORS as exc:
        raise _fail(EXIT_PROVIDER, str(exc))
    if fmt == "json":
        click.echo(canonical_json(report), nl=False)
    elif fmt == "geojson":
        click.echo(canonical_json(ranked_to_geojson(ranked)), nl=False)
    else:
        click.echo(report_table(report))


@main.command()
@click.option("--route-id", default=None, help="Pick one route of the candidate set.")
@click.option("--polyline", default=None, help="Profile an encoded polyline instead.")
@click.option(
    "--origin",
    callback=_parse_latlng,
    default=None,
    help="Start as LAT,LNG (needed with --route-id unless routes come from a file).",
)
@click.option("--dest", callback=_parse_latlng, default=None, help="End as LAT,LNG.")
@click.option("--config", "config_path", type=click.Path(), default=None)
def profile(route_id, polyline, origin, dest, config_path) -> None:
    """Print a route's elevation profile as CSV (d_m,e_m)."""
    if (route_id is None) == (polyline is None):
        raise click.UsageError("exactly one of --route-id or --polyline is required")
    if polyline is not None:
        try:
            route = Route.from_positions(decode_polyline(polyline), id="polyline")
        except (PolylineError, ValueError) as exc:
            raise click.BadParameter(str(exc), param_hint="'--polyline'")
    config = _load(config_path)
    engine = _build_engine(config)
    try:
        if route_id is not None:
            if engine.needs_endpoints and (origin is None or dest is None):
                raise click.UsageError(
                    "--route-id with this configuration needs --origin and --dest"
                )
            cands = engine.candidates(origin, dest, config.k)
            by_id = {r.id: r for r in cands.routes}
            if route_id not in by_id:
                known = ", ".join(sorted(by_id))
                raise _fail(EXIT_NO_ROUTE, f"no route {route_id!r} (have: {known})")
            route = by_id[route_id]
        samples = engine.profile(route)
    except NoRouteError as exc:
        raise _fail(EXIT_NO_ROUTE, str(exc))
    except _PROVIDER_ERRORS as exc:
        raise _fail(EXIT_PROVIDER, str(exc))
    click.echo("d_m,e_m")
    for sample in samples.samples:
        click.echo(f"{sample[0]!r},{sample[1]!r}")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--host", default=None, help="Override the configured listen host.")
@click.option("--port", type=int, default=None, help="Override the configured listen port.")
def serve(config_path, host, port) -> None:
    """Run the HTTP API."""
    import uvicorn

    config = _load(config_path)
    try:
        app = build_app(config)
    except OSError as exc:
        raise _fail(EXIT_USAGE, f"cannot load configured data: {exc}")
    uvicorn.run(app, host=host or config.host, port=port if port is not None else config.port)


if __name__ == "__main__":
    main()
