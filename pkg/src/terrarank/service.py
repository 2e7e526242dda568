"""HTTP JSON API and the request pipeline it shares with the CLI.

The Engine owns the loaded DEM/graph/cache and turns one (origin,
destination, preference) query into the comparison report. Both the HTTP
endpoint and the CLI call the same method, and both serialize with
canonical JSON, so their bytes are identical for identical inputs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response

from .config import AppConfig
from .elevation import (
    CachingProvider,
    DemProvider,
    ElevationCache,
    ElevationProvider,
    RemoteProvider,
    attach_elevations,
    load_dem,
)
from .errors import (
    DemBoundsError,
    DemNodataError,
    DirectionsProviderError,
    ElevationProviderError,
    NoRouteError,
    TerrarankError,
)
from .geo import GeoPoint, Route, resample_route
from .ranking import (
    MODES,
    ElevationProfile,
    Preference,
    RankedRoute,
    canonical_json,
    comparison_report,
    elevation_profile,
    rank_candidates,
)
from .routing import (
    CandidateSet,
    DirectionsClient,
    fetch_provider_routes,
    k_alternatives,
    load_road_graph,
    snap_to_graph,
)
from .weighting import WeightSpec

RETRY_DELAY_S = 0.2


def _is_transport(exc: Exception) -> bool:
    return isinstance(exc, (DirectionsProviderError, ElevationProviderError)) and exc.transport


class Engine:
    """Loaded pipeline state for one configuration."""

    def __init__(self, config: AppConfig):
        self.config = config
        self._graph = None
        if config.graph_path is not None:
            with open(config.graph_path, "r", encoding="utf-8") as fh:
                self._graph = load_road_graph(fh.read())
        self._elevation = self._build_elevation_provider(config)
        self._directions = (
            DirectionsClient(config.directions_url, api_key=config.api_key)
            if config.directions_url is not None
            else None
        )

    @staticmethod
    def _build_elevation_provider(config: AppConfig) -> ElevationProvider:
        # A local DEM beats a remote service: offline never waits on a socket.
        if config.dem_path is not None:
            with open(config.dem_path, "r", encoding="utf-8") as fh:
                inner: ElevationProvider = DemProvider(load_dem(fh.read()))
        else:
            inner = RemoteProvider(config.elevation_url, api_key=config.api_key)
        if config.cache_path is not None:
            try:
                cache = ElevationCache.load(config.cache_path)
            except FileNotFoundError:
                cache = ElevationCache()
            return CachingProvider(inner, cache)
        return inner

    @property
    def elevation_source(self) -> str:
        return "dem" if self.config.dem_path is not None else "remote"

    @property
    def route_source(self) -> str:
        if self.config.directions_url is None:
            return "local"
        return "file" if self._directions.is_file_backed else "provider"

    def _retry_transport(self, fn):
        try:
            return fn()
        except Exception as exc:
            if not _is_transport(exc):
                raise
            time.sleep(RETRY_DELAY_S)
            return fn()

    @property
    def needs_endpoints(self) -> bool:
        """Whether candidate lookup requires origin/destination coordinates."""
        return self._directions is None or not self._directions.is_file_backed

    def candidates(
        self,
        origin: GeoPoint | None,
        destination: GeoPoint | None,
        k: int,
    ) -> CandidateSet:
        if self._directions is not None:
            if self._directions.is_file_backed:
                # The mock serves one canned candidate set whatever is asked;
                # its routes define their own endpoints.
                return self._retry_transport(
                    lambda: fetch_provider_routes(self._directions, k=k)
                )
            return self._retry_transport(
                lambda: fetch_provider_routes(self._directions, origin, destination, k=k)
            )
        if origin is None or destination is None:
            raise ValueError("local routing needs both origin and destination")
        src = snap_to_graph(self._graph, origin)
        dst = snap_to_graph(self._graph, destination)
        return k_alternatives(self._graph, src, dst, k=k)

    def profile(self, route: Route) -> ElevationProfile:
        """Cumulative-distance/elevation samples for one route."""
        resampled = resample_route(route, self.config.resample_interval_m)
        annotated = self._retry_transport(
            lambda: attach_elevations(resampled, self._elevation)
        )
        return elevation_profile(annotated)

    def rank(
        self,
        origin: GeoPoint,
        destination: GeoPoint,
        preference: str,
        alpha: float | None = None,
        k: int | None = None,
    ) -> tuple[dict, list[RankedRoute]]:
        """Full query: candidates, annotation, scoring, report."""
        pref = Preference(preference)
        spec = WeightSpec(
            factor="slope",
            alpha=self.config.alpha if alpha is None else alpha,
            grade_mode=self.config.grade_mode,
        )
        if origin == destination:
            raise NoRouteError("origin and destination are the same point")
        cands = self.candidates(origin, destination, self.config.k if k is None else k)
        ranked = self._retry_transport(
            lambda: rank_candidates(
                cands, self._elevation, spec, pref, self.config.resample_interval_m
            )
        )
        return comparison_report(ranked, pref, spec), ranked


@dataclass(frozen=True)
class _BadRequest(Exception):
    code: str
    message: str


def _parse_point(body: dict, key: str) -> GeoPoint:
    entry = body.get(key)
    if not isinstance(entry, dict):
        raise _BadRequest("invalid_body", f'"{key}" must be an object with lat/lng')
    lat = entry.get("lat")
    lng = entry.get("lng")
    if isinstance(lat, bool) or isinstance(lng, bool):
        raise _BadRequest("invalid_coordinates", f'"{key}" lat/lng must be numbers')
    if not isinstance(lat, (int, float)) or not isinstance(lng, (int, float)):
        raise _BadRequest("invalid_coordinates", f'"{key}" lat/lng must be numbers')
    if not (math.isfinite(lat) and math.isfinite(lng)) or not -90.0 <= lat <= 90.0:
        raise _BadRequest("invalid_coordinates", f'"{key}" latitude {lat} out of range')
    return GeoPoint(float(lat), float(lng))


def _json_response(document: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(document),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, code: str, message: str) -> Response:
    return _json_response({"error": {"code": code, "message": message}}, status_code)


def build_app(config: AppConfig) -> FastAPI:
    """The HTTP app: POST /v1/rank and GET /v1/health."""
    engine = Engine(config)
    app = FastAPI(title="terrarank", docs_url=None, redoc_url=None)
    if config.cors_origin is not None:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["GET", "POST"],
            allow_headers=["Content-Type"],
        )

    @app.get("/v1/health")
    def health() -> Response:
        return _json_response(
            {
                "status": "ok",
                "sources": {
                    "elevation": engine.elevation_source,
                    "routes": engine.route_source,
                },
            }
        )

    @app.post("/v1/rank")
    async def rank(request: Request) -> Response:
        try:
            body = await request.json()
        except Exception:
            return _error(400, "invalid_body", "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "invalid_body", "request body must be a JSON object")
        try:
            origin = _parse_point(body, "origin")
            destination = _parse_point(body, "destination")
            preference = body.get("preference")
            if preference not in MODES:
                raise _BadRequest(
                    "invalid_preference",
                    f'"preference" must be one of {", ".join(MODES)}',
                )
            alpha = body.get("alpha")
            if alpha is not None:
                if (
                    isinstance(alpha, bool)
                    or not isinstance(alpha, (int, float))
                    or not math.isfinite(alpha)
                    or alpha < 0
                ):
                    raise _BadRequest("invalid_body", '"alpha" must be a number >= 0')
                alpha = float(alpha)
            k = body.get("k")
            if k is not None and (isinstance(k, bool) or not isinstance(k, int) or k < 1):
                raise _BadRequest("invalid_body", '"k" must be an integer >= 1')
        except _BadRequest as bad:
            return _error(400, bad.code, bad.message)
        try:
            report, _ = engine.rank(origin, destination, preference, alpha=alpha, k=k)
        except NoRouteError as exc:
            return _error(404, "no_route", str(exc))
        except (
            DirectionsProviderError,
            ElevationProviderError,
            DemBoundsError,
            DemNodataError,
        ) as exc:
            return _error(502, "provider_error", str(exc))
        except TerrarankError as exc:
            return _error(500, "internal", str(exc))
        return _json_response(report)

    return app
