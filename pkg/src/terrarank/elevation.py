"""Elevation sources: DEM raster, remote JSON service, and a quantized cache.

The DEM reader parses ESRI ASCII grids and interpolates bilinearly between
cell centers. The remote client speaks a small JSON shape over HTTP. Both
are hidden behind one provider interface so callers never know the source.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Protocol, Sequence

import requests

from .errors import (
    DemBoundsError,
    DemNodataError,
    DemParseError,
    ElevationProviderError,
)
from .geo import GeoPoint, Route, RoutePoint

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")

SOURCES = ("dem", "remote", "cache")


@dataclass(frozen=True)
class DemGrid:
    """ESRI ASCII grid: values at cell centers, first stored row northernmost.

    The center of the lower-left cell sits at (xllcorner + cellsize/2,
    yllcorner + cellsize/2); rows advance southward through `values`.
    """

    ncols: int
    nrows: int
    xllcorner: float
    yllcorner: float
    cellsize: float
    nodata_value: float
    values: tuple[float, ...]

    def __post_init__(self):
        if self.ncols < 1 or self.nrows < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.ncols}x{self.nrows}")
        if not (math.isfinite(self.cellsize) and self.cellsize > 0):
            raise ValueError(f"cellsize must be > 0, got {self.cellsize}")
        if len(self.values) != self.ncols * self.nrows:
            raise ValueError(
                f"expected {self.ncols * self.nrows} values, got {len(self.values)}"
            )
        for v in self.values:
            if v != self.nodata_value and not math.isfinite(v):
                raise ValueError(f"non-finite grid value {v}")

    def value_at(self, col: int, row: int) -> float:
        """Raw stored value at 0-based (col, row), row 0 northernmost."""
        return self.values[row * self.ncols + col]


@dataclass(frozen=True)
class ElevationSample:
    """One resolved elevation and where it came from."""

    point: GeoPoint
    elevation: float
    source: str

    def __post_init__(self):
        if not math.isfinite(self.elevation):
            raise ValueError(f"non-finite elevation {self.elevation}")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")


def load_dem(text: str) -> DemGrid:
    """Parse an ESRI ASCII grid from file content.

    Six case-insensitive header lines (ncols, nrows, xllcorner, yllcorner,
    cellsize, NODATA_value) are followed by nrows rows of ncols numbers.
    Errors carry the 1-based line number of the offending line.
    """
    lines = text.splitlines()
    headers: dict[str, float] = {}
    data_start = None
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        parts = stripped.split()
        key = parts[0].lower()
        if key in _HEADER_KEYS:
            if key in headers:
                raise DemParseError(f"duplicate header {parts[0]!r}", line=lineno)
            if len(parts) != 2:
                raise DemParseError(f"header {parts[0]!r} needs exactly one value", line=lineno)
            try:
                headers[key] = float(parts[1])
            except ValueError:
                raise DemParseError(f"non-numeric header value {parts[1]!r}", line=lineno) from None
            continue
        data_start = lineno
        break
    missing = [k for k in _HEADER_KEYS if k not in headers]
    if missing:
        line = data_start if data_start is not None else len(lines) + 1
        raise DemParseError(f"missing header(s): {', '.join(missing)}", line=line)
    for int_key in ("ncols", "nrows"):
        if headers[int_key] != int(headers[int_key]) or headers[int_key] < 1:
            raise DemParseError(f"{int_key} must be a positive integer", line=1)
    ncols = int(headers["ncols"])
    nrows = int(headers["nrows"])

    values: list[float] = []
    rows_seen = 0
    for lineno in range((data_start or len(lines) + 1) - 1, len(lines)):
        stripped = lines[lineno].strip()
        if not stripped:
            continue
        cells = stripped.split()
        if len(cells) != ncols:
            raise DemParseError(
                f"row has {len(cells)} values, expected {ncols}", line=lineno + 1
            )
        for cell in cells:
            try:
                values.append(float(cell))
            except ValueError:
                raise DemParseError(f"non-numeric cell {cell!r}", line=lineno + 1) from None
        rows_seen += 1
    if rows_seen != nrows:
        raise DemParseError(
            f"expected {nrows} data rows, got {rows_seen}", line=len(lines)
        )
    try:
        return DemGrid(
            ncols=ncols,
            nrows=nrows,
            xllcorner=headers["xllcorner"],
            yllcorner=headers["yllcorner"],
            cellsize=headers["cellsize"],
            nodata_value=headers["nodata_value"],
            values=tuple(values),
        )
    except ValueError as exc:
        raise DemParseError(str(exc), line=1) from None


def dem_elevation(grid: DemGrid, p: GeoPoint) -> float:
    """Bilinear interpolation between the four surrounding cell centers.

    The queryable area is the rectangle spanned by the outermost cell
    centers; outside it a bounds error is raised, and any nodata neighbor
    raises a nodata error naming the storage cell.
    """
    x0 = grid.xllcorner + grid.cellsize / 2.0
    y0 = grid.yllcorner + grid.cellsize / 2.0
    fx = (p.lng - x0) / grid.cellsize
    fy = (p.lat - y0) / grid.cellsize
    if not (0.0 <= fx <= grid.ncols - 1 and 0.0 <= fy <= grid.nrows - 1):
        raise DemBoundsError(
            f"point ({p.lat}, {p.lng}) outside DEM coverage "
            f"[{y0}, {y0 + (grid.nrows - 1) * grid.cellsize}] x "
            f"[{x0}, {x0 + (grid.ncols - 1) * grid.cellsize}]"
        )
    c0 = min(int(math.floor(fx)), grid.ncols - 2) if grid.ncols > 1 else 0
    s0 = min(int(math.floor(fy)), grid.nrows - 2) if grid.nrows > 1 else 0
    tx = fx - c0
    ty = fy - s0
    c1 = min(c0 + 1, grid.ncols - 1)
    s1 = min(s0 + 1, grid.nrows - 1)

    # A neighbor with zero weight (query on a stencil edge) cannot corrupt
    # the value, so only contributing cells are checked for nodata.
    total = 0.0
    for col, south_row, weight in (
        (c0, s0, (1.0 - tx) * (1.0 - ty)),
        (c1, s0, tx * (1.0 - ty)),
        (c0, s1, (1.0 - tx) * ty),
        (c1, s1, tx * ty),
    ):
        if weight == 0.0:
            continue
        row = grid.nrows - 1 - south_row
        v = grid.value_at(col, row)
        if v == grid.nodata_value:
            raise DemNodataError(col, row)
        total += weight * v
    return total


class ElevationProvider(Protocol):
    def elevations(self, points: Sequence[GeoPoint]) -> list[ElevationSample]:
        """Resolve every point, in order, or raise; never partial output."""
        ...


class DemProvider:
    """Provider backed by an in-memory DEM grid."""

    def __init__(self, grid: DemGrid):
        self._grid = grid

    def elevations(self, points: Sequence[GeoPoint]) -> list[ElevationSample]:
        return [
            ElevationSample(point=p, elevation=dem_elevation(self._grid, p), source="dem")
            for p in points
        ]


class RemoteProvider:
    """Client for an elevation service speaking the documented JSON shape.

    One GET per batch with locations as "lat,lng|lat,lng|...". Network and
    HTTP failures are flagged as transport errors so callers can decide to
    retry; a body with status != "OK" is a terminal service refusal. Error
    messages never include request parameters, only the endpoint path.
    """

    def __init__(
        self,
        url: str,
        api_key: str | None = None,
        session: requests.Session | None = None,
        timeout: float = 10.0,
    ):
        self._url = url
        self._api_key = api_key
        self._session = session if session is not None else requests.Session()
        self._timeout = timeout

    def elevations(self, points: Sequence[GeoPoint]) -> list[ElevationSample]:
        params = {"locations": "|".join(f"{p.lat!r},{p.lng!r}" for p in points)}
        if self._api_key:
            params["key"] = self._api_key
        try:
            response = self._session.get(self._url, params=params, timeout=self._timeout)
        except requests.RequestException as exc:
            raise ElevationProviderError(
                f"request to {self._url} failed: {type(exc).__name__}",
                unresolved=tuple(points),
                transport=True,
            ) from None
        if response.status_code != 200:
            raise ElevationProviderError(
                f"HTTP {response.status_code} from {self._url}",
                unresolved=tuple(points),
                transport=True,
            )
        try:
            body = response.json()
        except ValueError:
            raise ElevationProviderError(
                f"non-JSON body from {self._url}",
                unresolved=tuple(points),
                transport=False,
            ) from None
        return _parse_remote_body(body, points, self._url)


def _parse_remote_body(
    body: object, points: Sequence[GeoPoint], url: str
) -> list[ElevationSample]:
    def fail(message: str) -> ElevationProviderError:
        return ElevationProviderError(message, unresolved=tuple(points), transport=False)

    if not isinstance(body, dict):
        raise fail(f"malformed body from {url}: expected object")
    status = body.get("status")
    if status != "OK":
        raise fail(f"service status {status!r} from {url}")
    results = body.get("results")
    if not isinstance(results, list) or len(results) != len(points):
        got = len(results) if isinstance(results, list) else "none"
        raise fail(f"expected {len(points)} results, got {got}")
    samples: list[ElevationSample] = []
    for i, (p, entry) in enumerate(zip(points, results)):
        try:
            loc = entry["location"]
            lat = float(loc["lat"])
            lng = float(loc["lng"])
            elevation = float(entry["elevation"])
        except (KeyError, TypeError, ValueError):
            raise fail(f"malformed result at index {i}") from None
        if abs(lat - p.lat) > 1e-4 or abs(lng - p.lng) > 1e-4:
            raise fail(f"result {i} location does not match request")
        if not math.isfinite(elevation):
            raise fail(f"non-finite elevation at index {i}")
        samples.append(ElevationSample(point=p, elevation=elevation, source="remote"))
    return samples


def _quantize(p: GeoPoint) -> tuple[int, int]:
    return (round(p.lat * 1e5), round(p.lng * 1e5))


class ElevationCache:
    """Point-keyed elevation store, quantized to the 1e-5 degree grid.

    Safe for concurrent lookups and inserts; equal-key writes are
    last-write-wins. Persists as newline-delimited "lat,lng,elevation".
    """

    def __init__(self):
        self._data: dict[tuple[int, int], float] = {}
        self._lock = threading.Lock()

    def get(self, p: GeoPoint) -> float | None:
        return self._data.get(_quantize(p))

    def put(self, p: GeoPoint, elevation: float) -> None:
        if not math.isfinite(elevation):
            raise ValueError(f"non-finite elevation {elevation}")
        with self._lock:
            self._data[_quantize(p)] = elevation

    def __len__(self) -> int:
        return len(self._data)

    @classmethod
    def load(cls, path: str) -> "ElevationCache":
        cache = cls()
        with open(path, "r", encoding="ascii") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise ValueError(f"{path}:{lineno}: expected lat,lng,elevation")
                try:
                    lat, lng, elevation = (float(s) for s in parts)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: non-numeric field") from None
                cache.put(GeoPoint(lat, lng), elevation)
        return cache

    def save(self, path: str) -> None:
        with self._lock:
            snapshot = sorted(self._data.items())
        with open(path, "w", encoding="ascii") as fh:
            for (qlat, qlng), elevation in snapshot:
                fh.write(f"{qlat / 1e5:.5f},{qlng / 1e5:.5f},{elevation!r}\n")


class CachingProvider:
    """Wraps another provider with a read-through cache.

    Hits are answered locally and tagged source="cache"; misses go to the
    inner provider in one batch and are written back. Values for identical
    inputs are the same warm or cold.
    """

    def __init__(self, inner: ElevationProvider, cache: ElevationCache):
        self._inner = inner
        self._cache = cache

    def elevations(self, points: Sequence[GeoPoint]) -> list[ElevationSample]:
        resolved: dict[int, ElevationSample] = {}
        misses: list[tuple[int, GeoPoint]] = []
        for i, p in enumerate(points):
            hit = self._cache.get(p)
            if hit is None:
                misses.append((i, p))
            else:
                resolved[i] = ElevationSample(point=p, elevation=hit, source="cache")
        if misses:
            fetched = self._inner.elevations([p for _, p in misses])
            for (i, p), sample in zip(misses, fetched):
                self._cache.put(p, sample.elevation)
                resolved[i] = sample
        return [resolved[i] for i in range(len(points))]


def fetch_elevations(
    provider: ElevationProvider, points: Sequence[GeoPoint]
) -> list[ElevationSample]:
    """Resolve elevations for every point, in input order.

    All-or-nothing: any unresolved point raises instead of returning a
    partial list.
    """
    if not points:
        raise ValueError("empty point list")
    samples = provider.elevations(points)
    if len(samples) != len(points):
        raise ElevationProviderError(
            f"provider returned {len(samples)} samples for {len(points)} points",
            unresolved=tuple(points),
        )
    return samples


def attach_elevations(route: Route, provider: ElevationProvider) -> Route:
    """Return the same geometry with every point's elevation set.

    The provider is authoritative: existing elevations are overwritten.
    """
    samples = fetch_elevations(provider, [pt.position for pt in route.points])
    points = tuple(
        RoutePoint(position=pt.position, elevation=sample.elevation)
        for pt, sample in zip(route.points, samples)
    )
    return Route(points=points, id=route.id)
