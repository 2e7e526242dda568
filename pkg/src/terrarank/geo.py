"""Geodesic types, great-circle distance, polyline codec, and resampling.

All positions are WGS84 latitude/longitude degrees; distances are meters on
a sphere of mean Earth radius. Everything here is immutable and pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PolylineError

EARTH_RADIUS_M = 6371008.8

# Interchange precision for encoded polylines: 1e-5 degrees (~1.1 m).
_E5 = 1e5


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude position in degrees.

    Latitude outside [-90, +90] is rejected; longitude is normalized into
    [-180, +180) at construction.
    """

    lat: float
    lng: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lng)):
            raise ValueError(f"non-finite coordinate ({self.lat}, {self.lng})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, +90]")
        lng = math.fmod(self.lng, 360.0)
        if lng < -180.0:
            lng += 360.0
        elif lng >= 180.0:
            lng -= 360.0
        object.__setattr__(self, "lng", lng)


@dataclass(frozen=True)
class RoutePoint:
    """A route vertex: position plus optional elevation in meters."""

    position: GeoPoint
    elevation: float | None = None

    def __post_init__(self):
        if self.elevation is not None and not math.isfinite(self.elevation):
            raise ValueError(f"non-finite elevation {self.elevation}")


@dataclass(frozen=True)
class Route:
    """An ordered point sequence from start to destination.

    Consecutive points at identical positions are collapsed at construction
    (keeping the first), so zero-length segments cannot appear downstream.
    At least two distinct-position points must remain.
    """

    points: tuple[RoutePoint, ...]
    id: str = "route"

    def __post_init__(self):
        collapsed: list[RoutePoint] = []
        for pt in self.points:
            if collapsed and collapsed[-1].position == pt.position:
                continue
            collapsed.append(pt)
        if len(collapsed) < 2:
            raise ValueError("route needs at least two distinct points")
        object.__setattr__(self, "points", tuple(collapsed))

    @classmethod
    def from_positions(cls, positions, id: str = "route") -> "Route":
        """Build a route from bare GeoPoints (no elevations)."""
        return cls(points=tuple(RoutePoint(p) for p in positions), id=id)


def haversine_distance(p: GeoPoint, q: GeoPoint) -> float:
    """Great-circle distance between two points, in meters.

    Symmetric in its arguments and zero exactly when the points are equal.
    """
    phi1 = math.radians(p.lat)
    phi2 = math.radians(q.lat)
    dphi = math.radians(q.lat - p.lat)
    dlam = math.radians(q.lng - p.lng)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(min(1.0, a)))


def path_length(route: Route) -> float:
    """Sum of consecutive-pair great-circle distances, start to destination."""
    total = 0.0
    for a, b in zip(route.points, route.points[1:]):
        total += haversine_distance(a.position, b.position)
    return total


def _read_varint(encoded: str, index: int) -> tuple[int, int]:
    """Read one zigzag-encoded value; returns (signed delta, next index)."""
    result = 0
    shift = 0
    while True:
        if index >= len(encoded):
            raise PolylineError("truncated chunk sequence", offset=index)
        chunk = ord(encoded[index]) - 63
        if not 0 <= chunk <= 63:
            raise PolylineError(f"invalid character {encoded[index]!r}", offset=index)
        index += 1
        result |= (chunk & 0x1F) << shift
        if chunk < 0x20:
            break
        shift += 5
        if shift > 30:
            raise PolylineError("coordinate delta overflow", offset=index)
    if result & 1:
        return ~(result >> 1), index
    return result >> 1, index


def decode_polyline(encoded: str) -> list[GeoPoint]:
    """Decode an encoded polyline into points on the 1e-5 degree grid.

    Raises PolylineError naming the byte offset on truncated or overflowing
    chunk sequences.
    """
    points: list[GeoPoint] = []
    index = 0
    lat = 0
    lng = 0
    while index < len(encoded):
        dlat, index = _read_varint(encoded, index)
        dlng, index = _read_varint(encoded, index)
        lat += dlat
        lng += dlng
        points.append(GeoPoint(lat / _E5, lng / _E5))
    return points


def _write_varint(value: int, out: list[str]) -> None:
    value = value << 1
    if value < 0:
        value = ~value
    while value >= 0x20:
        out.append(chr((0x20 | (value & 0x1F)) + 63))
        value >>= 5
    out.append(chr(value + 63))


def encode_polyline(points) -> str:
    """Encode points as a polyline string after 1e-5 quantization."""
    out: list[str] = []
    prev_lat = 0
    prev_lng = 0
    for p in points:
        lat = int(round(p.lat * _E5))
        lng = int(round(p.lng * _E5))
        _write_varint(lat - prev_lat, out)
        _write_varint(lng - prev_lng, out)
        prev_lat = lat
        prev_lng = lng
    return "".join(out)


def _to_unit_vector(p: GeoPoint) -> tuple[float, float, float]:
    phi = math.radians(p.lat)
    lam = math.radians(p.lng)
    return (math.cos(phi) * math.cos(lam), math.cos(phi) * math.sin(lam), math.sin(phi))


def _from_unit_vector(x: float, y: float, z: float) -> GeoPoint:
    lat = math.degrees(math.atan2(z, math.hypot(x, y)))
    lng = math.degrees(math.atan2(y, x))
    return GeoPoint(lat, lng)


def _slerp(p: GeoPoint, q: GeoPoint, t: float) -> GeoPoint:
    """Interpolate along the great circle from p (t=0) to q (t=1)."""
    ux, uy, uz = _to_unit_vector(p)
    vx, vy, vz = _to_unit_vector(q)
    dot = ux * vx + uy * vy + uz * vz
    cx = uy * vz - uz * vy
    cy = uz * vx - ux * vz
    cz = ux * vy - uy * vx
    omega = math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), dot)
    if omega < 1e-12:
        wx = ux + (vx - ux) * t
        wy = uy + (vy - uy) * t
        wz = uz + (vz - uz) * t
    else:
        s = math.sin(omega)
        a = math.sin((1.0 - t) * omega) / s
        b = math.sin(t * omega) / s
        wx = a * ux + b * vx
        wy = a * uy + b * vy
        wz = a * uz + b * vz
    return _from_unit_vector(wx, wy, wz)


def resample_route(route: Route, max_interval: float) -> Route:
    """Insert great-circle-interpolated points so no segment exceeds max_interval.

    Original points are kept in order; inserted points carry no elevation.
    A route already satisfying the interval is returned unchanged.
    """
    if not (math.isfinite(max_interval) and max_interval > 0):
        raise ValueError(f"max_interval must be > 0, got {max_interval}")
    out: list[RoutePoint] = [route.points[0]]
    changed = False
    for a, b in zip(route.points, route.points[1:]):
        d = haversine_distance(a.position, b.position)
        if d > max_interval:
            segments = math.ceil(d / max_interval)
            for i in range(1, segments):
                out.append(RoutePoint(_slerp(a.position, b.position, i / segments)))
            changed = True
        out.append(b)
    if not changed:
        return route
    return Route(points=tuple(out), id=route.id)


def route_to_geojson(route: Route) -> dict:
    """GeoJSON LineString with [lng, lat] order.

    When any point carries an elevation, an "elevations" member parallel to
    the coordinates is included (null for points without one).
    """
    geometry: dict = {
        "type": "LineString",
        "coordinates": [[p.position.lng, p.position.lat] for p in route.points],
    }
    if any(p.elevation is not None for p in route.points):
        geometry["elevations"] = [p.elevation for p in route.points]
    return geometry
