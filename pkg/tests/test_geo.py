"""Geodesy and polyline codec tests.

The distance implementation is checked against an independently coded
spherical-law-of-cosines oracle rather than against itself.
"""

import math
import random

import pytest

from terrarank.errors import PolylineError
from terrarank.geo import (
    EARTH_RADIUS_M,
    GeoPoint,
    Route,
    RoutePoint,
    decode_polyline,
    encode_polyline,
    haversine_distance,
    path_length,
    resample_route,
    route_to_geojson,
)


def sloc_distance(p: GeoPoint, q: GeoPoint) -> float:
    """Spherical law of cosines; independent of the haversine form."""
    phi1 = math.radians(p.lat)
    phi2 = math.radians(q.lat)
    dlam = math.radians(q.lng - p.lng)
    c = math.sin(phi1) * math.sin(phi2) + math.cos(phi1) * math.cos(phi2) * math.cos(dlam)
    return EARTH_RADIUS_M * math.acos(max(-1.0, min(1.0, c)))


class TestGeoPoint:
    def test_valid_construction(self):
        p = GeoPoint(35.07946, 137.15692)
        assert p.lat == 35.07946
        assert p.lng == 137.15692

    @pytest.mark.parametrize("lat", [90.0001, -90.0001, 180.0, float("nan"), float("inf")])
    def test_bad_latitude_rejected(self, lat):
        with pytest.raises(ValueError):
            GeoPoint(lat, 0.0)

    @pytest.mark.parametrize(
        "given,expected",
        [(180.0, -180.0), (-180.0, -180.0), (360.0, 0.0), (190.0, -170.0), (-540.0, -180.0), (725.0, 5.0)],
    )
    def test_longitude_normalized(self, given, expected):
        assert GeoPoint(0.0, given).lng == pytest.approx(expected, abs=1e-12)
        assert -180.0 <= GeoPoint(0.0, given).lng < 180.0

    def test_in_range_longitude_untouched(self):
        assert GeoPoint(10.0, 137.15692).lng == 137.15692

    def test_frozen(self):
        p = GeoPoint(1.0, 2.0)
        with pytest.raises(AttributeError):
            p.lat = 3.0


class TestHaversine:
    def test_zero_for_identical_points(self):
        p = GeoPoint(35.1, 137.2)
        assert haversine_distance(p, p) == 0.0

    def test_symmetric_to_the_last_bit(self):
        rng = random.Random(20260822)
        for _ in range(500):
            p = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
            q = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
            assert haversine_distance(p, q) == haversine_distance(q, p)

    def test_agrees_with_law_of_cosines_oracle(self):
        # The two formulas share no code path; 0.01 m agreement on pairs
        # separated by >=1 km pins the trig and the radius constant.
        rng = random.Random(1234)
        checked = 0
        while checked < 300:
            p = GeoPoint(rng.uniform(-80, 80), rng.uniform(-180, 180))
            q = GeoPoint(rng.uniform(-80, 80), rng.uniform(-180, 180))
            d = haversine_distance(p, q)
            if d < 1000.0:
                continue
            assert abs(d - sloc_distance(p, q)) < 0.01
            checked += 1

    def test_quarter_meridian(self):
        # Pole to equator along a meridian is a quarter great circle.
        d = haversine_distance(GeoPoint(0.0, 10.0), GeoPoint(90.0, 10.0))
        assert d == pytest.approx(math.pi * EARTH_RADIUS_M / 2.0, abs=1e-6)

    def test_antipodal(self):
        d = haversine_distance(GeoPoint(0.0, 0.0), GeoPoint(0.0, 180.0))
        assert d == pytest.approx(math.pi * EARTH_RADIUS_M, abs=1e-6)

    def test_small_separation_stays_accurate(self):
        # ~1.11 m apart at the equator: 1e-5 degrees of latitude.
        d = haversine_distance(GeoPoint(0.0, 0.0), GeoPoint(1e-5, 0.0))
        expected = math.radians(1e-5) * EARTH_RADIUS_M
        assert d == pytest.approx(expected, rel=1e-9)


class TestRoute:
    def test_consecutive_duplicates_collapsed(self):
        p1 = GeoPoint(35.0, 137.0)
        p2 = GeoPoint(35.001, 137.0)
        r = Route(points=(RoutePoint(p1), RoutePoint(p1), RoutePoint(p2), RoutePoint(p2)))
        assert [pt.position for pt in r.points] == [p1, p2]

    def test_first_of_duplicate_run_kept(self):
        p1 = GeoPoint(35.0, 137.0)
        p2 = GeoPoint(35.001, 137.0)
        r = Route(points=(RoutePoint(p1, elevation=12.0), RoutePoint(p1, elevation=99.0), RoutePoint(p2)))
        assert r.points[0].elevation == 12.0

    def test_too_few_distinct_points_rejected(self):
        p = GeoPoint(35.0, 137.0)
        with pytest.raises(ValueError):
            Route(points=(RoutePoint(p), RoutePoint(p)))
        with pytest.raises(ValueError):
            Route(points=(RoutePoint(p),))

    def test_path_length_sums_left_to_right(self):
        pts = [GeoPoint(0.0, 0.0), GeoPoint(0.0, 0.01), GeoPoint(0.01, 0.01)]
        r = Route.from_positions(pts)
        expected = haversine_distance(pts[0], pts[1])
        expected += haversine_distance(pts[1], pts[2])
        assert path_length(r) == expected


class TestPolylineCodec:
    # Classic published interchange vector for the 1e-5 encoding.
    VECTOR = "_p~iF~ps|U_ulLnnqC_mqNvxq`@"
    VECTOR_POINTS = [(38.5, -120.2), (40.7, -120.95), (43.252, -126.453)]

    def test_decode_known_vector(self):
        pts = decode_polyline(self.VECTOR)
        assert [(p.lat, p.lng) for p in pts] == self.VECTOR_POINTS

    def test_encode_known_vector(self):
        pts = [GeoPoint(lat, lng) for lat, lng in self.VECTOR_POINTS]
        assert encode_polyline(pts) == self.VECTOR

    def test_empty_string_decodes_to_no_points(self):
        assert decode_polyline("") == []

    def test_single_point(self):
        pts = [GeoPoint(35.07946, 137.15692)]
        assert decode_polyline(encode_polyline(pts)) == pts

    def test_roundtrip_on_grid_points(self):
        # Points already on the 1e-5 grid must survive encode/decode exactly.
        rng = random.Random(97)
        for _ in range(200):
            pts = [
                GeoPoint(rng.randrange(-9000000, 9000001) / 1e5, rng.randrange(-17999999, 18000000) / 1e5)
                for _ in range(rng.randrange(1, 12))
            ]
            assert decode_polyline(encode_polyline(pts)) == pts

    def test_quantization_error_bounded(self):
        rng = random.Random(98)
        for _ in range(100):
            pts = [GeoPoint(rng.uniform(-89, 89), rng.uniform(-179, 179)) for _ in range(5)]
            out = decode_polyline(encode_polyline(pts))
            for a, b in zip(pts, out):
                assert abs(a.lat - b.lat) <= 0.5e-5 + 1e-12
                assert abs(a.lng - b.lng) <= 0.5e-5 + 1e-12

    def test_truncated_input_reports_offset(self):
        # Drop the final chunk of the known vector: decoding must fail at
        # the end of the string, not return partial garbage.
        with pytest.raises(PolylineError) as err:
            decode_polyline(self.VECTOR[:-1])
        assert err.value.offset == len(self.VECTOR) - 1

    def test_dangling_continuation_bit(self):
        # A single chunk with the continuation bit set promises more bytes.
        with pytest.raises(PolylineError) as err:
            decode_polyline("_")
        assert err.value.offset == 1

    def test_invalid_character_rejected(self):
        with pytest.raises(PolylineError):
            decode_polyline("_p~iF" + "\x1f")

    def test_overflow_rejected(self):
        # Seven continuation chunks exceed any plausible coordinate delta.
        with pytest.raises(PolylineError):
            decode_polyline("_" * 7 + "?")


class TestResample:
    def test_short_route_returned_unchanged(self):
        r = Route.from_positions([GeoPoint(0.0, 0.0), GeoPoint(0.0, 0.0002)])
        assert resample_route(r, 30.0) is r

    def test_long_segment_subdivided(self):
        # ~1113 m along the equator; 30 m cap needs 38 pieces.
        r = Route.from_positions([GeoPoint(0.0, 0.0), GeoPoint(0.0, 0.01)])
        out = resample_route(r, 30.0)
        assert len(out.points) == 39
        for a, b in zip(out.points, out.points[1:]):
            assert haversine_distance(a.position, b.position) <= 30.0 + 1e-9

    def test_originals_kept_inserted_unelevated(self):
        r = Route(
            points=(
                RoutePoint(GeoPoint(0.0, 0.0), elevation=5.0),
                RoutePoint(GeoPoint(0.0, 0.01), elevation=7.0),
            )
        )
        out = resample_route(r, 100.0)
        assert out.points[0] == r.points[0]
        assert out.points[-1] == r.points[-1]
        assert all(p.elevation is None for p in out.points[1:-1])

    def test_inserted_points_lie_between(self):
        r = Route.from_positions([GeoPoint(10.0, 20.0), GeoPoint(10.02, 20.03)])
        out = resample_route(r, 50.0)
        total = path_length(out)
        direct = path_length(r)
        # Great-circle interpolation cannot lengthen the path noticeably.
        assert total == pytest.approx(direct, abs=1e-6)

    def test_interval_validation(self):
        r = Route.from_positions([GeoPoint(0.0, 0.0), GeoPoint(0.0, 0.01)])
        for bad in (0.0, -5.0, float("nan"), float("inf")):
            with pytest.raises(ValueError):
                resample_route(r, bad)

    def test_preserves_route_id(self):
        r = Route.from_positions([GeoPoint(0.0, 0.0), GeoPoint(0.0, 0.01)], id="r7")
        assert resample_route(r, 30.0).id == "r7"


class TestGeoJson:
    def test_lng_lat_order(self):
        r = Route.from_positions([GeoPoint(35.0, 137.0), GeoPoint(35.001, 137.002)])
        gj = route_to_geojson(r)
        assert gj["type"] == "LineString"
        assert gj["coordinates"] == [[137.0, 35.0], [137.002, 35.001]]
        assert "elevations" not in gj

    def test_elevations_member_when_present(self):
        r = Route(
            points=(
                RoutePoint(GeoPoint(35.0, 137.0), elevation=12.5),
                RoutePoint(GeoPoint(35.001, 137.002)),
            )
        )
        gj = route_to_geojson(r)
        assert gj["elevations"] == [12.5, None]
