"""Candidate re-ranking by weighted distance, profiles, and the report.

The pipeline: resample each candidate, annotate with elevations, score
original distance (od) and weighted distance (wd), then order by the
user's preference. Scores describe the scored geometry itself, so od is
exactly the path length of the route carried in each result.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .elevation import ElevationProvider, attach_elevations
from .geo import (
    Route,
    encode_polyline,
    haversine_distance,
    path_length,
    resample_route,
    route_to_geojson,
)
from .routing import CandidateSet
from .weighting import WeightSpec, segment_weights
from .errors import MissingElevationError

MODES = ("shortest", "comfort", "challenge")


@dataclass(frozen=True)
class Preference:
    """What the user optimizes for.

    shortest: plain distance. comfort: least weighted distance, avoiding
    climbs. challenge: most weighted distance, seeking them.
    """

    mode: str = "shortest"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown preference {self.mode!r}, expected one of {MODES}")


@dataclass(frozen=True)
class ElevationProfile:
    """Per-point (distance from start, elevation) pairs along a route."""

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.samples:
            raise ValueError("profile needs at least one sample")
        if self.samples[0][0] != 0.0:
            raise ValueError(f"profile must start at distance 0, got {self.samples[0][0]}")
        prev = 0.0
        for d, e in self.samples:
            if not (math.isfinite(d) and math.isfinite(e)):
                raise ValueError(f"non-finite profile sample ({d}, {e})")
            if d < prev:
                raise ValueError("profile distances must be non-decreasing")
            prev = d

    @property
    def max_elevation(self) -> float:
        return max(e for _, e in self.samples)

    @property
    def total_distance(self) -> float:
        return self.samples[-1][0]


@dataclass(frozen=True)
class RankedRoute:
    """One scored candidate and its position under the chosen preference."""

    route: Route
    od: float
    wd: float
    rank: int
    profile: ElevationProfile

    def __post_init__(self):
        if not (math.isfinite(self.od) and self.od >= 0):
            raise ValueError(f"od must be finite and >= 0, got {self.od}")
        if not (math.isfinite(self.wd) and self.wd >= 0):
            raise ValueError(f"wd must be finite and >= 0, got {self.wd}")
        if self.rank < 0:
            raise ValueError(f"rank must be >= 0, got {self.rank}")
        if len(self.profile.samples) != len(self.route.points):
            raise ValueError(
                f"profile has {len(self.profile.samples)} samples for "
                f"{len(self.route.points)} points"
            )


def elevation_profile(route: Route) -> ElevationProfile:
    """Cumulative distance from start paired with each point's elevation.

    Distances accumulate in the same order as path_length, so the final
    sample sits exactly at the route's od.
    """
    samples: list[tuple[float, float]] = []
    total = 0.0
    prev = None
    for i, pt in enumerate(route.points):
        if pt.elevation is None:
            raise MissingElevationError(i)
        if prev is not None:
            total += haversine_distance(prev.position, pt.position)
        samples.append((total, pt.elevation))
        prev = pt
    return ElevationProfile(samples=tuple(samples))


def _sort_key(mode: str):
    if mode == "shortest":
        return lambda scored: (scored[1], scored[3])
    if mode == "comfort":
        return lambda scored: (scored[2], scored[1], scored[3])
    return lambda scored: (-scored[2], scored[1], scored[3])


def rank_candidates(
    candidates: CandidateSet,
    provider: ElevationProvider,
    spec: WeightSpec,
    pref: Preference,
    resample_interval: float = 30.0,
) -> list[RankedRoute]:
    """Score every candidate and order them by the preference.

    Ties break toward smaller od, then earlier candidate position. The
    result is a permutation of the input routes: nothing invented or
    dropped.
    """
    if not candidates.routes:
        raise ValueError("empty candidate set")
    scored: list[tuple[Route, float, float, int, ElevationProfile]] = []
    for index, candidate in enumerate(candidates.routes):
        route = resample_route(candidate, resample_interval)
        route = attach_elevations(route, provider)
        od = path_length(route)
        wd = 0.0
        for seg in segment_weights(route, spec):
            wd += seg.w * seg.d
        scored.append((route, od, wd, index, elevation_profile(route)))
    scored.sort(key=_sort_key(pref.mode))
    return [
        RankedRoute(route=route, od=od, wd=wd, rank=rank, profile=profile)
        for rank, (route, od, wd, _, profile) in enumerate(scored)
    ]


def comparison_report(
    ranked: list[RankedRoute], pref: Preference, spec: WeightSpec
) -> dict:
    """Structured comparison of the ranked routes, rank order first.

    Numeric fields keep full precision; rounding to whole meters is left
    to the table renderer.
    """
    if not ranked:
        raise ValueError("empty ranking")
    ranks = sorted(r.rank for r in ranked)
    if ranks != list(range(len(ranked))):
        raise ValueError(f"ranks are not a permutation of 0..{len(ranked) - 1}: {ranks}")
    return {
        "preference": pref.mode,
        "alpha": spec.alpha,
        "routes": [
            {
                "id": r.route.id,
                "points": len(r.route.points),
                "od_m": r.od,
                "wd_m": r.wd,
                "rank": r.rank,
                "profile": {
                    "d": [d for d, _ in r.profile.samples],
                    "e": [e for _, e in r.profile.samples],
                },
                "polyline": encode_polyline([p.position for p in r.route.points]),
            }
            for r in sorted(ranked, key=lambda r: r.rank)
        ],
    }


def report_table(report: dict) -> str:
    """Plain-text table of the report with od/wd rounded to whole meters."""
    header = f"{'Rank':>4}  {'Route':<10}{'Points':>6}  {'od (m)':>8}  {'wd (m)':>8}"
    lines = [header, "-" * len(header)]
    for entry in report["routes"]:
        lines.append(
            f"{entry['rank']:>4}  {entry['id']:<10}{entry['points']:>6}  "
            f"{round(entry['od_m']):>8}  {round(entry['wd_m']):>8}"
        )
    return "\n".join(lines)


def ranked_to_geojson(ranked: list[RankedRoute]) -> dict:
    """FeatureCollection of the ranked routes, rank order, scores as properties."""
    features = []
    for r in sorted(ranked, key=lambda r: r.rank):
        features.append(
            {
                "type": "Feature",
                "geometry": route_to_geojson(r.route),
                "properties": {
                    "id": r.route.id,
                    "rank": r.rank,
                    "od_m": r.od,
                    "wd_m": r.wd,
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


def canonical_json(document: dict) -> str:
    """Deterministic JSON: sorted keys, no whitespace, shortest-round-trip floats."""
    return json.dumps(document, sort_keys=True, separators=(",", ":"), allow_nan=False)
