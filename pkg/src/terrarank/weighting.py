"""Per-segment environmental weights and weighted distance/time sums.

A route is treated as consecutive segments j->k. Each segment gets a
dimensionless weight w_jk >= 0 and the route's weighted distance is
sum(w_jk * d_jk). With all weights 1 this reduces to plain path length,
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import MissingElevationError
from .geo import Route, haversine_distance, path_length

FACTORS = ("slope", "traffic", "road_quality", "unit")
GRADE_MODES = ("absolute", "uphill_only")


@dataclass(frozen=True)
class WeightSpec:
    """Which environmental factor to weight by, and how hard.

    alpha scales the slope penalty: w = 1 + alpha * grade. grade_mode
    "absolute" charges climbs and descents alike; "uphill_only" discounts
    descents entirely.
    """

    factor: str = "slope"
    alpha: float = 10.0
    grade_mode: str = "absolute"

    def __post_init__(self):
        if self.factor not in FACTORS:
            raise ValueError(f"unknown factor {self.factor!r}, expected one of {FACTORS}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha}")
        if self.grade_mode not in GRADE_MODES:
            raise ValueError(
                f"unknown grade_mode {self.grade_mode!r}, expected one of {GRADE_MODES}"
            )


@dataclass(frozen=True)
class SegmentWeight:
    """One segment's weight, length, and signed elevation change."""

    w: float
    d: float
    delta_e: float

    def __post_init__(self):
        if not (math.isfinite(self.w) and self.w >= 0):
            raise ValueError(f"weight must be finite and >= 0, got {self.w}")
        if not (math.isfinite(self.d) and self.d >= 0):
            raise ValueError(f"segment length must be finite and >= 0, got {self.d}")


def slope_weight(e_j: float, e_k: float, d_jk: float, spec: WeightSpec) -> float:
    """Weight for one segment from its elevation change and length.

    Returns 1 + alpha * g where g is the grade |e_k - e_j| / d_jk, or the
    uphill part only under grade_mode="uphill_only". Zero-length segments
    weigh 1: they contribute nothing to any weighted sum.
    """
    if spec.factor != "slope":
        raise ValueError(f"slope_weight needs factor='slope', got {spec.factor!r}")
    if not (math.isfinite(e_j) and math.isfinite(e_k)):
        raise ValueError(f"non-finite elevation ({e_j}, {e_k})")
    if not (math.isfinite(d_jk) and d_jk >= 0):
        raise ValueError(f"segment length must be finite and >= 0, got {d_jk}")
    if d_jk == 0.0:
        return 1.0
    rise = e_k - e_j
    if spec.grade_mode == "uphill_only":
        grade = max(0.0, rise) / d_jk
    else:
        grade = abs(rise) / d_jk
    return 1.0 + spec.alpha * grade


def _require_elevations(route: Route) -> None:
    for i, pt in enumerate(route.points):
        if pt.elevation is None:
            raise MissingElevationError(i)


def _check_scores(route: Route, scores: Sequence[float] | None) -> Sequence[float]:
    n_segments = len(route.points) - 1
    if scores is None:
        raise ValueError("traffic/road_quality weighting needs per-segment scores")
    if len(scores) != n_segments:
        raise ValueError(f"expected {n_segments} scores, got {len(scores)}")
    for s in scores:
        if not (math.isfinite(s) and s >= 0):
            raise ValueError(f"scores must be finite and >= 0, got {s}")
    return scores


def segment_weights(
    route: Route, spec: WeightSpec, scores: Sequence[float] | None = None
) -> list[SegmentWeight]:
    """Per-segment decomposition: n entries for an (n+1)-point route.

    factor="slope" derives weights from the route's own elevations;
    "traffic" and "road_quality" take externally supplied per-segment
    scores as the weights verbatim; "unit" weighs everything 1.
    """
    if spec.factor == "slope":
        _require_elevations(route)
    elif spec.factor in ("traffic", "road_quality"):
        scores = _check_scores(route, scores)
    out: list[SegmentWeight] = []
    for i, (a, b) in enumerate(zip(route.points, route.points[1:])):
        d = haversine_distance(a.position, b.position)
        if a.elevation is not None and b.elevation is not None:
            delta_e = b.elevation - a.elevation
        else:
            delta_e = 0.0
        if spec.factor == "slope":
            w = slope_weight(a.elevation, b.elevation, d, spec)
        elif spec.factor == "unit":
            w = 1.0
        else:
            w = float(scores[i])
        out.append(SegmentWeight(w=w, d=d, delta_e=delta_e))
    return out


def weighted_distance(
    route: Route, spec: WeightSpec, scores: Sequence[float] | None = None
) -> float:
    """sum(w_jk * d_jk) over consecutive segments, left to right.

    With factor="unit" this equals path_length(route) exactly: same
    distances, same accumulation order, and 1.0 * d == d.
    """
    total = 0.0
    for seg in segment_weights(route, spec, scores):
        total += seg.w * seg.d
    return total


def weighted_time(segment_times: Sequence[float], weights: Sequence[float]) -> float:
    """sum(w_jk * t_jk) over per-segment travel times, left to right."""
    if not segment_times or not weights:
        raise ValueError("segment_times and weights must be non-empty")
    if len(segment_times) != len(weights):
        raise ValueError(
            f"{len(segment_times)} times vs {len(weights)} weights"
        )
    total = 0.0
    for t, w in zip(segment_times, weights):
        if not (math.isfinite(t) and t >= 0):
            raise ValueError(f"times must be finite and >= 0, got {t}")
        if not (math.isfinite(w) and w >= 0):
            raise ValueError(f"weights must be finite and >= 0, got {w}")
        total += w * t
    return total


__all__ = [
    "FACTORS",
    "GRADE_MODES",
    "SegmentWeight",
    "WeightSpec",
    "path_length",
    "segment_weights",
    "slope_weight",
    "weighted_distance",
    "weighted_time",
]
