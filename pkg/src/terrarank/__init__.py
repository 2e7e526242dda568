"""Elevation-aware route ranking."""

from .config import AppConfig, config_to_dict, load_config, load_config_file
from .elevation import (
    CachingProvider,
    DemGrid,
    DemProvider,
    ElevationCache,
    ElevationProvider,
    ElevationSample,
    RemoteProvider,
    attach_elevations,
    dem_elevation,
    fetch_elevations,
    load_dem,
)
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
    TerrarankError,
)
from .geo import (
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
from .ranking import (
    MODES,
    ElevationProfile,
    Preference,
    RankedRoute,
    canonical_json,
    comparison_report,
    elevation_profile,
    rank_candidates,
    ranked_to_geojson,
    report_table,
)
from .routing import (
    CandidateSet,
    DirectionsClient,
    GraphEdge,
    RoadGraph,
    dijkstra,
    fetch_provider_routes,
    k_alternatives,
    load_road_graph,
    shortest_path_nodes,
    snap_to_graph,
)
from .service import Engine, build_app
from .weighting import (
    FACTORS,
    GRADE_MODES,
    SegmentWeight,
    WeightSpec,
    segment_weights,
    slope_weight,
    weighted_distance,
    weighted_time,
)

__all__ = [
    "EARTH_RADIUS_M",
    "FACTORS",
    "GRADE_MODES",
    "MODES",
    "AppConfig",
    "CachingProvider",
    "CandidateSet",
    "ConfigError",
    "DemBoundsError",
    "DemGrid",
    "DemNodataError",
    "DemParseError",
    "DemProvider",
    "DirectionsClient",
    "DirectionsProviderError",
    "ElevationCache",
    "ElevationProfile",
    "ElevationProvider",
    "ElevationProviderError",
    "ElevationSample",
    "Engine",
    "GeoPoint",
    "GraphEdge",
    "MissingElevationError",
    "NoRouteError",
    "PolylineError",
    "Preference",
    "RankedRoute",
    "RemoteProvider",
    "RoadGraph",
    "Route",
    "RoutePoint",
    "SegmentWeight",
    "TerrarankError",
    "WeightSpec",
    "attach_elevations",
    "build_app",
    "canonical_json",
    "comparison_report",
    "config_to_dict",
    "decode_polyline",
    "dem_elevation",
    "dijkstra",
    "elevation_profile",
    "encode_polyline",
    "fetch_elevations",
    "fetch_provider_routes",
    "haversine_distance",
    "k_alternatives",
    "load_config",
    "load_config_file",
    "load_dem",
    "load_road_graph",
    "path_length",
    "rank_candidates",
    "ranked_to_geojson",
    "report_table",
    "resample_route",
    "route_to_geojson",
    "segment_weights",
    "shortest_path_nodes",
    "slope_weight",
    "snap_to_graph",
    "weighted_distance",
    "weighted_time",
]

__version__ = "0.1.0"
