"""Candidate route sources: local graph search and a directions client.

The local side loads a small road graph from JSON, runs Dijkstra with
deterministic tie-breaking, and generates alternatives by iteratively
penalizing edges of already-found paths. The remote side decodes encoded
polylines from a directions service (or a file-backed mock of one).
"""

from __future__ import annotations

import heapq
import json
import math
import pathlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import requests

from .errors import DirectionsProviderError, NoRouteError, PolylineError
from .geo import GeoPoint, Route, decode_polyline, haversine_distance

# cost function signature: (u, v, length) -> positive finite cost
EdgeCost = Callable[[int, int, float], float]

SOURCES = ("local", "provider", "file")


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    length: float
    bidirectional: bool = True

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"self-loop at node {self.u}")
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValueError(f"edge {self.u}-{self.v} length must be > 0, got {self.length}")


@dataclass(frozen=True)
class RoadGraph:
    """Immutable road network with integer node ids.

    Adjacency is precomputed at construction, neighbors sorted by id so
    traversals are reproducible.
    """

    nodes: dict[int, GeoPoint]
    edges: tuple[GraphEdge, ...]
    _adj: dict[int, tuple[tuple[int, float, int], ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("graph has no nodes")
        adj: dict[int, list[tuple[int, float, int]]] = {n: [] for n in self.nodes}
        for idx, e in enumerate(self.edges):
            if e.u not in self.nodes or e.v not in self.nodes:
                raise ValueError(f"edge {e.u}-{e.v} references unknown node")
            adj[e.u].append((e.v, e.length, idx))
            if e.bidirectional:
                adj[e.v].append((e.u, e.length, idx))
        frozen = {n: tuple(sorted(lst)) for n, lst in adj.items()}
        object.__setattr__(self, "_adj", frozen)

    def neighbors(self, node: int) -> tuple[tuple[int, float, int], ...]:
        """(neighbor id, edge length, edge index) triples, id-sorted."""
        return self._adj[node]


def load_road_graph(text: str) -> RoadGraph:
    """Parse the JSON graph format.

    {"nodes": [{"id", "lat", "lng"}, ...],
     "edges": [{"u", "v", "length"?, "bidirectional"?}, ...]}

    Edges without a length get the haversine distance between their
    endpoints; bidirectional defaults to true.
    """
    try:
        body = json.loads(text)
    except ValueError as exc:
        raise ValueError(f"graph is not valid JSON: {exc}") from None
    if not isinstance(body, dict) or "nodes" not in body or "edges" not in body:
        raise ValueError('graph JSON needs "nodes" and "edges" arrays')
    nodes: dict[int, GeoPoint] = {}
    for entry in body["nodes"]:
        try:
            node_id = int(entry["id"])
            point = GeoPoint(float(entry["lat"]), float(entry["lng"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad node entry {entry!r}: {exc}") from None
        if node_id in nodes:
            raise ValueError(f"duplicate node id {node_id}")
        nodes[node_id] = point
    edges: list[GraphEdge] = []
    for entry in body["edges"]:
        try:
            u = int(entry["u"])
            v = int(entry["v"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad edge entry {entry!r}: {exc}") from None
        if u not in nodes or v not in nodes:
            raise ValueError(f"edge {u}-{v} references unknown node")
        length = entry.get("length")
        if length is None:
            length = haversine_distance(nodes[u], nodes[v])
        edges.append(
            GraphEdge(
                u=u,
                v=v,
                length=float(length),
                bidirectional=bool(entry.get("bidirectional", True)),
            )
        )
    return RoadGraph(nodes=nodes, edges=tuple(edges))


@dataclass(frozen=True)
class CandidateSet:
    """Routes between one origin/destination pair, from one source."""

    origin: GeoPoint
    destination: GeoPoint
    routes: tuple[Route, ...]
    source: str

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if not self.routes:
            raise ValueError("candidate set needs at least one route")
        for r in self.routes:
            start = r.points[0].position
            end = r.points[-1].position
            if abs(start.lat - self.origin.lat) > 1e-9 or abs(start.lng - self.origin.lng) > 1e-9:
                raise ValueError(f"route {r.id} does not start at the origin")
            if (
                abs(end.lat - self.destination.lat) > 1e-9
                or abs(end.lng - self.destination.lng) > 1e-9
            ):
                raise ValueError(f"route {r.id} does not end at the destination")


def _default_cost(u: int, v: int, length: float) -> float:
    return length


def shortest_path_nodes(
    graph: RoadGraph, src: int, dst: int, edge_cost: EdgeCost | None = None
) -> list[int]:
    """Minimum-cost node sequence from src to dst.

    Ties on the frontier pop the lower node id; a node's parent changes
    only on strict cost improvement, so equal inputs always give equal
    paths.
    """
    if src not in graph.nodes or dst not in graph.nodes:
        raise ValueError(f"unknown node id in query ({src}, {dst})")
    if src == dst:
        raise NoRouteError(f"degenerate query: src == dst == {src}")
    cost_fn = edge_cost if edge_cost is not None else _default_cost
    dist: dict[int, float] = {src: 0.0}
    parent: dict[int, int] = {}
    done: set[int] = set()
    frontier: list[tuple[float, int]] = [(0.0, src)]
    while frontier:
        d, node = heapq.heappop(frontier)
        if node in done:
            continue
        if node == dst:
            break
        done.add(node)
        for neighbor, length, _ in graph.neighbors(node):
            if neighbor in done:
                continue
            c = cost_fn(node, neighbor, length)
            if not (math.isfinite(c) and c > 0):
                raise ValueError(f"edge cost for {node}->{neighbor} must be > 0, got {c}")
            candidate = d + c
            if neighbor not in dist or candidate < dist[neighbor]:
                dist[neighbor] = candidate
                parent[neighbor] = node
                heapq.heappush(frontier, (candidate, neighbor))
    if dst not in dist:
        raise NoRouteError(f"no path from node {src} to node {dst}")
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def _route_from_nodes(graph: RoadGraph, path: Sequence[int], id: str) -> Route:
    return Route.from_positions([graph.nodes[n] for n in path], id=id)


def dijkstra(
    graph: RoadGraph, src: int, dst: int, edge_cost: EdgeCost | None = None
) -> Route:
    """Minimum-total-cost path as a route through node positions."""
    path = shortest_path_nodes(graph, src, dst, edge_cost)
    return _route_from_nodes(graph, path, id="route")


def _graph_length(graph: RoadGraph, path: Sequence[int]) -> float:
    """Unpenalized length of a node path: cheapest edge per hop."""
    total = 0.0
    for a, b in zip(path, path[1:]):
        total += min(length for n, length, _ in graph.neighbors(a) if n == b)
    return total


def k_alternatives(
    graph: RoadGraph,
    src: int,
    dst: int,
    k: int = 3,
    penalty: float = 1.3,
    edge_cost: EdgeCost | None = None,
) -> CandidateSet:
    """Up to k distinct routes by iterative edge penalization.

    Each round runs Dijkstra, then multiplies the cost of every edge on
    the found path by `penalty` and tries again; geometric duplicates are
    dropped. This mimics how alternatives feel in practice; it is not any
    provider's actual algorithm. Output is sorted by unpenalized length
    ascending, so the first route is the true shortest path.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not (math.isfinite(penalty) and penalty > 1):
        raise ValueError(f"penalty must be > 1, got {penalty}")
    base_cost = edge_cost if edge_cost is not None else _default_cost
    multiplier: dict[int, float] = {}

    def cheapest_edge(u: int, v: int) -> tuple[int, float]:
        """Lowest-penalized-cost edge u->v among parallel edges."""
        best_idx = -1
        best = math.inf
        for neighbor, length, idx in graph.neighbors(u):
            if neighbor != v:
                continue
            c = base_cost(u, v, length) * multiplier.get(idx, 1.0)
            if c < best:
                best = c
                best_idx = idx
        return best_idx, best

    def penalized(u: int, v: int, length: float) -> float:
        return cheapest_edge(u, v)[1]

    found: list[list[int]] = []
    seen: set[tuple[int, ...]] = set()
    max_rounds = 8 * k
    for _ in range(max_rounds):
        try:
            path = shortest_path_nodes(graph, src, dst, penalized)
        except NoRouteError:
            if not found:
                raise
            break
        key = tuple(path)
        if key not in seen:
            seen.add(key)
            found.append(path)
            if len(found) == k:
                break
        for a, b in zip(path, path[1:]):
            idx, _ = cheapest_edge(a, b)
            if idx >= 0:
                multiplier[idx] = multiplier.get(idx, 1.0) * penalty

    order = sorted(range(len(found)), key=lambda i: (_graph_length(graph, found[i]), i))
    routes = tuple(
        _route_from_nodes(graph, found[i], id=f"route{rank}")
        for rank, i in enumerate(order)
    )
    return CandidateSet(
        origin=graph.nodes[src],
        destination=graph.nodes[dst],
        routes=routes,
        source="local",
    )


def snap_to_graph(graph: RoadGraph, p: GeoPoint) -> int:
    """Nearest node id by great-circle distance; ties take the lowest id."""
    return min(
        graph.nodes, key=lambda n: (haversine_distance(graph.nodes[n], p), n)
    )


class DirectionsClient:
    """Fetches candidate routes as the documented JSON wire subset.

    {"status": "OK", "routes": [{"overview_polyline": {"points": "..."}}]}

    A file:// URL serves the same shape from disk for offline use; the
    file's content is returned as-is regardless of the requested
    endpoints. Error messages never include request parameters.
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
        self._session = session
        self._timeout = timeout

    @property
    def is_file_backed(self) -> bool:
        return self._url.startswith("file://")

    def fetch(self, origin: GeoPoint, destination: GeoPoint) -> dict:
        if self.is_file_backed:
            path = pathlib.Path(self._url[len("file://"):])
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise DirectionsProviderError(
                    f"cannot read {path}: {type(exc).__name__}", transport=True
                ) from None
            try:
                return json.loads(text)
            except ValueError:
                raise DirectionsProviderError(f"non-JSON body in {path}") from None
        params = {
            "origin": f"{origin.lat!r},{origin.lng!r}",
            "destination": f"{destination.lat!r},{destination.lng!r}",
        }
        if self._api_key:
            params["key"] = self._api_key
        session = self._session if self._session is not None else requests.Session()
        try:
            response = session.get(self._url, params=params, timeout=self._timeout)
        except requests.RequestException as exc:
            raise DirectionsProviderError(
                f"request to {self._url} failed: {type(exc).__name__}", transport=True
            ) from None
        if response.status_code != 200:
            raise DirectionsProviderError(
                f"HTTP {response.status_code} from {self._url}", transport=True
            )
        try:
            return response.json()
        except ValueError:
            raise DirectionsProviderError(f"non-JSON body from {self._url}") from None


def fetch_provider_routes(
    client: DirectionsClient,
    origin: GeoPoint | None = None,
    destination: GeoPoint | None = None,
    k: int = 3,
) -> CandidateSet:
    """Decode up to k provider routes, provider order preserved.

    With origin/destination omitted (the file-mock case) the endpoints are
    taken from the first decoded route. All-or-nothing: any undecodable
    polyline or non-OK status fails the whole set.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query_origin = origin if origin is not None else GeoPoint(0.0, 0.0)
    query_destination = destination if destination is not None else GeoPoint(0.0, 0.0)
    body = client.fetch(query_origin, query_destination)
    if not isinstance(body, dict):
        raise DirectionsProviderError("malformed body: expected object")
    status = body.get("status")
    if status != "OK":
        raise DirectionsProviderError(f"service status {status!r}", status=status)
    raw_routes = body.get("routes")
    if not isinstance(raw_routes, list) or not raw_routes:
        raise DirectionsProviderError('missing or empty "routes"')
    routes: list[Route] = []
    for i, entry in enumerate(raw_routes[:k]):
        try:
            encoded = entry["overview_polyline"]["points"]
        except (KeyError, TypeError):
            raise DirectionsProviderError(f"route {i} lacks overview_polyline.points") from None
        try:
            points = decode_polyline(encoded)
        except PolylineError as exc:
            raise DirectionsProviderError(f"route {i} polyline: {exc}") from None
        if len(points) < 2:
            raise DirectionsProviderError(f"route {i} has fewer than 2 points")
        routes.append(Route.from_positions(points, id=f"route{i}"))
    return CandidateSet(
        origin=origin if origin is not None else routes[0].points[0].position,
        destination=destination if destination is not None else routes[0].points[-1].position,
        routes=tuple(routes),
        source="file" if client.is_file_backed else "provider",
    )
