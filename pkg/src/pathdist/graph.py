"""Embedded street-map graphs: data model, CSV/GeoJSON I/O, statistics.

A street map is an undirected geometric graph: vertices carry planar meter
coordinates, edges carry polyline geometry oriented from their first to
their second endpoint.  Self-loops are rejected; parallel edges are allowed.
Instances are treated as immutable after construction, so they are safe to
share across worker processes.
"""

from __future__ import annotations

import csv
import json
from typing import Hashable, Iterable, Mapping, NamedTuple

import numpy as np

from .errors import ParseError, StructuralError
from .geometry import Point2D, PolyLine

__all__ = [
    "Edge",
    "EmbeddedGraph",
    "GraphStats",
    "load_graph",
    "write_graph_csv",
    "export_geojson",
    "contract_degree_two",
    "graph_stats",
]

VertexId = Hashable
EdgeId = Hashable


class Edge(NamedTuple):
    u: VertexId
    v: VertexId
    geometry: PolyLine


class GraphStats(NamedTuple):
    vertex_count: int
    vertex_count_degree_not3: int
    edge_count: int
    total_length: float


class EmbeddedGraph:
    """Planar geometric graph with polyline edges.

    ``vertices`` maps vertex id to :class:`Point2D`; ``edges`` maps edge id
    to :class:`Edge`.  Edge geometry must start at the ``u`` vertex position
    and end at the ``v`` one.  Iteration order of both mappings is the
    insertion order, which all exports and enumerations follow, so outputs
    are deterministic for a given input.
    """

    __slots__ = ("vertices", "edges", "adjacency", "_frozen_cache")

    def __init__(
        self,
        vertices: Mapping[VertexId, Point2D] | Iterable[tuple[VertexId, tuple[float, float]]],
        edges: Mapping[EdgeId, tuple] | Iterable[tuple[EdgeId, tuple]],
    ):
        vitems = vertices.items() if isinstance(vertices, Mapping) else vertices
        self.vertices: dict[VertexId, Point2D] = {}
        for vid, p in vitems:
            if vid in self.vertices:
                raise StructuralError(f"duplicate vertex id {vid!r}")
            self.vertices[vid] = Point2D(float(p[0]), float(p[1]))

        eitems = edges.items() if isinstance(edges, Mapping) else edges
        self.edges: dict[EdgeId, Edge] = {}
        self.adjacency: dict[VertexId, tuple[EdgeId, ...]] = {v: () for v in self.vertices}
        adj: dict[VertexId, list[EdgeId]] = {v: [] for v in self.vertices}
        for eid, spec in eitems:
            if eid in self.edges:
                raise StructuralError(f"duplicate edge id {eid!r}")
            u, v = spec[0], spec[1]
            if u not in self.vertices or v not in self.vertices:
                missing = u if u not in self.vertices else v
                raise StructuralError(f"edge {eid!r} references unknown vertex {missing!r}")
            if u == v:
                raise StructuralError(f"edge {eid!r} is a self-loop at {u!r}")
            geom = spec[2] if len(spec) > 2 and spec[2] is not None else None
            if geom is None:
                geom = PolyLine([self.vertices[u], self.vertices[v]])
            elif not isinstance(geom, PolyLine):
                geom = PolyLine(geom)
            if not self._touches(geom.points[0], self.vertices[u]) or not self._touches(
                geom.points[-1], self.vertices[v]
            ):
                raise StructuralError(f"edge {eid!r} geometry does not join its endpoints")
            self.edges[eid] = Edge(u, v, geom)
            adj[u].append(eid)
            adj[v].append(eid)
        self.adjacency = {v: tuple(ids) for v, ids in adj.items()}
        self._frozen_cache: dict = {}

    @staticmethod
    def _touches(pt: np.ndarray, vpos: Point2D) -> bool:
        return pt[0] == vpos.x and pt[1] == vpos.y

    def __getstate__(self):
        return (self.vertices, self.edges)

    def __setstate__(self, state):
        vertices, edges = state
        self.vertices = vertices
        self.edges = edges
        adj: dict[VertexId, list[EdgeId]] = {v: [] for v in vertices}
        for eid, e in edges.items():
            adj[e.u].append(eid)
            adj[e.v].append(eid)
        self.adjacency = {v: tuple(ids) for v, ids in adj.items()}
        self._frozen_cache = {}

    def degree(self, vid: VertexId) -> int:
        return len(self.adjacency[vid])

    def other_endpoint(self, eid: EdgeId, vid: VertexId) -> VertexId:
        e = self.edges[eid]
        return e.v if vid == e.u else e.u

    def edge_geometry_from(self, eid: EdgeId, start: VertexId) -> PolyLine:
        """Edge polyline oriented to begin at ``start``."""
        e = self.edges[eid]
        return e.geometry if start == e.u else e.geometry.reversed()

    def position(self, vid: VertexId) -> Point2D:
        return self.vertices[vid]

    def total_length(self) -> float:
        return float(sum(e.geometry.length() for e in self.edges.values()))

    def is_empty(self) -> bool:
        return not self.vertices


def graph_stats(g: EmbeddedGraph) -> GraphStats:
    """Vertex/edge counts, degree!=3 vertex count, and total edge length."""
    not3 = sum(1 for v in g.vertices if g.degree(v) != 3)
    return GraphStats(
        vertex_count=len(g.vertices),
        vertex_count_degree_not3=not3,
        edge_count=len(g.edges),
        total_length=g.total_length(),
    )


def _open_rows(path):
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            yield lineno, [cell.strip() for cell in row]


def load_graph(vertex_file, edge_file) -> EmbeddedGraph:
    """Load a graph from two CSV files.

    Vertex rows are ``id,x,y``; edge rows are ``id,u,v[,x1,y1,x2,y2,...]``
    where the optional trailing floats are interior polyline points.  A
    header row is skipped when its first cell is literally ``id``.
    """
    vertices: list[tuple[str, tuple[float, float]]] = []
    seen_v: set[str] = set()
    for lineno, row in _open_rows(vertex_file):
        if lineno == 1 and row[0].lower() == "id":
            continue
        if len(row) != 3:
            raise ParseError(f"vertex row needs 3 fields, got {len(row)}", lineno)
        vid = row[0]
        try:
            x, y = float(row[1]), float(row[2])
        except ValueError as exc:
            raise ParseError(f"bad vertex coordinates: {exc}", lineno) from exc
        if vid in seen_v:
            raise ParseError(f"duplicate vertex id {vid!r}", lineno)
        seen_v.add(vid)
        vertices.append((vid, (x, y)))
    vpos = dict(vertices)

    edges: list[tuple[str, tuple]] = []
    seen_e: set[str] = set()
    for lineno, row in _open_rows(edge_file):
        if lineno == 1 and row[0].lower() == "id":
            continue
        if len(row) < 3 or len(row) % 2 == 0:
            raise ParseError(
                f"edge row needs id,u,v plus x,y pairs; got {len(row)} fields", lineno
            )
        eid, u, v = row[0], row[1], row[2]
        if eid in seen_e:
            raise ParseError(f"duplicate edge id {eid!r}", lineno)
        seen_e.add(eid)
        try:
            coords = [float(c) for c in row[3:]]
        except ValueError as exc:
            raise ParseError(f"bad edge coordinates: {exc}", lineno) from exc
        interior = list(zip(coords[0::2], coords[1::2]))
        if u not in vpos or v not in vpos:
            missing = u if u not in vpos else v
            raise StructuralError(f"line {lineno}: edge {eid!r} references unknown vertex {missing!r}")
        geometry = PolyLine([vpos[u], *interior, vpos[v]])
        edges.append((eid, (u, v, geometry)))

    return EmbeddedGraph(vertices, edges)


def _fmt(x: float) -> str:
    return repr(float(x))


def write_graph_csv(g: EmbeddedGraph, vertex_file, edge_file) -> None:
    """Write the two-file CSV representation read by :func:`load_graph`."""
    with open(vertex_file, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "x", "y"])
        for vid, p in g.vertices.items():
            w.writerow([vid, _fmt(p.x), _fmt(p.y)])
    with open(edge_file, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "u", "v"])
        for eid, e in g.edges.items():
            interior = e.geometry.points[1:-1]
            row = [eid, e.u, e.v]
            for px, py in interior:
                row.extend([_fmt(px), _fmt(py)])
            w.writerow(row)


def export_geojson(g: EmbeddedGraph, path=None) -> dict:
    """FeatureCollection of LineString features, one per edge.

    Coordinates stay in the input planar frame; no reprojection is applied.
    Returns the document; writes it to ``path`` when given.
    """
    features = []
    for eid, e in g.edges.items():
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[float(x), float(y)] for x, y in e.geometry.points],
                },
                "properties": {"edge_id": eid},
            }
        )
    doc = {"type": "FeatureCollection", "features": features}
    if path is not None:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    return doc


def _merge_chain_geometry(g: EmbeddedGraph, chain: list[tuple[EdgeId, VertexId]]) -> PolyLine:
    """Concatenate chain edges, each given as (edge id, entry vertex)."""
    pts: list[np.ndarray] = []
    for eid, start in chain:
        geom = g.edge_geometry_from(eid, start).points
        if pts:
            pts.extend(geom[1:])
        else:
            pts.extend(geom)
    return PolyLine(np.asarray(pts))


def contract_degree_two(g: EmbeddedGraph) -> EmbeddedGraph:
    """Merge maximal chains through degree-2 vertices into single edges.

    Chain interiors become polyline bend points of the merged edge, which
    keeps the id of its first constituent edge.  A chain with both ends at
    the same anchor would contract to a self-loop, so it is split at one of
    its interior vertices instead; an isolated cycle of degree-2 vertices
    keeps two anchor vertices and becomes two parallel edges.  The operation
    is idempotent and preserves total length.
    """
    is_interior = {v: g.degree(v) == 2 for v in g.vertices}
    visited_edges: set[EdgeId] = set()
    new_edges: list[tuple[EdgeId, tuple]] = []
    kept_vertices: set[VertexId] = {v for v, mid in is_interior.items() if not mid}

    def walk(eid: EdgeId, start: VertexId) -> tuple[list[tuple[EdgeId, VertexId]], VertexId]:
        """Follow a chain from anchor ``start`` until a non-interior vertex."""
        chain = [(eid, start)]
        visited_edges.add(eid)
        cur = g.other_endpoint(eid, start)
        prev_eid = eid
        while is_interior[cur] and cur != start:
            e1, e2 = g.adjacency[cur]
            nxt = e2 if e1 == prev_eid else e1
            if nxt in visited_edges:
                break
            chain.append((nxt, cur))
            visited_edges.add(nxt)
            prev_eid = nxt
            cur = g.other_endpoint(nxt, cur)
        return chain, cur

    def emit(chain: list[tuple[EdgeId, VertexId]], start: VertexId, end: VertexId) -> None:
        if start == end:
            # Would form a self-loop: split at the interior vertex halfway in.
            half = max(1, len(chain) // 2)
            mid_vertex = chain[half][1]
            kept_vertices.add(mid_vertex)
            emit(chain[:half], start, mid_vertex)
            emit(chain[half:], mid_vertex, end)
            return
        geom = _merge_chain_geometry(g, chain)
        kept_vertices.add(start)
        kept_vertices.add(end)
        new_edges.append((chain[0][0], (start, end, geom)))

    for vid in g.vertices:
        if is_interior[vid]:
            continue
        for eid in g.adjacency[vid]:
            if eid not in visited_edges:
                chain, end = walk(eid, vid)
                emit(chain, vid, end)

    # Isolated cycles where every vertex has degree two: anchor the first
    # vertex reached in iteration order and split the resulting loop.
    for vid in g.vertices:
        if not is_interior[vid]:
            continue
        unvisited = [eid for eid in g.adjacency[vid] if eid not in visited_edges]
        if not unvisited:
            continue
        kept_vertices.add(vid)
        chain, end = walk(unvisited[0], vid)
        emit(chain, vid, end)

    vertex_items = [(v, g.vertices[v]) for v in g.vertices if v in kept_vertices]
    return EmbeddedGraph(vertex_items, new_edges)
