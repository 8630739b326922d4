"""Directed path-based distance, local signatures, and separation diagnostics.

The directed distance of link-length ``k`` maps every canonical
link-length-``k`` vertex-path of the source graph into the target graph and
takes the maximum of the map-matching distances.  The same per-path values,
aggregated over the paths through each edge or vertex, yield the local
signatures, so one matching pass serves the global distance and both
signature maps.  The distance is directional and deliberately asymmetric.
"""

from __future__ import annotations

import csv
import functools
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, StructuralError
from .frechet import DEFAULT_TOLERANCE
from .geometry import PolyLine
from .graph import EmbeddedGraph, VertexId
from .matching import map_match_distance, match_decision
from .parallel import iter_chunked, run_chunked
from .paths import VertexPath, enumerate_paths, path_geometry
from .signatures import SignatureMap

__all__ = [
    "PathRecord",
    "PathDistanceReport",
    "SeparationReport",
    "directed_path_distance",
    "iter_match_records",
    "match_all_paths",
    "max_path_distance",
    "undirected_path_distance",
    "path_distance_analysis",
    "edge_signature",
    "vertex_signature",
    "intersection_radius",
    "separation_census",
    "write_records_csv",
    "read_records_csv",
]


@dataclass(frozen=True)
class PathRecord:
    """One matched path: id, the path, its length, and its match distance."""

    path_id: int
    path: VertexPath
    length: float
    distance: float


@dataclass
class PathDistanceReport:
    """Per-path map-matching distances plus their weighted summaries."""

    k: int
    direction: str
    records: list[PathRecord]
    percentile_weighted: bool = True
    strict: bool = False
    strict_bound: float | None = None

    @property
    def max_distance(self) -> float:
        return max((r.distance for r in self.records), default=0.0)

    def percentile(self, q: float = 0.9, weighted: bool | None = None) -> float:
        if weighted is None:
            weighted = self.percentile_weighted
        if not self.records:
            return 0.0
        values = np.asarray([r.distance for r in self.records])
        weights = (
            np.asarray([r.length for r in self.records])
            if weighted
            else np.ones(len(self.records))
        )
        return _weighted_quantile(values, weights, q)

    @property
    def weighted_mean(self) -> float:
        total = sum(r.length for r in self.records)
        if total == 0.0:
            return 0.0
        return sum(r.length * r.distance for r in self.records) / total

    def summary(self) -> dict:
        out = {
            "k": self.k,
            "direction": self.direction,
            "max": self.max_distance,
            "p90_weighted": self.percentile(0.9, True),
            "mean_weighted": self.weighted_mean,
            "path_count": len(self.records),
        }
        if not self.percentile_weighted:
            out["p90_unweighted"] = self.percentile(0.9, False)
        if self.strict:
            out["strict"] = True
            out["strict_bound"] = self.strict_bound
        return out


@dataclass
class SeparationReport:
    """Per-vertex intersection radii at scale ``d`` and the separated count."""

    k: int
    d: float
    per_vertex: dict[VertexId, float] = field(default_factory=dict)

    @property
    def separated_count(self) -> int:
        return sum(1 for r in self.per_vertex.values() if math.isfinite(r))


def _weighted_quantile(values: np.ndarray, weights: np.ndarray, q: float) -> float:
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = weights[order]
    cw = np.cumsum(w)
    if cw[-1] == 0.0:
        return float(v[-1])
    idx = int(np.searchsorted(cw, q * cw[-1], side="left"))
    return float(v[min(idx, len(v) - 1)])


def _chunk_distances(h: EmbeddedGraph, tol: float, use_index: bool, curves: list) -> list[float]:
    return [
        map_match_distance(PolyLine(pts), h, tol, use_index=use_index) for pts in curves
    ]


def _chunk_max(h: EmbeddedGraph, tol: float, use_index: bool, curves: list) -> float:
    """Exact maximum of canonical per-curve distances over one chunk.

    A curve whose decision at ``best - tol`` succeeds cannot raise the
    maximum (its canonical distance is <= best), so it is skipped after a
    single decision; every record-breaker gets the full bisection.  The
    result equals the maximum of the individually computed distances, so
    chunking never changes it.
    """
    best = -math.inf
    for pts in curves:
        curve = PolyLine(pts)
        if best > tol and match_decision(curve, h, best - tol):
            continue
        d = map_match_distance(curve, h, tol, use_index=use_index)
        if d > best:
            best = d
    return best


def _canonical_paths(g: EmbeddedGraph, k: int) -> tuple[list[VertexPath], list[PolyLine]]:
    paths = list(enumerate_paths(g, k))
    geoms = [path_geometry(g, p) for p in paths]
    return paths, geoms


def iter_match_records(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
    known: dict[int, float] | None = None,
):
    """Yield per-path records in canonical order as chunks complete.

    ``known`` maps path ids to distances from an earlier, possibly partial
    run (see ``read_records_csv``); those paths are not recomputed.
    Streaming consumers can persist records as they arrive, which is what
    makes long link-3 runs restartable.
    """
    if h.is_empty():
        raise StructuralError("no path exists: the target graph is empty")
    paths, geoms = _canonical_paths(g, k)
    todo = [i for i in range(len(paths)) if known is None or i not in known]
    fn = functools.partial(_chunk_distances, h, tol, use_index)
    computed = iter_chunked(fn, [geoms[i].points for i in todo], workers)
    pending: deque[float] = deque()
    for i, (p, geom) in enumerate(zip(paths, geoms)):
        if known is not None and i in known:
            d = known[i]
        else:
            while not pending:
                pending.extend(next(computed))
            d = pending.popleft()
        yield PathRecord(i, p, geom.length(), d)


def match_all_paths(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
    known: dict[int, float] | None = None,
) -> list[PathRecord]:
    """Match every canonical link-length-``k`` path of ``g`` into ``h``."""
    return list(
        iter_match_records(
            g, h, k, tol, workers=workers, use_index=use_index, known=known
        )
    )


def max_path_distance(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
) -> float:
    """The directed distance alone, skipping per-path bookkeeping.

    Equals the maximum of the per-path distances that ``match_all_paths``
    would produce, for any worker count.
    """
    if h.is_empty():
        raise StructuralError("no path exists: the target graph is empty")
    _, geoms = _canonical_paths(g, k)
    arrays = [geom.points for geom in geoms]
    fn = functools.partial(_chunk_max, h, tol, use_index)
    maxima = run_chunked(fn, arrays, workers)
    return max(maxima, default=0.0)


def _strict_good_vertices(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    tol: float,
    workers: int,
    use_index: bool,
    d3: float | None = None,
) -> tuple[set[VertexId], float, dict[VertexId, float]]:
    """Vertices admissible as strict path interiors, with the link-3 distance and radii."""
    if d3 is None:
        d3 = max_path_distance(g, h, 3, tol, workers=workers, use_index=use_index)
    radii = {v: intersection_radius(g, v, d3) for v in g.vertices}
    good = {v for v in g.vertices if math.isfinite(radii[v]) and g.degree(v) != 3}
    return good, d3, radii


def directed_path_distance(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
    strict: bool = False,
    percentile_weighted: bool = True,
) -> PathDistanceReport:
    """Directed link-length-``k`` path distance from ``g`` into ``h``.

    With ``strict=True`` the path set is restricted to paths whose interior
    vertices have finite intersection radius at scale Δ3 and degree != 3
    (the hypotheses of the approximation guarantee); when on top of that
    every vertex qualifies and adjacent vertices are at least ``2*(r+Δ3)``
    apart, the report carries the diagnostic upper bound ``2*r + Δ3`` for
    the unrestricted-path distance.
    """
    records = match_all_paths(g, h, k, tol, workers=workers, use_index=use_index)
    report = PathDistanceReport(
        k=k,
        direction="G->H",
        records=records,
        percentile_weighted=percentile_weighted,
    )
    if strict:
        d3 = report.max_distance if k == 3 else None
        good, d3, radii = _strict_good_vertices(g, h, tol, workers, use_index, d3)
        report.records = [
            r for r in records if all(v in good for v in r.path.vertex_ids[1:-1])
        ]
        report.strict = True
        report.strict_bound = _strict_bound(g, good, d3, radii)
    return report


def undirected_path_distance(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
) -> float:
    """Maximum of the two directional distances, like undirected Hausdorff."""
    return max(
        max_path_distance(g, h, k, tol, workers=workers, use_index=use_index),
        max_path_distance(h, g, k, tol, workers=workers, use_index=use_index),
    )


def _strict_bound(
    g: EmbeddedGraph, good: set, d3: float, radii: dict[VertexId, float]
) -> float | None:
    if set(g.vertices) != good or not radii:
        return None
    r_max = max(radii.values())
    spacing_ok = all(
        math.dist(g.vertices[e.u], g.vertices[e.v]) >= 2.0 * (r_max + d3)
        for e in g.edges.values()
    )
    return 2.0 * r_max + d3 if spacing_ok else None


def _aggregate(
    records: list[PathRecord], key_of
) -> dict:
    out: dict = {}
    for rec in records:
        for key in key_of(rec.path):
            cur = out.get(key)
            if cur is None or rec.distance > cur:
                out[key] = rec.distance
    return out


def path_distance_analysis(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
    percentile_weighted: bool = True,
) -> tuple[PathDistanceReport, SignatureMap, SignatureMap]:
    """One matching pass yielding the report and both signature maps.

    The per-edge signature of ``e`` is the maximum distance over paths
    traversing ``e``; per-vertex analogously.  Every path contains its own
    edges and vertices, so both maps fall out of the same records.
    """
    records = match_all_paths(g, h, k, tol, workers=workers, use_index=use_index)
    report = PathDistanceReport(
        k=k, direction="G->H", records=records, percentile_weighted=percentile_weighted
    )
    edge_values = _aggregate(records, lambda p: set(p.edge_ids))
    vertex_values = _aggregate(records, lambda p: set(p.vertex_ids))
    # Edges or vertices on no canonical path (isolated pieces) get no entry.
    edge_sig = SignatureMap(target="edge", k=k, values=edge_values, graph=g)
    vertex_sig = SignatureMap(target="vertex", k=k, values=vertex_values, graph=g)
    return report, edge_sig, vertex_sig


def edge_signature(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
) -> SignatureMap:
    """Per-edge local signature: max match distance over paths through each edge."""
    _, sig, _ = path_distance_analysis(g, h, k, tol, workers=workers, use_index=use_index)
    return sig


def vertex_signature(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    k: int,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
) -> SignatureMap:
    """Per-vertex local signature: max match distance over paths through each vertex."""
    _, _, sig = path_distance_analysis(g, h, k, tol, workers=workers, use_index=use_index)
    return sig


def _first_circle_crossing(points: np.ndarray, center: np.ndarray, r: float):
    """First point at distance ``r`` walking the polyline from ``center``.

    ``points`` must start at ``center``.  Returns None when the walk never
    reaches distance ``r``.  Distance to ``center`` is convex along each
    segment, so the first segment whose far endpoint reaches ``r`` holds the
    crossing.
    """
    for a, b in zip(points[:-1], points[1:]):
        db = float(np.hypot(*(b - center)))
        if db >= r:
            dvec = b - a
            f = a - center
            qa = float(dvec @ dvec)
            if qa == 0.0:
                return b
            qb = 2.0 * float(f @ dvec)
            qc = float(f @ f) - r * r
            disc = max(qb * qb - 4.0 * qa * qc, 0.0)
            u = (-qb + math.sqrt(disc)) / (2.0 * qa)
            u = min(max(u, 0.0), 1.0)
            return a + u * dvec
    return None


def intersection_radius(
    g: EmbeddedGraph, v: VertexId, d: float, *, steps: int = 256
) -> float:
    """Minimum radius at which first edge crossings are pairwise > 2d apart.

    Walking each incident edge from ``v``, the crossing with the radius-r
    circle must exist for every edge and the crossing points must be more
    than ``2*d`` apart.  When all incident edges are straight segments the
    closed form ``d / sin(theta/2)`` applies, with ``theta`` the minimum
    angle between incident edges, provided every edge is long enough to
    reach that radius.  Polyline edges fall back to a numeric scan of
    ``steps`` radii refined by bisection.  Returns ``inf`` when no radius
    qualifies (the vertex is then not d-separated).
    """
    if v not in g.vertices:
        raise StructuralError(f"unknown vertex id {v!r}")
    if d < 0:
        raise InputError("d must be non-negative")
    incident = g.adjacency[v]
    if not incident:
        return math.inf
    center = np.asarray(g.vertices[v], dtype=float)
    geoms = [g.edge_geometry_from(eid, v).collapsed().points for eid in incident]
    if len(incident) == 1:
        return 0.0  # one crossing, no pair constraint; any radius works

    if all(pts.shape[0] == 2 for pts in geoms):
        dirs = []
        lengths = []
        for pts in geoms:
            vec = pts[1] - pts[0]
            norm = float(np.hypot(*vec))
            if norm == 0.0:
                return math.inf
            dirs.append(vec / norm)
            lengths.append(norm)
        min_theta = math.pi
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                cosang = float(np.clip(dirs[i] @ dirs[j], -1.0, 1.0))
                min_theta = min(min_theta, math.acos(cosang))
        if min_theta == 0.0:
            return math.inf
        r = d / math.sin(min_theta / 2.0)
        return r if all(length >= r for length in lengths) else math.inf

    reach = min(float(np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1]).max()) for pts in geoms)
    if reach < d or reach == 0.0:
        return math.inf

    def feasible(r: float) -> bool:
        crossings = []
        for pts in geoms:
            w = _first_circle_crossing(pts, center, r)
            if w is None:
                return False
            crossings.append(w)
        for i in range(len(crossings)):
            for j in range(i + 1, len(crossings)):
                if float(np.hypot(*(crossings[i] - crossings[j]))) <= 2.0 * d:
                    return False
        return True

    grid = np.linspace(d, reach, max(steps, 2))
    hit = None
    for idx, r in enumerate(grid):
        if feasible(float(r)):
            hit = idx
            break
    if hit is None:
        return math.inf
    if hit == 0:
        return float(grid[0])
    lo, hi = float(grid[hit - 1]), float(grid[hit])
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def separation_census(
    g: EmbeddedGraph,
    h: EmbeddedGraph,
    tol: float = DEFAULT_TOLERANCE,
    *,
    workers: int = 1,
    use_index: bool = True,
    radius_steps: int = 256,
) -> list[SeparationReport]:
    """Count d-separated vertices of ``g`` for d = Δ1, Δ2, Δ3 into ``h``."""
    reports = []
    for k in (1, 2, 3):
        dk = max_path_distance(g, h, k, tol, workers=workers, use_index=use_index)
        per_vertex = {
            v: intersection_radius(g, v, dk, steps=radius_steps) for v in g.vertices
        }
        reports.append(SeparationReport(k=k, d=dk, per_vertex=per_vertex))
    return reports


def write_records_csv(records: list[PathRecord], fh) -> None:
    """Stream per-path rows: path_id, vertex_sequence, path_length_m, match_distance_m."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["path_id", "vertex_sequence", "path_length_m", "match_distance_m"])
    for rec in records:
        w.writerow([rec.path_id, rec.path.label(), repr(rec.length), repr(rec.distance)])


def read_records_csv(fh) -> dict[int, float]:
    """Map of path_id -> match distance from a previously written report."""
    out: dict[int, float] = {}
    reader = csv.reader(fh)
    header = next(reader, None)
    for row in reader:
        if row:
            out[int(row[0])] = float(row[3])
    return out
