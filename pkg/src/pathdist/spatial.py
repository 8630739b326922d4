"""Spatial hash grid over edge geometry for nearest-point queries.

An exhaustive scan over all edges gives the same answers; the grid keeps
them while only touching nearby buckets.  Every edge is registered
in every cell its geometry's segment bounding boxes overlap, so ring
expansion around a query cell never misses a closer edge.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import nearest_point_on_polyline
from .graph import EdgeId, EmbeddedGraph

__all__ = ["SpatialGrid", "nearest_point_on_graph"]

DEFAULT_CELL_SIZE = 50.0


class SpatialGrid:
    """Buckets of edge ids keyed by integer grid cell."""

    def __init__(self, graph: EmbeddedGraph, cell_size: float = DEFAULT_CELL_SIZE):
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        self.graph = graph
        self.cell_size = float(cell_size)
        self.buckets: dict[tuple[int, int], list[EdgeId]] = {}
        for eid, e in graph.edges.items():
            cells = set()
            pts = e.geometry.points
            for a, b in zip(pts[:-1], pts[1:]):
                x0, x1 = sorted((a[0], b[0]))
                y0, y1 = sorted((a[1], b[1]))
                for cx in range(self._coord(x0), self._coord(x1) + 1):
                    for cy in range(self._coord(y0), self._coord(y1) + 1):
                        cells.add((cx, cy))
            for cell in cells:
                self.buckets.setdefault(cell, []).append(eid)

    def _coord(self, x: float) -> int:
        return int(math.floor(x / self.cell_size))

    def cell_of(self, p) -> tuple[int, int]:
        return (self._coord(p[0]), self._coord(p[1]))

    def _ring(self, center: tuple[int, int], r: int):
        cx, cy = center
        if r == 0:
            yield (cx, cy)
            return
        for dx in range(-r, r + 1):
            yield (cx + dx, cy - r)
            yield (cx + dx, cy + r)
        for dy in range(-r + 1, r):
            yield (cx - r, cy + dy)
            yield (cx + r, cy + dy)

    def nearest_point(self, p) -> tuple[float, np.ndarray, EdgeId | None]:
        """Distance to, coordinates of, and edge of the closest graph point.

        Expands cell rings outward until the unexplored region cannot hold a
        closer edge; falls back to an exhaustive scan if the grid is empty.
        """
        if not self.buckets:
            return nearest_point_on_graph(self.graph, p)
        p = np.asarray(p, dtype=float)
        center = self.cell_of(p)
        keys = self.buckets.keys()
        max_ring = max(
            max(abs(cx - center[0]), abs(cy - center[1])) for cx, cy in keys
        )
        best = math.inf
        best_pt = None
        best_edge = None
        seen: set[EdgeId] = set()
        for r in range(max_ring + 1):
            if best < (r - 1) * self.cell_size:
                break  # cells at ring r are at least this far from p
            for cell in self._ring(center, r):
                for eid in self.buckets.get(cell, ()):
                    if eid in seen:
                        continue
                    seen.add(eid)
                    d, q = nearest_point_on_polyline(p, self.graph.edges[eid].geometry)
                    if d < best:
                        best, best_pt, best_edge = d, q, eid
        return best, best_pt, best_edge


def nearest_point_on_graph(g: EmbeddedGraph, p) -> tuple[float, np.ndarray, EdgeId | None]:
    """Exhaustive nearest-point scan over all edges (the baseline behavior)."""
    p = np.asarray(p, dtype=float)
    best = math.inf
    best_pt = None
    best_edge = None
    for eid, e in g.edges.items():
        d, q = nearest_point_on_polyline(p, e.geometry)
        if d < best:
            best, best_pt, best_edge = d, q, eid
    if best_pt is None:
        # Vertex-only graphs still admit constant matched paths.
        for vid, pos in g.vertices.items():
            d = float(np.hypot(p[0] - pos.x, p[1] - pos.y))
            if d < best:
                best, best_pt = d, np.asarray(pos, dtype=float)
    return best, best_pt, best_edge
