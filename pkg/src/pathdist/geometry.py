"""Planar primitives: points, polylines, and segment/disc intersections.

All coordinates are planar offsets in meters (UTM-style frames); every
distance in the package is Euclidean in this frame.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .errors import InputError

__all__ = [
    "Point2D",
    "PolyLine",
    "FreeInterval",
    "point_segment_distance",
    "disc_segment_interval",
    "disc_segment_intervals",
    "segments_intersect",
    "point_to_polyline_distance",
    "nearest_point_on_polyline",
]

EMPTY_LO = np.inf
EMPTY_HI = -np.inf


class Point2D(NamedTuple):
    """A point in the planar meter frame."""

    x: float
    y: float


class FreeInterval(NamedTuple):
    """A closed parameter interval [lo, hi] with lo <= hi.

    Empty intervals are represented explicitly as ``None`` by the functions
    that produce single intervals, or by ``lo > hi`` sentinels inside the
    vectorized interval arrays (see :func:`disc_segment_intervals`).
    """

    lo: float
    hi: float


def _as_point_array(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and pts.shape == (2,):
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
        raise InputError(f"expected an (n, 2) point array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InputError("coordinates must be finite")
    return pts


class PolyLine:
    """An ordered point sequence; the geometric realization of edges and paths.

    A single-point polyline is a valid degenerate curve.  Consecutive
    duplicate points are permitted; :meth:`collapsed` removes them before
    numeric work that divides by segment lengths.
    """

    __slots__ = ("points",)

    def __init__(self, points: Iterable | np.ndarray):
        self.points = _as_point_array(points)
        self.points.setflags(write=False)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __repr__(self) -> str:
        return f"PolyLine({self.points.tolist()!r})"

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def segment_lengths(self) -> np.ndarray:
        d = np.diff(self.points, axis=0)
        return np.hypot(d[:, 0], d[:, 1])

    def length(self) -> float:
        return float(self.segment_lengths().sum())

    def cumulative_lengths(self) -> np.ndarray:
        """Arc length at each point, starting at 0."""
        out = np.empty(len(self))
        out[0] = 0.0
        np.cumsum(self.segment_lengths(), out=out[1:])
        return out

    def reversed(self) -> "PolyLine":
        return PolyLine(self.points[::-1])

    def collapsed(self) -> "PolyLine":
        """Drop consecutive duplicate points (zero-length segments)."""
        if len(self) == 1:
            return self
        keep = np.empty(len(self), dtype=bool)
        keep[0] = True
        keep[1:] = self.segment_lengths() > 0.0
        if keep.all():
            return self
        return PolyLine(self.points[keep])

    def point_at(self, arc: float) -> np.ndarray:
        """Point at the given arc length, clamped to the curve."""
        cum = self.cumulative_lengths()
        total = cum[-1]
        if total == 0.0:
            return self.points[0].copy()
        arc = min(max(arc, 0.0), total)
        i = int(np.searchsorted(cum, arc, side="right")) - 1
        i = min(i, len(self) - 2)
        seg = cum[i + 1] - cum[i]
        u = 0.0 if seg == 0.0 else (arc - cum[i]) / seg
        return self.points[i] + u * (self.points[i + 1] - self.points[i])

    def resampled(self, spacing: float) -> "PolyLine":
        """Insert points so consecutive spacing is at most ``spacing``.

        Original vertices are kept, so the geometric image is unchanged.
        """
        if spacing <= 0:
            raise InputError("spacing must be positive")
        pts = self.collapsed().points
        if pts.shape[0] == 1:
            return PolyLine(pts)
        out = [pts[0]]
        for a, b in zip(pts[:-1], pts[1:]):
            seg = float(np.hypot(*(b - a)))
            n = max(1, int(np.ceil(seg / spacing)))
            for j in range(1, n + 1):
                out.append(a + (j / n) * (b - a))
        return PolyLine(np.asarray(out))


def point_segment_distance(p, a, b) -> float:
    """Euclidean distance from point ``p`` to segment ``ab``."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return float(np.hypot(*(p - a)))
    u = float((p - a) @ d) / dd
    u = min(max(u, 0.0), 1.0)
    return float(np.hypot(*(p - (a + u * d))))


def disc_segment_intervals(center, radius: float, a, b):
    """Parameter intervals of segments ``a[i] -> b[i]`` inside a closed disc.

    Returns ``(lo, hi)`` arrays with the sub-interval of [0, 1] where
    ``||a + u*(b-a) - center|| <= radius``.  Empty intersections are encoded
    as ``lo = +inf, hi = -inf`` so that emptiness is simply ``lo > hi``.

    ``center`` may be a single point or an array broadcastable against the
    segment arrays.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(center, dtype=float)
    d = b - a
    f = a - c
    qa = np.einsum("...i,...i->...", d, d)
    qb = 2.0 * np.einsum("...i,...i->...", f, d)
    qc = np.einsum("...i,...i->...", f, f) - radius * radius

    disc = qb * qb - 4.0 * qa * qc
    degenerate = qa == 0.0
    safe_qa = np.where(degenerate, 1.0, qa)
    sq = np.sqrt(np.maximum(disc, 0.0))
    u1 = (-qb - sq) / (2.0 * safe_qa)
    u2 = (-qb + sq) / (2.0 * safe_qa)

    lo = np.clip(u1, 0.0, 1.0)
    hi = np.clip(u2, 0.0, 1.0)
    empty = (disc < 0.0) | (u1 > 1.0) | (u2 < 0.0)

    # Zero-length segment: inside the disc iff its point is.
    lo = np.where(degenerate, 0.0, lo)
    hi = np.where(degenerate, 1.0, hi)
    empty = np.where(degenerate, qc > 0.0, empty)

    lo = np.where(empty, EMPTY_LO, lo)
    hi = np.where(empty, EMPTY_HI, hi)
    return lo, hi


def disc_segment_interval(center, radius: float, a, b) -> FreeInterval | None:
    """Single-segment variant of :func:`disc_segment_intervals`.

    Returns the closed parameter interval, or ``None`` for an empty
    intersection (the empty case is explicit, never encoded as lo > hi).
    """
    lo, hi = disc_segment_intervals(
        center, radius, np.asarray(a, float)[None, :], np.asarray(b, float)[None, :]
    )
    if lo[0] > hi[0]:
        return None
    return FreeInterval(float(lo[0]), float(hi[0]))


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def segments_intersect(p1, p2, q1, q2) -> bool:
    """True iff closed segments ``p1p2`` and ``q1q2`` share a point."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True

    def on_segment(a, b, c):
        return (
            _orient(a, b, c) == 0.0
            and min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    return (
        on_segment(q1, q2, p1)
        or on_segment(q1, q2, p2)
        or on_segment(p1, p2, q1)
        or on_segment(p1, p2, q2)
    )


def polylines_intersect(f: PolyLine, g: PolyLine) -> bool:
    """True iff the geometric images of two polylines share a point."""
    fp, gp = f.points, g.points
    if len(f) == 1 and len(g) == 1:
        return bool(np.all(fp[0] == gp[0]))
    if len(f) == 1:
        return any(segments_intersect(gp[j], gp[j + 1], fp[0], fp[0]) for j in range(len(g) - 1))
    if len(g) == 1:
        return any(segments_intersect(fp[i], fp[i + 1], gp[0], gp[0]) for i in range(len(f) - 1))
    for i in range(len(f) - 1):
        for j in range(len(g) - 1):
            if segments_intersect(fp[i], fp[i + 1], gp[j], gp[j + 1]):
                return True
    return False


def point_to_polyline_distance(p, g: PolyLine) -> float:
    """Minimum Euclidean distance from ``p`` to any point of ``g``."""
    dist, _ = nearest_point_on_polyline(p, g)
    return dist


def nearest_point_on_polyline(p, g: PolyLine) -> tuple[float, np.ndarray]:
    """Distance to and coordinates of the closest point of ``g``."""
    p = np.asarray(p, dtype=float)
    pts = g.points
    if pts.shape[0] == 1:
        return float(np.hypot(*(p - pts[0]))), pts[0].copy()
    a = pts[:-1]
    b = pts[1:]
    d = b - a
    dd = np.einsum("ij,ij->i", d, d)
    u = np.einsum("ij,ij->i", p - a, d) / np.where(dd == 0.0, 1.0, dd)
    u = np.clip(u, 0.0, 1.0)
    proj = a + u[:, None] * d
    dists = np.hypot(proj[:, 0] - p[0], proj[:, 1] - p[1])
    i = int(np.argmin(dists))
    return float(dists[i]), proj[i]
