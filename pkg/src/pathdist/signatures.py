"""Local signature maps, their weighted CDF summaries, and exports.

The per-edge signature assigns each edge the worst map-matching distance of
the bounded-link-length paths through it; the weighted CDF reports, for a
threshold x, the fraction of total graph length whose signature is <= x
(closed threshold).  Heat-maps color edges from light yellow (similar) to
dark red (dissimilar).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .errors import InputError, StructuralError
from .graph import EmbeddedGraph
from .svgplot import CURVE_COLORS, SvgCanvas, ramp_color, world_transform

__all__ = [
    "SignatureMap",
    "CdfCurve",
    "cdf",
    "cdf_at",
    "export_heatmap",
    "export_cdf_plot",
    "write_signature_csv",
    "read_signature_csv",
    "read_signature_geojson",
]


@dataclass
class SignatureMap:
    """Per-edge or per-vertex signature values over a graph."""

    target: str  # "edge" or "vertex"
    k: int
    values: dict[Hashable, float]
    graph: EmbeddedGraph

    def __post_init__(self):
        if self.target not in ("edge", "vertex"):
            raise InputError(f"unknown signature target {self.target!r}")
        pool = self.graph.edges if self.target == "edge" else self.graph.vertices
        for key, val in self.values.items():
            if key not in pool:
                raise StructuralError(f"signature key {key!r} is not in the graph")
            if not (val >= 0.0):
                raise InputError(f"signature value for {key!r} must be >= 0")

    def edge_lengths(self) -> dict[Hashable, float]:
        if self.target != "edge":
            raise InputError("edge lengths are only defined for edge signatures")
        return {eid: self.graph.edges[eid].geometry.length() for eid in self.values}


@dataclass(frozen=True)
class CdfCurve:
    """Right-continuous step function given by its breakpoints.

    ``xs`` are the distinct signature values in ascending order; ``ys`` the
    cumulative length-weighted fractions, ending at 1 for full coverage.
    """

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def value_at(self, x: float) -> float:
        out = 0.0
        for bx, by in zip(self.xs, self.ys):
            if bx <= x:
                out = by
            else:
                break
        return out


def _cdf_from_pairs(pairs: Sequence[tuple[float, float]], total: float | None = None) -> CdfCurve:
    """Step curve from (value, weight) pairs.

    With ``total=None`` the denominator is the cumulative weight itself, so
    the final fraction is exactly 1.0 regardless of summation order.
    """
    if not pairs:
        raise InputError("cannot build a CDF from an empty signature")
    ordered = sorted(pairs, key=lambda p: p[0])
    cum = np.cumsum([w for _, w in ordered])
    if total is None:
        total = float(cum[-1])
    if total <= 0.0:
        raise InputError("total length must be positive")
    xs: list[float] = []
    ys: list[float] = []
    for (value, _), acc in zip(ordered, cum):
        if xs and xs[-1] == value:
            ys[-1] = float(acc) / total
        else:
            xs.append(value)
            ys.append(float(acc) / total)
    return CdfCurve(tuple(xs), tuple(ys))


def cdf(sig: SignatureMap) -> CdfCurve:
    """Length-weighted cumulative distribution of an edge signature.

    The denominator is the total graph length; when the signature covers
    every edge (the normal case) it is taken as the cumulative sum of the
    same per-edge lengths, which makes the final fraction exactly 1.0.
    """
    lengths = sig.edge_lengths()
    pairs = [(sig.values[eid], lengths[eid]) for eid in sig.values]
    full_coverage = len(sig.values) == len(sig.graph.edges)
    return _cdf_from_pairs(pairs, None if full_coverage else sig.graph.total_length())


def cdf_at(sig: SignatureMap, x: float) -> float:
    """Fraction of total graph length whose signature is <= x."""
    return cdf(sig).value_at(x)


def _ramp_values(sig: SignatureMap, ramp: str) -> dict[Hashable, float]:
    if ramp == "linear":
        top = max(sig.values.values(), default=0.0)
        if top <= 0.0:
            return {k: 0.0 for k in sig.values}
        return {k: v / top for k, v in sig.values.items()}
    if ramp == "quantile":
        curve = cdf(sig)
        return {k: curve.value_at(v) for k, v in sig.values.items()}
    raise InputError(f"unknown ramp {ramp!r} (expected 'linear' or 'quantile')")


def export_heatmap(
    sig: SignatureMap,
    path,
    fmt: str = "svg",
    ramp: str = "quantile",
    *,
    size: float = 800.0,
) -> None:
    """Write an edge-signature heat-map as SVG or GeoJSON.

    The quantile ramp maps each value to its length-weighted CDF fraction,
    which keeps a few extreme edges from washing out the rest of the map;
    the linear ramp divides by the maximum value.  GeoJSON features carry
    ``edge_id``, ``signature_m``, and the ``ramp_value`` in [0, 1] so other
    tools can restyle them.
    """
    if sig.target != "edge":
        raise InputError("heat-maps are defined for edge signatures")
    rv = _ramp_values(sig, ramp)
    if fmt == "geojson":
        features = []
        for eid, value in sig.values.items():
            geom = sig.graph.edges[eid].geometry
            features.append(
                {
                    "type": "Feature",
                    "geometry": {
                        "type": "LineString",
                        "coordinates": [[float(x), float(y)] for x, y in geom.points],
                    },
                    "properties": {
                        "edge_id": eid,
                        "signature_m": float(value),
                        "ramp_value": float(rv[eid]),
                    },
                }
            )
        doc = {"type": "FeatureCollection", "features": features}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        return
    if fmt != "svg":
        raise InputError(f"unsupported heat-map format {fmt!r}")

    xs = [p.x for p in sig.graph.vertices.values()]
    ys = [p.y for p in sig.graph.vertices.values()]
    for e in sig.graph.edges.values():
        xs.extend(e.geometry.points[:, 0])
        ys.extend(e.geometry.points[:, 1])
    if not xs:
        raise InputError("cannot draw an empty graph")
    tf = world_transform((min(xs), min(ys), max(xs), max(ys)), size, size)
    canvas = SvgCanvas(size, size)
    for eid, e in sig.graph.edges.items():
        pts = [tf(x, y) for x, y in e.geometry.points]
        if eid in sig.values:
            canvas.polyline(pts, stroke=ramp_color(rv[eid]), stroke_width=2.0)
        else:
            canvas.polyline(pts, stroke="#bbbbbb", stroke_width=1.0)
    canvas.write(path)


def export_cdf_plot(
    curves: Sequence[CdfCurve],
    labels: Sequence[str],
    path,
    *,
    reference_x: float = 20.0,
    width: float = 640.0,
    height: float = 420.0,
) -> None:
    """Step plot of one or more CDF curves with a vertical reference line."""
    if not curves:
        raise InputError("need at least one CDF curve to plot")
    if len(labels) != len(curves):
        raise InputError("labels must match curves one to one")
    margin = 50.0
    xmax = max(max(c.xs) for c in curves)
    xmax = max(xmax, reference_x) * 1.05 + 1e-9

    def px(x: float) -> float:
        return margin + (x / xmax) * (width - 2 * margin)

    def py(y: float) -> float:
        return height - margin - y * (height - 2 * margin)

    canvas = SvgCanvas(width, height)
    canvas.line(px(0), py(0), px(xmax), py(0), stroke="black")
    canvas.line(px(0), py(0), px(0), py(1), stroke="black")
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        canvas.line(px(0) - 4, py(frac), px(0), py(frac), stroke="black")
        canvas.text(px(0) - 7, py(frac) + 4, f"{frac:.2f}", anchor="end")
    for i in range(5):
        x = xmax * i / 4
        canvas.line(px(x), py(0), px(x), py(0) + 4, stroke="black")
        canvas.text(px(x), py(0) + 16, f"{x:.0f}", anchor="middle")
    canvas.text((px(0) + px(xmax)) / 2, height - 8, "signature (meters)", anchor="middle")
    canvas.text(14, py(0.5), "fraction of length", anchor="middle")
    canvas.line(px(reference_x), py(0), px(reference_x), py(1), stroke="#999999", dash="4,3")

    for idx, (curve, label) in enumerate(zip(curves, labels)):
        color = CURVE_COLORS[idx % len(CURVE_COLORS)]
        pts: list[tuple[float, float]] = [(px(0), py(0))]
        prev_y = 0.0
        for x, y in zip(curve.xs, curve.ys):
            pts.append((px(x), py(prev_y)))
            pts.append((px(x), py(y)))
            prev_y = y
        pts.append((px(xmax), py(prev_y)))
        canvas.polyline(pts, stroke=color, stroke_width=1.5)
        canvas.text(width - margin, margin + 14 * idx, label, anchor="end", fill=color)
    canvas.write(path)


def write_signature_csv(sig: SignatureMap, fh) -> None:
    """Rows of edge_id, length_m, signature_m (header included)."""
    lengths = sig.edge_lengths()
    fh.write("edge_id,length_m,signature_m\n")
    for eid, value in sig.values.items():
        fh.write(f"{eid},{lengths[eid]!r},{value!r}\n")


def read_signature_csv(fh) -> list[tuple[str, float, float]]:
    """(edge_id, length, signature) triples from a signature CSV."""
    rows = []
    header = fh.readline()
    for line in fh:
        line = line.strip()
        if not line:
            continue
        eid, length, value = line.split(",")
        rows.append((eid, float(length), float(value)))
    return rows


def cdf_from_signature_rows(rows: Sequence[tuple[str, float, float]]) -> CdfCurve:
    """CDF from exported rows, weighting by the recorded edge lengths."""
    return _cdf_from_pairs([(value, length) for _, length, value in rows])


def read_signature_geojson(path, graph: EmbeddedGraph, k: int) -> SignatureMap:
    """Rebuild an edge SignatureMap from an exported heat-map GeoJSON."""
    with open(path) as fh:
        doc = json.load(fh)
    values = {
        feat["properties"]["edge_id"]: float(feat["properties"]["signature_m"])
        for feat in doc["features"]
    }
    return SignatureMap(target="edge", k=k, values=values, graph=graph)
