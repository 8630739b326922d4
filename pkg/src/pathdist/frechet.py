"""Fréchet distance between planar polylines.

The decision procedure propagates monotone reachability over the free-space
diagram of the two curves; the distance itself is obtained by bisecting the
decision between analytic lower and upper bounds.  A classical
dynamic-programming discrete Fréchet distance is provided as an independent
upper bound and test oracle.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .geometry import PolyLine, disc_segment_intervals

__all__ = ["frechet_decision", "frechet_distance", "discrete_frechet"]

#: Default absolute tolerance (meters) for bisection searches.
DEFAULT_TOLERANCE = 1e-3

_INF = float("inf")


def _prepared(f: PolyLine) -> np.ndarray:
    if not isinstance(f, PolyLine):
        f = PolyLine(f)
    return f.collapsed().points


def _max_distance_to_point(pts: np.ndarray, p: np.ndarray) -> float:
    # Distance to a fixed point is convex along each segment, so the
    # maximum over a polyline is attained at a vertex.
    return float(np.hypot(pts[:, 0] - p[0], pts[:, 1] - p[1]).max())


def frechet_decision(f: PolyLine, g: PolyLine, eps: float) -> bool:
    """Decide whether the Fréchet distance of ``f`` and ``g`` is <= ``eps``.

    Free-space cell boundary intervals are computed in closed form by
    segment-disc intersection; reachability is swept cell by cell.  Degenerate
    zero-length segments are collapsed before the sweep, and single-point
    curves are handled as constant paths.
    """
    if eps < 0:
        raise InputError("eps must be non-negative")
    fp = _prepared(f)
    gp = _prepared(g)

    if fp.shape[0] == 1 and gp.shape[0] == 1:
        return float(np.hypot(*(fp[0] - gp[0]))) <= eps
    if fp.shape[0] == 1:
        return _max_distance_to_point(gp, fp[0]) <= eps
    if gp.shape[0] == 1:
        return _max_distance_to_point(fp, gp[0]) <= eps

    m = fp.shape[0] - 1  # segments of f (horizontal axis)
    n = gp.shape[0] - 1  # segments of g (vertical axis)

    # left[i][j]: free sub-interval of g-segment j at f-vertex i.
    # bottom[i][j]: free sub-interval of f-segment i at g-vertex j.
    left_lo = np.empty((m + 1, n))
    left_hi = np.empty((m + 1, n))
    for i in range(m + 1):
        left_lo[i], left_hi[i] = disc_segment_intervals(fp[i], eps, gp[:-1], gp[1:])
    bot_lo = np.empty((m, n + 1))
    bot_hi = np.empty((m, n + 1))
    for j in range(n + 1):
        bot_lo[:, j], bot_hi[:, j] = disc_segment_intervals(gp[j], eps, fp[:-1], fp[1:])

    if not (left_lo[0, 0] <= 0.0 <= left_hi[0, 0]):
        return False  # start corner not free

    llo = left_lo.tolist()
    lhi = left_hi.tolist()
    blo = bot_lo.tolist()
    bhi = bot_hi.tolist()

    # lr[i][j] / br[i][j]: lowest reachable parameter on the left/bottom
    # boundary of cell (i, j), inf when unreachable.
    lr = [[_INF] * n for _ in range(m + 1)]
    br = [[_INF] * (n + 1) for _ in range(m)]
    lr[0][0] = 0.0
    br[0][0] = 0.0
    for j in range(1, n):  # climb the left column
        if lr[0][j - 1] != _INF and lhi[0][j - 1] == 1.0 and llo[0][j] == 0.0:
            lr[0][j] = 0.0
    for i in range(1, m):  # walk the bottom row
        if br[i - 1][0] != _INF and bhi[i - 1][0] == 1.0 and blo[i][0] == 0.0:
            br[i][0] = 0.0

    for i in range(m):
        for j in range(n):
            cl = lr[i][j]
            cb = br[i][j]
            if cl == _INF and cb == _INF:
                continue
            # right boundary of this cell = left boundary of cell (i+1, j)
            if i + 1 <= m and llo[i + 1][j] <= lhi[i + 1][j]:
                if cb != _INF:
                    cand = llo[i + 1][j]
                elif cl <= lhi[i + 1][j]:
                    cand = max(llo[i + 1][j], cl)
                else:
                    cand = _INF
                if cand < lr[i + 1][j]:
                    lr[i + 1][j] = cand
            # top boundary of this cell = bottom boundary of cell (i, j+1)
            if j + 1 <= n and blo[i][j + 1] <= bhi[i][j + 1]:
                if cl != _INF:
                    cand = blo[i][j + 1]
                elif cb <= bhi[i][j + 1]:
                    cand = max(blo[i][j + 1], cb)
                else:
                    cand = _INF
                if cand < br[i][j + 1]:
                    br[i][j + 1] = cand

    return (lr[m][n - 1] != _INF and lhi[m][n - 1] == 1.0) or (
        br[m - 1][n] != _INF and bhi[m - 1][n] == 1.0
    )


def frechet_lower_bound(f: PolyLine, g: PolyLine) -> float:
    """max(||f(0)-g(0)||, ||f(1)-g(1)||), a lower bound on the distance."""
    fp = _prepared(f)
    gp = _prepared(g)
    return max(
        float(np.hypot(*(fp[0] - gp[0]))),
        float(np.hypot(*(fp[-1] - gp[-1]))),
    )


def frechet_distance(f: PolyLine, g: PolyLine, tol: float = DEFAULT_TOLERANCE) -> float:
    """Fréchet distance of two polylines to absolute tolerance ``tol``.

    Bisects :func:`frechet_decision` between the endpoint-distance lower
    bound and the maximum pairwise vertex distance.  The returned value d
    satisfies ``|d - true distance| <= tol``.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    fp = _prepared(f)
    gp = _prepared(g)
    lo = frechet_lower_bound(f, g)
    if frechet_decision(f, g, lo):
        return lo
    diff = fp[:, None, :] - gp[None, :, :]
    hi = float(np.hypot(diff[..., 0], diff[..., 1]).max())
    if not frechet_decision(f, g, hi):
        # Guard against rounding at the analytic upper bound.
        hi *= 1.0 + 1e-9
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if frechet_decision(f, g, mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def discrete_frechet(f: PolyLine, g: PolyLine) -> float:
    """Discrete Fréchet distance over the two vertex sequences.

    Classical O(mn) dynamic program; upper-bounds the continuous distance,
    and on curves resampled with max spacing s it exceeds it by at most s.
    """
    fp = PolyLine(f).points if not isinstance(f, PolyLine) else f.points
    gp = PolyLine(g).points if not isinstance(g, PolyLine) else g.points
    diff = fp[:, None, :] - gp[None, :, :]
    d = np.hypot(diff[..., 0], diff[..., 1]).tolist()
    m = len(fp)
    n = len(gp)
    prev = [0.0] * n
    row = d[0]
    acc = row[0]
    for j in range(n):
        acc = max(acc, row[j])
        prev[j] = acc
    for i in range(1, m):
        cur = [0.0] * n
        row = d[i]
        cur[0] = max(prev[0], row[0])
        for j in range(1, n):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = best if best > row[j] else row[j]
        prev = cur
    return float(prev[n - 1])
