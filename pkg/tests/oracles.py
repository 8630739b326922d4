"""Independent reference implementations used only by the tests.

Everything here is deliberately written from scratch against the raw graph
data (vertices, edges, geometry) so it shares no algorithmic code with the
package: walk counting by directed enumeration, map-matching by discrete
dynamic programming over densely resampled candidate paths, matching by
exhaustive search, and intersection radii by fine arc marching.
"""

from __future__ import annotations

import math

import numpy as np

from pathdist.geometry import PolyLine


def adjacency_from_edges(g) -> dict:
    adj: dict = {v: [] for v in g.vertices}
    for eid, e in g.edges.items():
        adj[e.u].append((eid, e.v))
        adj[e.v].append((eid, e.u))
    return adj


def directed_walks(g, k: int):
    """Every directed walk of link-length k as (vertex tuple, edge tuple)."""
    adj = adjacency_from_edges(g)

    def extend(vseq, eseq):
        if len(eseq) == k:
            yield tuple(vseq), tuple(eseq)
            return
        for eid, w in adj[vseq[-1]]:
            yield from extend(vseq + [w], eseq + [eid])

    for v in g.vertices:
        yield from extend([v], [])


def count_canonical_walks(g, k: int) -> int:
    """Canonical path count via (directed + palindromes) / 2."""
    total = 0
    palindromes = 0
    for vseq, eseq in directed_walks(g, k):
        total += 1
        if vseq == vseq[::-1] and eseq == eseq[::-1]:
            palindromes += 1
    assert (total + palindromes) % 2 == 0
    return (total + palindromes) // 2


def canonical_walks_up_to(g, kmax: int):
    """Canonical walks of link-length 1..kmax, deduplicated up to reversal."""
    seen = set()
    out = []
    for k in range(1, kmax + 1):
        for vseq, eseq in directed_walks(g, k):
            key = min((vseq, eseq), (vseq[::-1], eseq[::-1]))
            if key not in seen:
                seen.add(key)
                out.append(key)
    return out


def walk_geometry(g, vseq, eseq) -> np.ndarray:
    pts = []
    for i, eid in enumerate(eseq):
        e = g.edges[eid]
        seg = e.geometry.points
        if vseq[i] == e.v:
            seg = seg[::-1]
        pts.extend(seg if not pts else seg[1:])
    return np.asarray(pts)


def resample_points(pts: np.ndarray, spacing: float) -> tuple[np.ndarray, np.ndarray]:
    """Resampled points plus the arc length of each sample."""
    out = [pts[0]]
    arcs = [0.0]
    arc = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        seg = float(np.hypot(*(b - a)))
        if seg == 0.0:
            continue
        n = max(1, int(math.ceil(seg / spacing)))
        for j in range(1, n + 1):
            out.append(a + (j / n) * (b - a))
            arcs.append(arc + (j / n) * seg)
        arc += seg
    return np.asarray(out), np.asarray(arcs)


def _reach_rows(ok: np.ndarray, start_mask: np.ndarray) -> np.ndarray:
    """Discrete-Fréchet reachability with a free start inside start_mask.

    ok[i, j] says curve sample i and path sample j are within eps.  Returns
    the reachable set of the last row.  Moves: advance the curve, advance
    the path, or both; the path may begin at any start_mask sample.
    """
    n = ok.shape[1]
    idx = np.arange(n)

    def propagate(row_ok: np.ndarray, seeded: np.ndarray) -> np.ndarray:
        blocked = np.maximum.accumulate(np.where(~row_ok, idx, -1))
        seeds = np.maximum.accumulate(np.where(seeded & row_ok, idx, -2))
        return row_ok & (seeds > blocked)

    reach = propagate(ok[0], start_mask)
    for i in range(1, ok.shape[0]):
        base = reach.copy()
        base[1:] |= reach[:-1]
        reach = propagate(ok[i], base)
    return reach


class DiscreteMatchOracle:
    """Brute-force map-matching: min over enumerated candidate paths.

    Candidate paths are every canonical vertex-path up to a link-length cap,
    in both orientations, with start and end free anywhere on the first and
    last edge at a fine sample spacing.  The value per candidate is the
    discrete Fréchet distance over the resampled sequences, found by
    bisection on the reachability test above.

    Each edge is resampled once; a candidate's sample sequence is the
    concatenation of its edges' sample blocks (columns reversed for edges
    walked backwards).  The duplicated junction sample between blocks is a
    harmless repeated state in the discrete coupling.
    """

    def __init__(self, g, kmax: int = 6, spacing: float = 0.005):
        self.g = g
        self.spacing = spacing
        self.edge_ids = list(g.edges)
        self.edge_samples = {
            eid: resample_points(g.edges[eid].geometry.points, spacing)[0]
            for eid in self.edge_ids
        }
        self.candidates = []  # list of hop lists [(edge_id, forward), ...]
        for vseq, eseq in canonical_walks_up_to(g, kmax):
            hops = [
                (eid, vseq[i] == g.edges[eid].u) for i, eid in enumerate(eseq)
            ]
            self.candidates.append(hops)
            self.candidates.append([(eid, not fwd) for eid, fwd in hops[::-1]])

    def match_distance(self, curve_pts: np.ndarray, value_tol: float = 1e-4) -> float:
        curve, _ = resample_points(np.asarray(curve_pts, float), self.spacing)
        blocks = {}
        edge_min = {}
        for eid, samples in self.edge_samples.items():
            diff = curve[:, None, :] - samples[None, :, :]
            d = np.hypot(diff[..., 0], diff[..., 1])
            blocks[eid] = d
            edge_min[eid] = d.min(axis=1)

        # Cheap lower bound per candidate (every curve sample must come near
        # the candidate's image), then full evaluation in ascending-bound
        # order until the bound exceeds the best value found.
        scored = []
        for idx, hops in enumerate(self.candidates):
            mins = np.minimum.reduce([edge_min[eid] for eid, _ in hops])
            scored.append((float(mins.max()), idx))
        scored.sort()
        best = math.inf
        for lb, idx in scored:
            if lb >= best:
                break
            hops = self.candidates[idx]
            d = np.hstack(
                [blocks[eid] if fwd else blocks[eid][:, ::-1] for eid, fwd in hops]
            )
            n_first = blocks[hops[0][0]].shape[1]
            n_last = blocks[hops[-1][0]].shape[1]
            start_mask = np.zeros(d.shape[1], dtype=bool)
            start_mask[:n_first] = True
            end_mask = np.zeros(d.shape[1], dtype=bool)
            end_mask[d.shape[1] - n_last :] = True
            lo, hi = lb, float(d.max())
            if not self._feasible(d, hi, start_mask, end_mask):
                continue
            while hi - lo > value_tol:
                mid = 0.5 * (lo + hi)
                if self._feasible(d, mid, start_mask, end_mask):
                    hi = mid
                else:
                    lo = mid
            best = min(best, hi)
        return best

    @staticmethod
    def _feasible(d: np.ndarray, eps: float, start_mask, end_mask) -> bool:
        reach = _reach_rows(d <= eps, start_mask)
        return bool(np.any(reach & end_mask))


class DenseWalkOracle:
    """Brute-force map-matching over all sampled walks in the graph.

    The graph is resampled into a dense node chain per edge (plus one hub
    node per vertex joining the chains).  Candidate matched paths are every
    walk over these nodes, with free start and end nodes; unlike the
    vertex-path enumeration above this includes walks that reverse inside an
    edge.  The value is found by bisecting a per-row reachability sweep:
    from curve sample i-1 a walk may stay, step to a neighboring node, and
    wander freely among in-range nodes before the next curve sample.

    With curve and graph resampled at spacing ``s/2`` each, the result is
    within ``s`` of the true map-matching distance.
    """

    def __init__(self, g, spacing: float = 0.005):
        self.spacing = spacing
        nodes: list[np.ndarray] = []
        adj: list[list[int]] = []

        def add_node(pt) -> int:
            nodes.append(np.asarray(pt, float))
            adj.append([])
            return len(nodes) - 1

        def link(a: int, b: int) -> None:
            adj[a].append(b)
            adj[b].append(a)

        hubs = {vid: add_node(pos) for vid, pos in g.vertices.items()}
        for e in g.edges.values():
            fine, _ = resample_points(e.geometry.points, spacing)
            chain = [add_node(p) for p in fine]
            for a, b in zip(chain[:-1], chain[1:]):
                link(a, b)
            link(hubs[e.u], chain[0])
            link(hubs[e.v], chain[-1])
        self.nodes = np.asarray(nodes)
        self.adj = adj

    def match_distance(self, curve_pts: np.ndarray, value_tol: float = 1e-4) -> float:
        curve, _ = resample_points(np.asarray(curve_pts, float), self.spacing)
        diff = curve[:, None, :] - self.nodes[None, :, :]
        d = np.hypot(diff[..., 0], diff[..., 1])
        lo = float(d.min(axis=1).max())  # every curve sample needs a node
        hi = float(d.max(axis=0).min())  # constant path at the best node
        if self._feasible(d, lo):
            return lo
        while hi - lo > value_tol:
            mid = 0.5 * (lo + hi)
            if self._feasible(d, mid):
                hi = mid
            else:
                lo = mid
        return hi

    def _feasible(self, d: np.ndarray, eps: float) -> bool:
        ok = d <= eps
        if not ok[0].any():
            return False
        reach = ok[0].copy()  # free start: every in-range node
        for i in range(1, d.shape[0]):
            row_ok = ok[i]
            base = row_ok & reach
            frontier = list(np.nonzero(base)[0])
            nxt = base.copy()
            # One step down or diagonally, then wander within the row.
            for j in np.nonzero(reach)[0]:
                for nb in self.adj[j]:
                    if row_ok[nb] and not nxt[nb]:
                        nxt[nb] = True
                        frontier.append(nb)
            while frontier:
                j = frontier.pop()
                for nb in self.adj[j]:
                    if row_ok[nb] and not nxt[nb]:
                        nxt[nb] = True
                        frontier.append(nb)
            reach = nxt
            if not reach.any():
                return False
        return True


def exhaustive_max_matching(marbles: np.ndarray, holes: np.ndarray, max_dist: float) -> int:
    """Optimal matching size by branch and bound; fine up to ~8x8."""
    nm, nh = len(marbles), len(holes)
    allowed = [
        [j for j in range(nh) if np.hypot(*(marbles[i] - holes[j])) <= max_dist]
        for i in range(nm)
    ]

    best = 0

    def rec(i: int, used: int, size: int):
        nonlocal best
        if size + (nm - i) <= best:
            return
        if i == nm:
            best = max(best, size)
            return
        for j in allowed[i]:
            if not used & (1 << j):
                rec(i + 1, used | (1 << j), size + 1)
        rec(i + 1, used, size)

    rec(0, 0, 0)
    return best


def dense_radius_scan(g, v, d: float, resolution: int = 2560) -> float:
    """Intersection radius by marching each incident edge at fine arc steps."""
    center = np.asarray(g.vertices[v], dtype=float)
    incident = g.adjacency[v]
    if not incident:
        return math.inf
    walks = []
    for eid in incident:
        e = g.edges[eid]
        pts = e.geometry.points
        if v == e.v:
            pts = pts[::-1]
        fine, _ = resample_points(pts, max(PolyLine(pts).length() / 4096.0, 1e-9))
        walks.append(fine)
    if len(incident) == 1:
        return 0.0
    reach = min(float(np.hypot(w[:, 0] - center[0], w[:, 1] - center[1]).max()) for w in walks)
    if reach < d:
        return math.inf

    def crossing(walk: np.ndarray, r: float):
        dists = np.hypot(walk[:, 0] - center[0], walk[:, 1] - center[1])
        beyond = np.nonzero(dists >= r)[0]
        if beyond.size == 0:
            return None
        return walk[beyond[0]]

    for r in np.linspace(d, reach, resolution):
        ws = [crossing(w, float(r)) for w in walks]
        if any(w is None for w in ws):
            return math.inf
        ok = all(
            float(np.hypot(*(ws[i] - ws[j]))) > 2.0 * d
            for i in range(len(ws))
            for j in range(i + 1, len(ws))
        )
        if ok:
            return float(r)
    return math.inf


def random_geometric_graph(rng: np.random.Generator, n_vertices: int, extra_edges: int, box: float):
    """Random connected geometric graph: a random tree plus a few chords."""
    from pathdist.graph import EmbeddedGraph

    pts = rng.uniform(0.0, box, size=(n_vertices, 2))
    vertices = [(i, (float(x), float(y))) for i, (x, y) in enumerate(pts)]
    edges = []
    eid = 0
    seen = set()
    for i in range(1, n_vertices):
        j = int(rng.integers(0, i))
        edges.append((eid, (j, i)))
        seen.add((j, i))
        eid += 1
    tries = 0
    while extra_edges > 0 and tries < 50:
        a, b = sorted(rng.integers(0, n_vertices, size=2).tolist())
        tries += 1
        if a == b or (a, b) in seen:
            continue
        seen.add((a, b))
        edges.append((eid, (a, b)))
        eid += 1
        extra_edges -= 1
    return EmbeddedGraph(vertices, edges)


def random_curve_near_graph(rng: np.random.Generator, g, n_points: int, step: float) -> np.ndarray:
    """A short random walk starting near a random vertex of the graph."""
    ids = list(g.vertices)
    v = ids[int(rng.integers(0, len(ids)))]
    p = np.asarray(g.vertices[v], dtype=float) + rng.uniform(-step, step, 2)
    pts = [p]
    for _ in range(n_points - 1):
        p = p + rng.uniform(-step, step, 2)
        pts.append(p)
    return np.asarray(pts)
