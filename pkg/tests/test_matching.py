import numpy as np
import pytest

from pathdist.errors import StructuralError
from pathdist.frechet import frechet_distance
from pathdist.geometry import PolyLine
from pathdist.graph import EmbeddedGraph
from pathdist.matching import map_match_distance, match_decision

from oracles import (
    DenseWalkOracle,
    DiscreteMatchOracle,
    random_curve_near_graph,
    random_geometric_graph,
)


def segment_graph():
    return EmbeddedGraph([(0, (0, 0)), (1, (10, 0))], [("e", (0, 1))])


def test_curve_equal_to_edge_matches_at_zero(grid6):
    eid = 13
    curve = grid6.edges[eid].geometry
    assert match_decision(curve, grid6, 0.0)


def test_offset_segment_decision_and_distance():
    h = segment_graph()
    curve = PolyLine([(0, 1), (10, 1)])
    assert not match_decision(curve, h, 0.999)
    assert match_decision(curve, h, 1.001)
    assert map_match_distance(curve, h, 1e-3) == pytest.approx(1.0, abs=1e-3)


def test_empty_graph_behavior():
    empty = EmbeddedGraph([], [])
    curve = PolyLine([(0, 0), (1, 0)])
    assert match_decision(curve, empty, 5.0) is False
    with pytest.raises(StructuralError):
        map_match_distance(curve, empty)


def test_partial_edge_match_is_free():
    # The curve covers only half an edge; matched paths may start and end
    # inside edge interiors, so the distance is zero.
    h = segment_graph()
    curve = PolyLine([(2, 0), (6, 0)])
    assert map_match_distance(curve, h, 1e-3) == pytest.approx(0.0, abs=1e-3)


def test_mid_edge_turnaround_is_allowed(grid6):
    curve = PolyLine([(0, 0), (1.2, 0), (0, 0), (0, 2)])
    assert map_match_distance(curve, grid6, 1e-3) == pytest.approx(0.0, abs=1e-3)


def test_decision_monotone_in_eps(grid6):
    rng = np.random.default_rng(2)
    for _ in range(5):
        curve = PolyLine(rng.uniform(0, 10, (4, 2)))
        answers = [match_decision(curve, grid6, e) for e in np.linspace(0, 15, 30)]
        assert answers == sorted(answers)


def test_reversal_invariance(grid6):
    rng = np.random.default_rng(3)
    for _ in range(5):
        curve = PolyLine(rng.uniform(0, 10, (4, 2)))
        d = map_match_distance(curve, grid6, 1e-3)
        dr = map_match_distance(curve.reversed(), grid6, 1e-3)
        assert dr == pytest.approx(d, abs=2e-3)


def test_adding_edges_never_hurts():
    rng = np.random.default_rng(4)
    for seed in range(5):
        h = random_geometric_graph(np.random.default_rng(seed), 7, 2, 10.0)
        # Superset graph: same vertices/edges plus one more vertex and edge.
        vertices = list(h.vertices.items()) + [(999, (5.0, 5.0))]
        edges = [(eid, (e.u, e.v, e.geometry)) for eid, e in h.edges.items()]
        edges.append(("extra", (0, 999)))
        h_sup = EmbeddedGraph(vertices, edges)
        curve = PolyLine(rng.uniform(0, 10, (4, 2)))
        assert map_match_distance(curve, h_sup, 1e-3) <= map_match_distance(curve, h, 1e-3) + 2e-3


def test_endpoint_lower_bound(grid6):
    from pathdist.spatial import nearest_point_on_graph

    rng = np.random.default_rng(5)
    for _ in range(5):
        curve = PolyLine(rng.uniform(-5, 15, (4, 2)))
        d = map_match_distance(curve, grid6, 1e-3)
        for endpoint in (curve.points[0], curve.points[-1]):
            nd, _, _ = nearest_point_on_graph(grid6, endpoint)
            assert d >= nd - 1e-3


def test_exhaustive_search_flag_matches_index(grid6):
    rng = np.random.default_rng(6)
    for _ in range(3):
        curve = PolyLine(rng.uniform(0, 10, (4, 2)))
        d1 = map_match_distance(curve, grid6, 1e-3, use_index=True)
        d2 = map_match_distance(curve, grid6, 1e-3, use_index=False)
        assert d1 == d2


def test_witness_is_a_valid_matching_path(grid6):
    rng = np.random.default_rng(7)
    for _ in range(5):
        curve = PolyLine(rng.uniform(0, 10, (4, 2)))
        d = map_match_distance(curve, grid6, 1e-3)
        # d is within tol of the true value, so d + tol certifies a match.
        ok, witness = match_decision(curve, grid6, d + 1e-3, return_witness=True)
        assert ok and witness is not None
        # The witness realizes the decision: Fréchet-close to the curve...
        assert frechet_distance(curve, witness, 1e-4) <= d + 2e-3
        # ...and every witness point lies on the graph.
        from pathdist.spatial import nearest_point_on_graph

        for pt in witness.points:
            nd, _, _ = nearest_point_on_graph(grid6, pt)
            assert nd <= 1e-9


def test_matches_bruteforce_oracle_on_small_graphs():
    # Spot check here; the acceptance suite runs the full 25-instance sweep.
    spacing = 0.005
    for seed in (0, 1, 2):
        rng = np.random.default_rng(seed)
        h = random_geometric_graph(rng, 6, 2, 1.0)
        dense = DenseWalkOracle(h, spacing=spacing)
        for _ in range(2):
            curve_pts = random_curve_near_graph(rng, h, 4, 0.25)
            d = map_match_distance(PolyLine(curve_pts), h, 1e-3)
            assert d == pytest.approx(dense.match_distance(curve_pts), abs=1e-3 + 0.01)


def bend_edges(g, rng, amount):
    """Copy of ``g`` with a random interior bend point on every edge."""
    vertices = list(g.vertices.items())
    edges = []
    for eid, e in g.edges.items():
        a = np.asarray(g.vertices[e.u], float)
        b = np.asarray(g.vertices[e.v], float)
        mid = 0.5 * (a + b) + rng.uniform(-amount, amount, 2)
        edges.append((eid, (e.u, e.v, PolyLine([a, mid, b]))))
    return EmbeddedGraph(vertices, edges)


def test_polyline_edges_match_dense_oracle():
    # Interior bend points exercise the junction boundaries of the
    # free-space surface, which straight-edge graphs never touch.
    for seed in range(6):
        rng = np.random.default_rng(100 + seed)
        h = bend_edges(random_geometric_graph(rng, 6, 2, 1.0), rng, 0.15)
        dense = DenseWalkOracle(h, spacing=0.005)
        curve_pts = random_curve_near_graph(rng, h, 4, 0.3)
        d = map_match_distance(PolyLine(curve_pts), h, 1e-3)
        assert d == pytest.approx(dense.match_distance(curve_pts), abs=1e-3 + 0.01)


def test_contraction_preserves_match_distance(grid6):
    # Contracting degree-2 chains changes the combinatorics but not the
    # geometric image, so matching distances are unchanged.
    from pathdist.graph import contract_degree_two

    contracted = contract_degree_two(grid6)
    assert len(contracted.edges) < len(grid6.edges)
    rng = np.random.default_rng(12)
    for _ in range(5):
        curve = PolyLine(rng.uniform(0, 10, (4, 2)))
        d1 = map_match_distance(curve, grid6, 1e-3)
        d2 = map_match_distance(curve, contracted, 1e-3)
        assert d2 == pytest.approx(d1, abs=2e-3)


def test_enumerated_path_family_upper_bounds_distance():
    # The trimmed vertex-path family is a subset of all matched paths, so
    # its brute-force minimum can only sit above the implementation value.
    rng = np.random.default_rng(9)
    h = random_geometric_graph(rng, 5, 1, 1.0)
    enum = DiscreteMatchOracle(h, kmax=5, spacing=0.01)
    for _ in range(2):
        curve_pts = random_curve_near_graph(rng, h, 3, 0.25)
        d = map_match_distance(PolyLine(curve_pts), h, 1e-3)
        assert d <= enum.match_distance(curve_pts) + 1e-3 + 0.02
