import math

import numpy as np
import pytest

from pathdist.errors import InputError
from pathdist.geometry import (
    FreeInterval,
    PolyLine,
    disc_segment_interval,
    disc_segment_intervals,
    nearest_point_on_polyline,
    point_segment_distance,
    point_to_polyline_distance,
    segments_intersect,
)


def test_polyline_requires_finite_coordinates():
    with pytest.raises(InputError):
        PolyLine([(0.0, float("nan"))])
    with pytest.raises(InputError):
        PolyLine([(0.0, float("inf")), (1.0, 0.0)])


def test_polyline_single_point_is_valid_degenerate_curve():
    p = PolyLine([(3.0, 4.0)])
    assert len(p) == 1
    assert p.length() == 0.0


def test_polyline_length_and_collapse():
    p = PolyLine([(0, 0), (1, 0), (1, 0), (1, 2)])
    assert p.length() == pytest.approx(3.0)
    collapsed = p.collapsed()
    assert len(collapsed) == 3
    assert collapsed.length() == pytest.approx(3.0)


def test_polyline_point_at_and_resample():
    p = PolyLine([(0, 0), (4, 0)])
    assert np.allclose(p.point_at(1.0), (1, 0))
    assert np.allclose(p.point_at(99.0), (4, 0))
    r = p.resampled(1.0)
    assert len(r) == 5
    assert np.allclose(r.points[2], (2, 0))


def test_point_segment_distance_examples():
    assert point_segment_distance((0, 1), (-1, 0), (1, 0)) == pytest.approx(1.0)
    assert point_segment_distance((2, 2), (0, 0), (1, 0)) == pytest.approx(math.sqrt(5))
    assert point_segment_distance((5, 5), (5, 5), (5, 5)) == 0.0


def test_point_to_polyline_distance_examples():
    g = PolyLine([(-1, 0), (1, 0)])
    assert point_to_polyline_distance((0.5, 0.0), g) == 0.0
    assert point_to_polyline_distance((0, 1), g) == pytest.approx(1.0)
    assert point_to_polyline_distance((2, 2), PolyLine([(0, 0), (1, 0)])) == pytest.approx(
        math.sqrt(5)
    )


def test_nearest_point_on_polyline_projects_onto_interior():
    d, q = nearest_point_on_polyline((0.25, 3.0), PolyLine([(0, 0), (1, 0)]))
    assert d == pytest.approx(3.0)
    assert np.allclose(q, (0.25, 0.0))


def test_disc_segment_intervals_basic():
    a = np.array([[0.0, 0.0]])
    b = np.array([[10.0, 0.0]])
    lo, hi = disc_segment_intervals((5.0, 0.0), 1.0, a, b)
    assert lo[0] == pytest.approx(0.4)
    assert hi[0] == pytest.approx(0.6)

    lo, hi = disc_segment_intervals((5.0, 2.0), 1.0, a, b)
    assert lo[0] > hi[0]  # empty

    # Tangent disc yields a single-point interval.
    lo, hi = disc_segment_intervals((5.0, 1.0), 1.0, a, b)
    assert lo[0] == pytest.approx(0.5)
    assert hi[0] == pytest.approx(0.5)


def test_disc_segment_intervals_degenerate_segment():
    a = np.array([[2.0, 2.0]])
    lo, hi = disc_segment_intervals((2.0, 2.0), 0.0, a, a)
    assert lo[0] == 0.0 and hi[0] == 1.0
    lo, hi = disc_segment_intervals((3.0, 2.0), 0.5, a, a)
    assert lo[0] > hi[0]


def test_disc_segment_interval_scalar_form():
    got = disc_segment_interval((5.0, 0.0), 1.0, (0.0, 0.0), (10.0, 0.0))
    assert got == FreeInterval(pytest.approx(0.4), pytest.approx(0.6))
    assert got.lo <= got.hi
    # Empty intersections are explicit, never lo > hi.
    assert disc_segment_interval((5.0, 9.0), 1.0, (0.0, 0.0), (10.0, 0.0)) is None


def test_disc_segment_interval_outside_reach_is_empty():
    a = np.array([[0.0, 0.0]])
    b = np.array([[1.0, 0.0]])
    lo, hi = disc_segment_intervals((5.0, 0.0), 1.0, a, b)
    assert lo[0] > hi[0]


def test_segments_intersect_cases():
    assert segments_intersect((0, 0), (2, 2), (0, 2), (2, 0))
    assert segments_intersect((0, 0), (1, 0), (1, 0), (2, 5))  # shared endpoint
    assert segments_intersect((0, 0), (2, 0), (1, 0), (1, 0))  # point on segment
    assert not segments_intersect((0, 0), (1, 0), (0, 1), (1, 1))
    assert not segments_intersect((0, 0), (1, 0), (2, 0), (3, 0))  # collinear gap
    assert segments_intersect((0, 0), (2, 0), (1, 0), (3, 0))  # collinear overlap
