import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcplan.config import Params
from mdcplan.geometry import (
    RasterMask,
    dilate,
    distance_to_polyline,
    mask_area,
    point_segment_distance,
    polyline_intersections,
    polyline_length,
    sample_polyline,
)
from oracles import capsule_area


def test_params_defaults_and_validation():
    p = Params()
    assert (p.length_m, p.width_m) == (30.5, 29.0)
    assert (p.sensor_radius, p.service_radius) == (1.52, 0.44)
    assert (p.explore_speed, p.service_speed) == (1.2, 0.4)
    assert p.resolution == 0.05 and p.alpha == 1.0
    with pytest.raises(ValueError):
        Params(resolution=0.0)
    with pytest.raises(ValueError):
        Params(length_m=-1.0)


def test_polyline_length_and_sampling():
    poly = [(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)]
    assert polyline_length(poly) == pytest.approx(7.0)
    pts = sample_polyline(poly, 0.5)
    assert np.allclose(pts[0], (0.0, 0.0)) and np.allclose(pts[-1], (3.0, 4.0))
    gaps = np.hypot(*np.diff(pts, axis=0).T)
    assert gaps.max() <= 0.5 + 1e-9


def test_point_segment_distance_basics():
    pts = np.array([(0.0, 1.0), (2.0, 0.0), (-1.0, 0.0)])
    d = point_segment_distance(pts, (0.0, 0.0), (1.0, 0.0))
    assert np.allclose(d, [1.0, 1.0, 1.0])
    # degenerate segment falls back to point distance
    d0 = point_segment_distance(np.array([(3.0, 4.0)]), (0.0, 0.0), (0.0, 0.0))
    assert d0[0] == pytest.approx(5.0)


def test_distance_to_polyline_picks_nearest_part():
    poly = [(0.0, 0.0), (10.0, 0.0), (10.0, 10.0)]
    d = distance_to_polyline(np.array([(5.0, 2.0), (12.0, 10.0)]), poly)
    assert d[0] == pytest.approx(2.0)
    assert d[1] == pytest.approx(2.0)


def test_mask_roundtrip_and_area():
    m = RasterMask.empty(2.0, 1.0, 0.05)
    assert m.grid.shape == (40, 20)
    assert mask_area(m) == 0.0
    f = RasterMask.full(2.0, 1.0, 0.05)
    assert mask_area(f) == pytest.approx(2.0, rel=1e-6)


def test_dilate_single_segment_matches_capsule_area():
    m = dilate([(2.0, 2.0), (6.0, 2.0)], 0.5, 0.01, 10.0, 4.0)
    want = capsule_area(4.0, 0.5)
    assert mask_area(m) == pytest.approx(want, rel=2e-2)


@settings(max_examples=30, deadline=None)
@given(
    x0=st.floats(1.5, 6.0), y0=st.floats(1.5, 4.0),
    dx=st.floats(-2.0, 2.0), dy=st.floats(-1.0, 1.0),
    r=st.floats(0.1, 0.8),
)
def test_dilate_area_oracle(x0, y0, dx, dy, r):
    seg = [(x0, y0), (x0 + dx, y0 + dy)]
    m = dilate(seg, r, 0.02, 10.0, 8.0)
    want = capsule_area(math.hypot(dx, dy), r)
    assert mask_area(m) == pytest.approx(want, rel=0.05, abs=0.02)


def test_dilate_clips_to_workspace():
    m = dilate([(0.0, 0.0), (0.0, 0.0)], 1.0, 0.05, 5.0, 5.0)
    # only the quarter disc inside the workspace survives
    assert mask_area(m) == pytest.approx(math.pi / 4, rel=0.05)


def test_polyline_intersections_crossing_and_parallel():
    hits = polyline_intersections([(0.0, 0.0), (2.0, 2.0)], [(0.0, 2.0), (2.0, 0.0)])
    assert len(hits) == 1
    assert np.allclose(hits[0], (1.0, 1.0))
    assert polyline_intersections([(0.0, 0.0), (1.0, 0.0)], [(0.0, 1.0), (1.0, 1.0)]) == []


def test_polyline_intersections_collinear_overlap_reports_ends():
    hits = polyline_intersections([(0.0, 0.0), (3.0, 0.0)], [(1.0, 0.0), (5.0, 0.0)])
    xs = sorted(h[0] for h in hits)
    assert xs == pytest.approx([1.0, 3.0])
