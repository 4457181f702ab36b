import numpy as np
import pytest

from mdcplan.config import Params
from mdcplan.fusion import CRACK, REEB
from mdcplan.geometry import RasterMask, dilate, mask_area, polyline_length
from mdcplan.reeb import decompose
from mdcplan.trajectory import (
    EXPLORE,
    SERVICE,
    TRANSIT,
    RobotPlan,
    TrajectorySegment,
    boustrophedon,
    crack_follow,
    edge_ports,
    generate,
    sweep_options,
    sweep_pieces,
    validate,
)

RES = 0.05
R = 1.52


def rect_cell(length_m, width_m):
    cells, _ = decompose(length_m, width_m, RasterMask.empty(length_m, width_m, RES))
    assert len(cells) == 1
    return cells[0]


def test_rectangle_sweep_regression():
    c = rect_cell(10.0, 6.0)
    sweep = boustrophedon([c], R, (0.0, 0.0))
    assert polyline_length(sweep) == pytest.approx(32.455, abs=1e-3)
    lane_xs = sorted({round(x, 3) for x, _ in sweep})
    assert len(lane_xs) == 4  # ceil(10 / (2 * 1.52)) vertical lanes


def test_sweep_starts_near_entry():
    c = rect_cell(10.0, 6.0)
    near_origin = boustrophedon([c], R, (0.0, 0.0))
    far_corner = boustrophedon([c], R, (10.0, 6.0))
    assert np.hypot(*near_origin[0]) < 2.5
    assert np.hypot(*(far_corner[0] - (10.0, 6.0))) < 2.5
    assert polyline_length(near_origin) == pytest.approx(polyline_length(far_corner))


def test_sweep_options_cover_four_corners_at_equal_length():
    c = rect_cell(10.0, 6.0)
    opts = sweep_options([c], R)
    assert len(opts) == 4
    lengths = []
    corners = set()
    for opt in opts:
        lengths.append(sum(polyline_length(p) for _, p in opt))
        a, b = opt[0][1][0], opt[-1][1][-1]
        corners.add((round(a[0], 2), round(a[1], 2)))
        corners.add((round(b[0], 2), round(b[1], 2)))
    assert max(lengths) - min(lengths) < 1e-6
    assert len(corners) == 4


def test_sweep_dilation_covers_the_cell():
    c = rect_cell(7.0, 5.0)
    sweep = boustrophedon([c], R, (0.0, 0.0))
    covered = dilate([tuple(p) for p in sweep], R, RES, 7.0, 5.0)
    assert mask_area(covered) >= 0.995 * 7.0 * 5.0


def test_narrow_strip_gets_single_centerline():
    c = rect_cell(2.0, 6.0)  # narrower than one lane spacing
    sweep = boustrophedon([c], R, (0.0, 0.0))
    assert {round(x, 6) for x, _ in sweep} == {1.0}


def test_edge_ports_by_label():
    from mdcplan.mapgen import gen_map
    from mdcplan.planner import build_planning_graph

    p = Params()
    pg = build_planning_graph(gen_map("uniform", 35, 2), p)
    for e in pg.edges:
        ports = edge_ports(pg, e.id, p)
        if e.label == REEB:
            assert 1 <= len(ports) <= 4
        elif e.label == CRACK:
            assert len(ports) == 2
            assert np.allclose(ports[0][0], ports[1][1])
        else:
            assert ports == []


def test_crack_follow_orients_to_vertex():
    from mdcplan.fusion import PGEdge

    chord = np.array([[0.0, 0.0], [1.0, 0.5], [2.0, 0.0]])
    e = PGEdge(0, 7, 9, CRACK, chord, polyline_length(chord), service_geometry=chord)
    assert np.allclose(crack_follow(e, 7), chord)
    assert np.allclose(crack_follow(e, 9), chord[::-1])


def _full_tour_plan(seed=3, density=35):
    from mdcplan.mapgen import gen_map
    from mdcplan.planner import build_planning_graph
    from mdcplan.search import global_fallback_tour

    p = Params()
    pg = build_planning_graph(gen_map("uniform", density, seed), p)
    tour = global_fallback_tour(pg)
    plan = generate(pg, tour.edge_ids, tour.vertices, p)
    return pg, tour, plan, p


def test_generate_is_continuous_and_timed():
    pg, tour, plan, p = _full_tour_plan()
    assert plan.continuity_gaps() == []
    for seg in plan.segments:
        speed = p.service_speed if seg.mode == SERVICE else p.explore_speed
        assert seg.duration_s == pytest.approx(seg.length_m / speed)
    assert plan.total_time_s == pytest.approx(sum(s.duration_s for s in plan.segments))


def test_generate_services_every_crack_edge():
    pg, tour, plan, p = _full_tour_plan()
    want = sum(
        polyline_length(e.service_geometry if e.service_geometry is not None else e.geometry)
        for e in pg.edges
        if e.label == CRACK
    )
    got = sum(s.length_m for s in plan.segments if s.mode == SERVICE)
    assert got == pytest.approx(want, rel=1e-6)


def test_generate_skips_leading_transit():
    # a robot is placed at its first working piece, so the plan never opens
    # with a transit hop toward it
    pg, tour, plan, p = _full_tour_plan(seed=5)
    assert plan.segments[0].mode != TRANSIT
    assert plan.segments


def test_validate_flags_crossing_and_respects_exclusion():
    a = RobotPlan(0, [TrajectorySegment(EXPLORE, np.array([[0.0, 0.0], [2.0, 2.0]]), 1.0)])
    b = RobotPlan(1, [TrajectorySegment(EXPLORE, np.array([[0.0, 2.0], [2.0, 0.0]]), 1.0)])
    hit = validate([a, b], [], 0.44)
    assert hit.count == 1
    x, y = hit.conflicts[0][2], hit.conflicts[0][3]
    assert (x, y) == pytest.approx((1.0, 1.0))
    masked = validate([a, b], [(1.0, 1.0)], 0.44)
    assert masked.count == 0


def test_validate_ignores_transit_and_measures_service_overlap():
    a = RobotPlan(0, [TrajectorySegment(TRANSIT, np.array([[0.0, 0.0], [2.0, 2.0]]), 1.0)])
    b = RobotPlan(1, [TrajectorySegment(EXPLORE, np.array([[0.0, 2.0], [2.0, 0.0]]), 1.0)])
    assert validate([a, b], [], 0.44).count == 0
    s1 = RobotPlan(0, [TrajectorySegment(SERVICE, np.array([[0.0, 0.0], [3.0, 0.0]]), 1.0)])
    s2 = RobotPlan(1, [TrajectorySegment(SERVICE, np.array([[1.0, 0.0], [2.0, 0.0]]), 1.0)])
    rep = validate([s1, s2], [], 0.44)
    assert rep.service_overlap_m == pytest.approx(1.0, abs=1e-6)
