import numpy as np
import pytest

from mdcplan.config import Params
from mdcplan.mapgen import WorkspaceMap, Workspace, gen_map
from mdcplan.planner import build_planning_graph, plan_map

METRIC_KEYS = [
    "total_path_length_m", "task_time_s", "time_variation_s", "sensor_coverage_pct",
    "completeness_pct", "filling_coverage_pct", "sensing_conflicts", "planner",
    "wall_time_ms", "tours_enumerated",
]


def test_hcmr_end_to_end_small_map():
    wmap = gen_map("uniform", 35, 3)
    res = plan_map(wmap, 3)
    assert list(res.metrics.keys()) == METRIC_KEYS
    assert res.metrics["planner"] == "hcmr"
    assert res.metrics["sensing_conflicts"] == 0
    assert res.metrics["completeness_pct"] >= 99.5
    assert res.metrics["filling_coverage_pct"] == 100.0
    assert res.metrics["tours_enumerated"] >= 1
    assert len(res.plans) == 3
    for plan in res.plans:
        assert plan.continuity_gaps() == []
    pg = build_planning_graph(wmap, Params())
    assert sorted(res.tour_edge_ids) == list(range(len(pg.edges)))
    assert res.metrics["total_path_length_m"] == pytest.approx(
        sum(p.total_length_m for p in res.plans)
    )


def test_greedy_branch():
    wmap = gen_map("uniform", 35, 3)
    res = plan_map(wmap, 2, planner="greedy")
    assert res.metrics["planner"] == "greedy"
    assert res.tour_edge_ids == []
    assert res.metrics["tours_enumerated"] == 0
    assert len(res.plans) == 2
    assert res.metrics["filling_coverage_pct"] == 100.0


def test_unknown_planner_rejected():
    with pytest.raises(ValueError):
        plan_map(gen_map("uniform", 35, 3), 1, planner="dijkstra")


def test_crack_free_single_sweep():
    wmap = WorkspaceMap(Workspace(30.5, 29.0), [], {"seed": 0})
    res = plan_map(wmap, 1)
    assert len(res.plans) == 1
    segs = res.plans[0].segments
    assert len(segs) == 1 and segs[0].mode == "explore"
    assert res.metrics["completeness_pct"] >= 99.5
    assert res.metrics["sensor_coverage_pct"] >= 99.5


def test_extra_robots_idle():
    wmap = WorkspaceMap(Workspace(30.5, 29.0), [], {"seed": 0})
    res = plan_map(wmap, 3)
    assert len(res.plans) == 3
    working = [p for p in res.plans if p.segments]
    assert len(working) == 1  # one Reeb edge cannot split further
    assert res.metrics["completeness_pct"] >= 99.5


def test_max_tours_cap_recorded():
    wmap = gen_map("uniform", 50, 2)
    res = plan_map(wmap, 3, max_tours=1)
    assert res.metrics["tours_enumerated"] == 1
    assert res.metrics["sensing_conflicts"] == 0
    assert res.metrics["filling_coverage_pct"] == 100.0


def test_alpha_tilts_objective():
    wmap = gen_map("uniform", 35, 3)
    lo = plan_map(wmap, 3, alpha=0.0)
    hi = plan_map(wmap, 3, alpha=10.0)
    assert hi.objective > lo.objective
    total = sum(p.total_length_m for p in lo.plans)
    assert lo.objective == pytest.approx(total, rel=1e-6)
