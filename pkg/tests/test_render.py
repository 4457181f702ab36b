import numpy as np

from mdcplan.mapgen import Workspace, WorkspaceMap
from mdcplan.render import render_svg
from mdcplan.trajectory import EXPLORE, SERVICE, TRANSIT, RobotPlan, TrajectorySegment


def test_render_svg_contents(tmp_path):
    wmap = WorkspaceMap(
        Workspace(10.0, 6.0),
        [np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 1.5]])],
        {"seed": 1, "distribution": "uniform", "density_pct": 35.0},
    )
    plans = [
        RobotPlan(0, [
            TrajectorySegment(EXPLORE, np.array([[0.5, 0.5], [0.5, 5.5]]), 4.0),
            TrajectorySegment(TRANSIT, np.array([[0.5, 5.5], [2.0, 5.5]]), 1.0),
        ]),
        RobotPlan(1, [
            TrajectorySegment(SERVICE, np.array([[1.0, 1.0], [3.0, 1.5]]), 5.0),
        ]),
    ]
    out = tmp_path / "plan.svg"
    render_svg(wmap, plans, out)
    svg = out.read_text()
    assert svg.startswith("<svg")
    # workspace border
    assert '<rect x="0" y="0" width="10.0" height="6.0"' in svg
    # bold black crack under the trajectories
    assert 'stroke="black" stroke-width="0.18"' in svg
    # one distinct color per robot
    assert "#e41a1c" in svg and "#377eb8" in svg
    # dashed transit, star start markers, cross end markers
    assert "stroke-dasharray" in svg
    assert "<polygon points=" in svg
    assert svg.count("<polygon") == 2
    # y axis flips so workspace y=0.5 lands at svg y=5.5
    assert "M 0.500 5.500" in svg


def test_render_handles_empty_plan(tmp_path):
    wmap = WorkspaceMap(Workspace(4.0, 3.0), [])
    out = tmp_path / "empty.svg"
    render_svg(wmap, [RobotPlan(0, [])], out)
    text = out.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
