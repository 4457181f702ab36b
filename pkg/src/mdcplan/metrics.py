"""Evaluation metrics over finished plans.

The sensor coverage ratio sums per-robot dilated footprints, so cross-robot
overlap double-counts and values above 100 are expected on multi-robot
plans; completeness is the union version and caps at 100.
"""

from __future__ import annotations

import numpy as np

from .config import Params
from .geometry import RasterMask, dilate, distance_to_polyline, mask_area, sample_polyline
from .mapgen import WorkspaceMap
from .trajectory import SERVICE, RobotPlan, validate


def _robot_footprint(plan: RobotPlan, r: float, p: Params, ws) -> RasterMask:
    out = RasterMask.empty(ws.length_m, ws.width_m, p.resolution)
    for seg in plan.segments:
        dilate(seg.polyline, r, p.resolution, ws.length_m, ws.width_m, out=out)
    return out


def filling_coverage_pct(plans: list[RobotPlan], wmap: WorkspaceMap, params: Params) -> float:
    """Share of crack arc length within the service radius of service runs."""
    service = [poly for plan in plans for poly in plan.polylines(SERVICE)]
    covered = 0
    total = 0
    for crack in wmap.cracks:
        pts = sample_polyline(crack, params.resolution)
        total += len(pts)
        if not service:
            continue
        d = np.full(len(pts), np.inf)
        for poly in service:
            d = np.minimum(d, distance_to_polyline(pts, poly))
        covered += int(np.count_nonzero(d <= params.service_radius + 1e-9))
    if total == 0:
        return 100.0
    return 100.0 * covered / total


def compute_metrics(
    plans: list[RobotPlan],
    wmap: WorkspaceMap,
    params: Params,
    *,
    connector_positions=(),
    planner: str = "hcmr",
    wall_time_ms: float = 0.0,
    tours_enumerated: int = 0,
) -> dict:
    ws = wmap.workspace
    r = params.sensor_radius
    times = [p.total_time_s for p in plans if p.segments]
    footprints = [_robot_footprint(p, r, params, ws) for p in plans if p.segments]
    per_robot = sum(mask_area(m) for m in footprints)
    union = RasterMask.empty(ws.length_m, ws.width_m, params.resolution)
    for m in footprints:
        union.grid |= m.grid
    area = ws.area_m2
    report = validate(plans, connector_positions, params.service_radius)
    return {
        "total_path_length_m": float(sum(p.total_length_m for p in plans)),
        "task_time_s": float(max(times, default=0.0)),
        "time_variation_s": float(max(times, default=0.0) - min(times, default=0.0)),
        "sensor_coverage_pct": 100.0 * per_robot / area,
        "completeness_pct": 100.0 * mask_area(union) / area,
        "filling_coverage_pct": filling_coverage_pct(plans, wmap, params),
        "sensing_conflicts": report.count,
        "planner": planner,
        "wall_time_ms": float(wall_time_ms),
        "tours_enumerated": int(tours_enumerated),
    }
