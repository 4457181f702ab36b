"""Versioned JSON files for maps, plans, and metrics, plus the eval CSV."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .mapgen import Workspace, WorkspaceMap
from .trajectory import RobotPlan, TrajectorySegment


def _pts(poly: np.ndarray) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in np.asarray(poly, dtype=float)]


def save_map(wmap: WorkspaceMap, path) -> None:
    doc = {
        "version": 1,
        "workspace": {
            "length_m": wmap.workspace.length_m,
            "width_m": wmap.workspace.width_m,
        },
        "cracks": [_pts(c) for c in wmap.cracks],
        "meta": wmap.meta,
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_map(path) -> WorkspaceMap:
    doc = json.loads(Path(path).read_text())
    if doc.get("version") != 1:
        raise ValueError(f"unsupported map version {doc.get('version')!r}")
    ws = Workspace(doc["workspace"]["length_m"], doc["workspace"]["width_m"])
    cracks = [np.asarray(c, dtype=float) for c in doc["cracks"]]
    return WorkspaceMap(ws, cracks, dict(doc.get("meta", {})))


def save_plan(plans: list[RobotPlan], tour_edge_ids, objective: float, path) -> None:
    robots = []
    for plan in plans:
        robots.append({
            "id": plan.robot_id,
            "segments": [
                {"mode": s.mode, "polyline": _pts(s.polyline), "duration_s": s.duration_s}
                for s in plan.segments
            ],
            "start": None if plan.start is None else [float(v) for v in plan.start],
            "end": None if plan.end is None else [float(v) for v in plan.end],
        })
    doc = {
        "version": 1,
        "robots": robots,
        "tour_edge_ids": [int(e) for e in tour_edge_ids],
        "objective": float(objective),
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_plan(path) -> tuple[list[RobotPlan], list[int], float]:
    doc = json.loads(Path(path).read_text())
    if doc.get("version") != 1:
        raise ValueError(f"unsupported plan version {doc.get('version')!r}")
    plans = []
    for robot in doc["robots"]:
        segs = [
            TrajectorySegment(s["mode"], np.asarray(s["polyline"], dtype=float),
                              float(s["duration_s"]))
            for s in robot["segments"]
        ]
        plans.append(RobotPlan(int(robot["id"]), segs))
    return plans, [int(e) for e in doc["tour_edge_ids"]], float(doc["objective"])


def save_metrics(metrics: dict, path) -> None:
    Path(path).write_text(json.dumps(metrics, indent=1) + "\n")


def load_metrics(path) -> dict:
    return json.loads(Path(path).read_text())


_CSV_METRICS = [
    "total_path_length_m", "task_time_s", "time_variation_s", "sensor_coverage_pct",
    "completeness_pct", "filling_coverage_pct", "sensing_conflicts", "wall_time_ms",
    "tours_enumerated",
]


def map_category(meta: dict) -> str:
    dist = str(meta.get("distribution", "?"))
    dens = meta.get("density_pct", 0)
    return f"{dist[:1].upper()}{int(round(float(dens)))}"


def write_eval_csv(rows: list[dict], path) -> None:
    """Per-map rows plus mean/std aggregate rows per (category, planner)."""
    fields = ["map", "category", "planner", "robots"] + _CSV_METRICS
    groups: dict[tuple[str, str], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["category"], row["planner"]), []).append(row)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k, "") for k in fields})
        for (cat, planner), grp in sorted(groups.items()):
            for stat, fn in (("mean", np.mean), ("std", np.std)):
                agg = {"map": f"{stat}", "category": cat, "planner": planner,
                       "robots": grp[0]["robots"]}
                for key in _CSV_METRICS:
                    vals = [float(g[key]) for g in grp]
                    v = float(fn(vals))
                    agg[key] = round(v, 6) if math.isfinite(v) else v
                w.writerow(agg)
