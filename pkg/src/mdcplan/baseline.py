"""Workspace-splitting greedy baseline.

Splits the workspace into N equal vertical slabs, decomposes each slab's
free space on its own, and has each robot repeatedly move straight to the
nearest unvisited required item in its slab (crack chords assigned by arc
midpoint, slab cells), sweeping cells on first touch and servicing chords
on contact. A deliberately simple comparison planner: it shares the
trajectory primitives but none of the tour search, so conflicts between
neighboring robots are possible and expected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Params
from .cracks import build_crack_graph
from .geometry import RasterMask
from .mapgen import WorkspaceMap
from .reeb import Cell, decompose, service_area_mask
from .trajectory import EXPLORE, SERVICE, TRANSIT, RobotPlan, TrajectorySegment, _attach, sweep_pieces


@dataclass
class _Item:
    item_id: int
    kind: str  # "crack" | "cell"
    endpoints: list[np.ndarray]
    chord: np.ndarray | None = None
    cell: Cell | None = None


def _cell_endpoints(cell: Cell) -> list[np.ndarray]:
    res = cell.resolution
    x0, x1 = cell.x_range
    j0a, j1a = cell.intervals[0]
    j0b, j1b = cell.intervals[-1]
    return [
        np.array([x0, j0a * res]),
        np.array([x0, j1a * res]),
        np.array([x1, j0b * res]),
        np.array([x1, j1b * res]),
    ]


def _arc_midpoint(poly: np.ndarray) -> np.ndarray:
    seg = np.linalg.norm(np.diff(poly, axis=0), axis=1)
    total = float(seg.sum())
    if total <= 0:
        return poly[0]
    target = 0.5 * total
    acc = 0.0
    for i, s in enumerate(seg):
        if acc + s >= target:
            t = (target - acc) / s
            return poly[i] + t * (poly[i + 1] - poly[i])
        acc += s
    return poly[-1]


def slab_items(wmap: WorkspaceMap, n_robots: int, params: Params) -> list[list[_Item]]:
    """Required items per slab: crack chords by midpoint, per-slab cells."""
    ws = wmap.workspace
    gc = build_crack_graph(wmap.cracks, params.service_radius, params.resolution)
    mask = service_area_mask(gc, params.sensor_radius, params.resolution,
                             ws.length_m, ws.width_m)
    nx = mask.grid.shape[0]
    sliver = (2.0 * params.service_radius) ** 2
    pools: list[list[_Item]] = [[] for _ in range(n_robots)]
    next_id = 0
    for e in gc.edges:
        chord = np.asarray(e.geometry, dtype=float)
        mid = _arc_midpoint(chord)
        slab = min(int(mid[0] / ws.length_m * n_robots), n_robots - 1)
        pools[slab].append(_Item(next_id, "crack", [chord[0], chord[-1]], chord=chord))
        next_id += 1
    for k in range(n_robots):
        c_lo = k * nx // n_robots
        c_hi = (k + 1) * nx // n_robots
        sub = RasterMask(mask.resolution, mask.grid[c_lo:c_hi].copy())
        cells, _ = decompose((c_hi - c_lo) * params.resolution, ws.width_m, sub, sliver)
        for cell in cells:
            shifted = Cell(next_id, cell.col_start + c_lo, list(cell.intervals),
                           cell.resolution)
            pools[k].append(_Item(next_id, "cell", _cell_endpoints(shifted), cell=shifted))
            next_id += 1
    return pools


def greedy_plan(wmap: WorkspaceMap, n_robots: int, params: Params) -> list[RobotPlan]:
    if n_robots < 1:
        raise ValueError("need at least one robot")
    ws = wmap.workspace
    plans = []
    for k, items in enumerate(slab_items(wmap, n_robots, params)):
        segs: list[TrajectorySegment] = []
        cur = np.array([(k + 0.5) * ws.length_m / n_robots, 0.5 * ws.width_m])
        while items:
            best = min(
                items,
                key=lambda it: (min(float(np.hypot(*(p - cur))) for p in it.endpoints),
                                it.item_id),
            )
            items.remove(best)
            if best.kind == "crack":
                chord = best.chord
                if np.hypot(*(chord[-1] - cur)) < np.hypot(*(chord[0] - cur)):
                    chord = chord[::-1]
                cur = _attach(segs, cur, chord, SERVICE, params, None,
                              f"crack {best.item_id}")
            else:
                for kind, piece in sweep_pieces([best.cell], params.sensor_radius, cur):
                    mode = TRANSIT if kind == "hop" else EXPLORE
                    cur = _attach(segs, cur, piece, mode, params, None,
                                  f"cell {best.item_id}")
        plans.append(RobotPlan(k, segs))
    return plans
