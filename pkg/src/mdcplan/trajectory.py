"""Expand tour subpaths into metric robot motion.

Runs of consecutive Reeb edges merge their cells (phi inverse) and are swept
with one boustrophedon pass; crack edges follow their chords in service mode;
connectors become straight transit lines. Short transit links stitch the
pieces together so each robot's plan is a single continuous polyline. A
read-only validator reports pairwise exploration crossings outside the
connector exclusion balls (the sensing-conflict count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import Params
from .fusion import CONNECTOR, CRACK, REEB, PGEdge, PlanningGraph
from .geometry import _segment_crossings, polyline_intersections, polyline_length
from .reeb import Cell

EXPLORE, SERVICE, TRANSIT = "explore", "service", "transit"

_EPS = 1e-9


class TrajectoryError(Exception):
    """A subpath could not be expanded into a continuous plan."""


@dataclass
class TrajectorySegment:
    mode: str  # explore | service | transit
    polyline: np.ndarray  # (n, 2)
    duration_s: float

    @property
    def length_m(self) -> float:
        return polyline_length(self.polyline)

    @property
    def start(self) -> np.ndarray:
        return self.polyline[0]

    @property
    def end(self) -> np.ndarray:
        return self.polyline[-1]


@dataclass
class RobotPlan:
    robot_id: int
    segments: list[TrajectorySegment] = field(default_factory=list)

    @property
    def start(self) -> np.ndarray | None:
        return self.segments[0].polyline[0] if self.segments else None

    @property
    def end(self) -> np.ndarray | None:
        return self.segments[-1].polyline[-1] if self.segments else None

    @property
    def total_length_m(self) -> float:
        return float(sum(s.length_m for s in self.segments))

    @property
    def total_time_s(self) -> float:
        return float(sum(s.duration_s for s in self.segments))

    def continuity_gaps(self, tol: float = 1e-6) -> list[int]:
        """Indices i where segment i's end misses segment i+1's start."""
        bad = []
        for i in range(len(self.segments) - 1):
            gap = np.hypot(*(self.segments[i].end - self.segments[i + 1].start))
            if gap > tol:
                bad.append(i)
        return bad

    def polylines(self, mode: str | None = None) -> list[np.ndarray]:
        return [s.polyline for s in self.segments if mode is None or s.mode == mode]


def _speed(mode: str, params: Params) -> float:
    return params.service_speed if mode == SERVICE else params.explore_speed


def _lane_intervals(cells: list[Cell], col: int) -> list[tuple[float, float]]:
    """Free y-intervals (meters) of the merged cells at raster column `col`."""
    res = cells[0].resolution
    rows = sorted(c.interval_at(col) for c in cells if c.col_start <= col < c.col_end)
    merged: list[list[int]] = []
    for j0, j1 in rows:
        if merged and j0 <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], j1)
        else:
            merged.append([j0, j1])
    return [(j0 * res, j1 * res) for j0, j1 in merged]


def _lane_xs(x0: float, x1: float, r: float, res: float) -> list[float]:
    """Regular lane grid: spacing 2r starting r inside, far lane clamped.

    The clamp stops half a raster column short of x1 so the lane never sits
    on a cell boundary shared with a neighboring region. A span narrower
    than one lane width gets a single centerline pass.
    """
    span = x1 - x0
    if span <= 2.0 * r + _EPS:
        return [0.5 * (x0 + x1)]
    n = int(math.ceil(span / (2.0 * r)))
    return [min(x0 + r + 2.0 * r * k, x1 - 0.5 * res) for k in range(n)]


def _patch_lanes(
    cells: list[Cell], xs: list[float], r: float, res: float, c0: int, c1: int
) -> list[float]:
    """Add lanes until every column's free rows are within sensing reach.

    A lane at lateral offset dx reaches sqrt(r^2 - dx^2) beyond the rows it
    actually sweeps, so pockets whose intervals extend past both flanking
    lanes' spans (interval drift, or narrow cells falling between grid
    lanes) are left uncovered by the regular grid. Greedily drop a
    full-interval lane on the worst column until the residual dies out.
    """
    cols = list(range(c0, c1))
    centers = [(c + 0.5) * res for c in cols]
    col_ivs = [_lane_intervals(cells, c) for c in cols]

    def lane_at(lx: float) -> tuple[float, list[tuple[float, float]]]:
        lcol = min(max(int(math.floor(lx / res)), c0), c1 - 1)
        return lx, col_ivs[lcol - c0]

    lanes = [lane_at(x) for x in xs]

    def residual(i: int) -> float:
        ivs = col_ivs[i]
        if not ivs:
            return 0.0
        spans = []
        for lx, livs in lanes:
            dx = abs(centers[i] - lx)
            if dx >= r or not livs:
                continue
            s = math.sqrt(r * r - dx * dx)
            spans.extend((la - s, lb + s) for la, lb in livs)
        spans.sort()
        merged: list[list[float]] = []
        for a, b in spans:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        miss = 0.0
        for lo, hi in ivs:
            cov = sum(min(hi, b) - max(lo, a) for a, b in merged if b > lo and a < hi)
            miss += (hi - lo) - cov
        return miss

    out = list(xs)
    res_arr = [residual(i) for i in range(len(cols))]
    for _ in range(64):
        worst = max(range(len(cols)), key=res_arr.__getitem__, default=None)
        if worst is None or res_arr[worst] <= 0.5 * res:
            break
        lx = centers[worst]
        lanes.append((lx, col_ivs[worst]))
        out.append(lx)
        for i in range(len(cols)):
            if abs(centers[i] - lx) < r:
                res_arr[i] = residual(i)
    return sorted(out)


def _staircase(
    cells: list[Cell], col_a: int, col_b: int, side: str, start: tuple[float, float]
) -> list[tuple[str, list[tuple[float, float]]]]:
    """Lane-to-lane link hugging the union's `side` boundary.

    Verticals sit half a column inside whichever column is free over the
    whole step (the old column when the boundary retreats, the new one when
    it advances), so two regions meeting at a cell edge never draw on the
    same line. Where consecutive outer intervals do not even touch, the
    boundary jumps across an obstacle band and the link becomes a hop piece
    for the caller to treat as transit.
    """
    res = cells[0].resolution
    stp = 1 if col_b >= col_a else -1
    pieces: list[tuple[str, list[tuple[float, float]]]] = []
    pts: list[tuple[float, float]] = [tuple(start)]
    y = float(start[1])
    prev: tuple[float, float] | None = None
    for c in range(col_a, col_b + stp, stp):
        ivs = _lane_intervals(cells, c)
        if not ivs:
            continue  # defensive; the union is x-contiguous by construction
        outer = ivs[-1] if side == "top" else ivs[0]
        yn = outer[1] if side == "top" else outer[0]
        if prev is not None and abs(yn - y) > _EPS:
            edge_x = (c if stp == 1 else c + 1) * res
            touching = outer[0] <= prev[1] + _EPS and prev[0] <= outer[1] + _EPS
            if touching:
                shrink = (yn < y) if side == "top" else (yn > y)
                xv = edge_x - stp * 0.5 * res if shrink else edge_x + stp * 0.5 * res
                pts.append((xv, y))
                pts.append((xv, yn))
            else:
                x_old = edge_x - stp * 0.5 * res
                x_new = edge_x + stp * 0.5 * res
                pts.append((x_old, y))
                pieces.append(("step", pts))
                pieces.append(("hop", [(x_old, y), (x_new, yn)]))
                pts = [(x_new, yn)]
            y = yn
        prev = outer
    pieces.append(("step", pts))
    return pieces


def _clean(pts: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    for p in pts:
        if not out or abs(p[0] - out[-1][0]) > _EPS or abs(p[1] - out[-1][1]) > _EPS:
            out.append(p)
    return out


def _lanes(merged_cells: list[Cell], r: float) -> list[float]:
    """Lane abscissas for a cell union: the 2r grid plus repair lanes."""
    res = merged_cells[0].resolution
    c0 = min(c.col_start for c in merged_cells)
    c1 = max(c.col_end for c in merged_cells)
    xs = _lane_xs(c0 * res, c1 * res, r, res)
    return _patch_lanes(merged_cells, xs, r, res, c0, c1)


def _serpentine(
    merged_cells: list[Cell], xs: list[float], up0: bool
) -> list[tuple[str, np.ndarray]]:
    """Sweep the union along `xs` in order, first lane travelling up or down.

    Returns (kind, polyline) pieces in traversal order with shared
    endpoints: "lane" and "step" stay inside the union, "hop" crosses an
    obstacle band between stacked intervals or disjoint boundary steps and
    should move as transit.
    """
    res = merged_cells[0].resolution
    c0 = min(c.col_start for c in merged_cells)
    c1 = max(c.col_end for c in merged_cells)
    pieces: list[tuple[str, list[tuple[float, float]]]] = []
    up = up0
    prev_col = -1
    cur: tuple[float, float] | None = None
    for x in xs:
        col = min(max(int(math.floor(x / res)), c0), c1 - 1)
        ivs = _lane_intervals(merged_cells, col)
        if not ivs:
            continue  # defensive; the union is x-contiguous by construction
        lo, hi = ivs[0][0], ivs[-1][1]
        if cur is not None:
            side = "top" if not up else "bottom"  # the end the last lane stopped on
            link = _staircase(merged_cells, prev_col, col, side, cur)
            link[-1][1].append((x, lo if up else hi))
            pieces.extend(link)
        runs = [(a, b) for a, b in ivs] if up else [(b, a) for a, b in reversed(ivs)]
        for i, (a, b) in enumerate(runs):
            if i > 0:
                pieces.append(("hop", [cur, (x, a)]))
            pieces.append(("lane", [(x, a), (x, b)]))
            cur = (x, b)
        up = not up
        prev_col = col
    out = []
    for kind, pts in pieces:
        pts = _clean(pts)
        if len(pts) >= 2:
            out.append((kind, np.asarray(pts, dtype=float)))
    if not out:
        mid = ((c0 + c1) * 0.5 * res, 0.0)
        out.append(("lane", np.asarray([mid, mid])))
    return out


def sweep_pieces(
    merged_cells: list[Cell], r: float, entry
) -> list[tuple[str, np.ndarray]]:
    """Back-and-forth sweep of an x-contiguous cell union, piece by piece.

    Vertical lanes on a 2r grid plus coverage-repair lanes, clipped per
    column to the union; consecutive lanes joined along the region boundary.
    The sweep starts at the lane nearest `entry` and on the end nearest
    `entry`, then alternates.
    """
    if not merged_cells:
        raise ValueError("no cells to sweep")
    res = merged_cells[0].resolution
    c0 = min(c.col_start for c in merged_cells)
    c1 = max(c.col_end for c in merged_cells)
    xs = _lanes(merged_cells, r)
    entry = np.asarray(entry, dtype=float)
    if abs(entry[0] - xs[-1]) < abs(entry[0] - xs[0]) - _EPS:
        xs = xs[::-1]
    up0 = True
    for x in xs:
        col = min(max(int(math.floor(x / res)), c0), c1 - 1)
        ivs = _lane_intervals(merged_cells, col)
        if ivs:
            up0 = abs(entry[1] - ivs[0][0]) <= abs(entry[1] - ivs[-1][1])
            break
    return _serpentine(merged_cells, xs, up0)


def sweep_options(
    merged_cells: list[Cell], r: float
) -> list[list[tuple[str, np.ndarray]]]:
    """All distinct sweep realizations of a union (lane order x direction).

    Every option covers the same lanes at the same length; only the entry
    and exit corners differ, which matters when chaining sweeps.
    """
    if not merged_cells:
        raise ValueError("no cells to sweep")
    xs = _lanes(merged_cells, r)
    opts: list[list[tuple[str, np.ndarray]]] = []
    seen: set[tuple[float, float, float, float]] = set()
    for order in (xs, xs[::-1]):
        for up0 in (True, False):
            pieces = _serpentine(merged_cells, order, up0)
            a, b = pieces[0][1][0], pieces[-1][1][-1]
            key = (round(a[0], 6), round(a[1], 6), round(b[0], 6), round(b[1], 6))
            if key in seen:
                continue
            seen.add(key)
            opts.append(pieces)
    return opts


def boustrophedon(merged_cells: list[Cell], r: float, entry) -> np.ndarray:
    """The full sweep of a cell union as one polyline (hops included)."""
    pts: list[tuple[float, float]] = []
    for _, piece in sweep_pieces(merged_cells, r, entry):
        pts.extend(map(tuple, piece))
    pts = _clean(pts)
    if len(pts) < 2:
        pts = pts * 2
    return np.asarray(pts, dtype=float)


def crack_follow(edge: PGEdge, from_vertex: int) -> np.ndarray:
    """The edge's service chords oriented to start at `from_vertex`'s side."""
    s = edge.service_geometry if edge.service_geometry is not None else edge.geometry
    s = np.asarray(s, dtype=float)
    return s.copy() if from_vertex == edge.u else s[::-1].copy()


def _attach(
    segs: list[TrajectorySegment],
    cur: np.ndarray,
    poly: np.ndarray,
    mode: str,
    params: Params,
    gap_limit: float | None,
    context: str,
) -> np.ndarray:
    """Append `poly` as a segment, bridging any gap from `cur` with transit.

    `gap_limit` bounds the allowed gap for junctions that should coincide by
    construction (graph edges sharing a vertex); sweep entries/exits pass
    None and get an unbounded boundary-following transit link.
    """
    poly = np.asarray(poly, dtype=float)
    gap = float(np.hypot(*(poly[0] - cur)))
    if gap > _EPS and segs:  # an empty plan just starts where the action starts
        if gap_limit is not None and gap > gap_limit:
            raise TrajectoryError(f"discontinuity of {gap:.3f} m at {context}")
        link = np.asarray([cur, poly[0]])
        segs.append(TrajectorySegment(TRANSIT, link, gap / _speed(TRANSIT, params)))
    length = polyline_length(poly)
    if length > _EPS:
        prev = segs[-1] if segs else None
        if prev is not None and prev.mode == mode and \
                float(np.hypot(*(prev.polyline[-1] - poly[0]))) <= _EPS:
            segs[-1] = TrajectorySegment(
                mode,
                np.vstack([prev.polyline, poly[1:]]),
                prev.duration_s + length / _speed(mode, params),
            )
        else:
            segs.append(TrajectorySegment(mode, poly, length / _speed(mode, params)))
    return poly[-1]


def _item_options(
    graph: PlanningGraph, edge_ids: list[int], vertex_ids: list[int], params: Params
) -> list[list[list[tuple[str, np.ndarray]]]]:
    """Realization choices per geometry-bearing edge of a tour slice.

    Reeb edges become their cell's sweep options, crack edges the service
    chord in either direction; connectors move the walk without geometry
    (the attachment step bridges straight between whatever surrounds them).
    """
    items: list[list[list[tuple[str, np.ndarray]]]] = []
    for k, eid in enumerate(edge_ids):
        e = graph.edges[eid]
        if e.label == REEB:
            cell = graph.cells[e.cell_ref]
            items.append(sweep_options([cell], params.sensor_radius))
        elif e.label == CRACK:
            chord = crack_follow(e, vertex_ids[k])
            variants = [[(SERVICE, chord)]]
            if polyline_length(chord) > _EPS:
                variants.append([(SERVICE, chord[::-1].copy())])
            items.append(variants)
    return items


def edge_ports(
    graph: PlanningGraph, eid: int, params: Params
) -> list[tuple[np.ndarray, np.ndarray]]:
    """(entry, exit) pairs an edge's realized geometry can offer.

    Connectors carry no geometry and return an empty list.
    """
    e = graph.edges[eid]
    if e.label == REEB:
        opts = sweep_options([graph.cells[e.cell_ref]], params.sensor_radius)
        return [(o[0][1][0], o[-1][1][-1]) for o in opts]
    if e.label == CRACK:
        s = e.service_geometry if e.service_geometry is not None else e.geometry
        s = np.asarray(s, dtype=float)
        return [(s[0], s[-1]), (s[-1], s[0])]
    return []


def generate(
    graph: PlanningGraph,
    edge_ids: list[int],
    vertex_ids: list[int],
    params: Params,
    robot_id: int = 0,
) -> RobotPlan:
    """Expand a contiguous tour slice into a timed, continuous RobotPlan.

    `vertex_ids` is the walk through the slice (one longer than `edge_ids`).
    Each Reeb edge is swept once, each crack edge serviced once; transit
    bridges connect consecutive pieces. Sweep and chord orientations are
    chosen jointly (dynamic program over entry/exit corners) to minimize
    the total bridge length along the slice.
    """
    if len(vertex_ids) != len(edge_ids) + 1:
        raise ValueError("vertex walk must be one longer than the edge list")
    items = _item_options(graph, edge_ids, vertex_ids, params)
    segs: list[TrajectorySegment] = []
    cur = np.asarray(graph.vertices[vertex_ids[0]].position, dtype=float)
    if not items:
        return RobotPlan(robot_id, segs)

    # Viterbi over orientation variants: the robot starts at its first
    # piece, so only the bridges between consecutive items carry cost.
    cost = [0.0] * len(items[0])
    back: list[list[int]] = []
    for prev, nxt in zip(items, items[1:]):
        exits = [v[-1][1][-1] for v in prev]
        row_cost, row_back = [], []
        for v in nxt:
            entry = v[0][1][0]
            hops = [cost[i] + float(np.hypot(*(exits[i] - entry)))
                    for i in range(len(prev))]
            best = min(range(len(prev)), key=lambda i: hops[i])
            row_cost.append(hops[best])
            row_back.append(best)
        cost, back = row_cost, back + [row_back]
    choice = [0] * len(items)
    choice[-1] = min(range(len(cost)), key=lambda i: cost[i])
    for k in range(len(items) - 2, -1, -1):
        choice[k] = back[k][choice[k + 1]]

    for k, variants in enumerate(items):
        for kind, piece in variants[choice[k]]:
            mode = SERVICE if kind == SERVICE else (
                TRANSIT if kind == "hop" else EXPLORE)
            cur = _attach(segs, cur, piece, mode, params, None, f"item {k}")
    return RobotPlan(robot_id, segs)


@dataclass
class ConflictReport:
    """Read-only cross-robot interference summary."""

    conflicts: list[tuple[int, int, float, float]] = field(default_factory=list)
    service_overlap_m: float = 0.0

    @property
    def count(self) -> int:
        return len(self.conflicts)


def _collinear_overlap_m(pa: np.ndarray, pb: np.ndarray) -> float:
    """Total length of collinear overlap runs between two polylines."""
    total = 0.0
    for i in range(len(pa) - 1):
        for j in range(len(pb) - 1):
            pts = _segment_crossings(pa[i], pa[i + 1], pb[j], pb[j + 1])
            if len(pts) == 2:
                total += math.hypot(pts[1][0] - pts[0][0], pts[1][1] - pts[0][1])
    return total


def validate(plans: list[RobotPlan], connector_vertices, a: float) -> ConflictReport:
    """Count explore-path crossings outside radius-`a` connector balls.

    Also measures pairwise service-polyline overlap, which must be zero
    except for point contact at crack junctions.
    """
    centers = [np.asarray(c, dtype=float) for c in connector_vertices]
    report = ConflictReport()
    for i in range(len(plans)):
        for j in range(i + 1, len(plans)):
            for sa in plans[i].polylines(EXPLORE):
                for sb in plans[j].polylines(EXPLORE):
                    for x, y in polyline_intersections(sa, sb, centers, a):
                        report.conflicts.append((plans[i].robot_id, plans[j].robot_id, x, y))
            for sa in plans[i].polylines(SERVICE):
                for sb in plans[j].polylines(SERVICE):
                    report.service_overlap_m += _collinear_overlap_m(sa, sb)
    return report
