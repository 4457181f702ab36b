"""Boustrophedon cellular decomposition of the free area and its Reeb graph.

The sweep runs along +x over raster columns. Free space is the workspace
minus the service area around cracks. Cells are x-monotone regions with one
row interval per column; connectivity changes between adjacent columns
produce critical points (open/close/split/merge), which become Reeb graph
vertices. Each cell maps to one Reeb edge (the bijection phi).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cracks import CrackGraph
from .geometry import RasterMask, dilate

KIND_RANK = {"close": 0, "merge": 1, "split": 2, "open": 3}


@dataclass
class Cell:
    id: int
    col_start: int
    intervals: list[tuple[int, int]]  # per column, half-open row range [j0, j1)
    resolution: float

    @property
    def col_end(self) -> int:  # exclusive
        return self.col_start + len(self.intervals)

    @property
    def x_range(self) -> tuple[float, float]:
        return (self.col_start * self.resolution, self.col_end * self.resolution)

    def area(self) -> float:
        return sum(j1 - j0 for j0, j1 in self.intervals) * self.resolution**2

    def interval_at(self, col: int) -> tuple[int, int]:
        return self.intervals[col - self.col_start]

    def polygon(self) -> np.ndarray:
        """Boundary polyline (staircase at raster resolution), closed."""
        res = self.resolution
        top = []
        bot = []
        for k, (j0, j1) in enumerate(self.intervals):
            x0 = (self.col_start + k) * res
            x1 = x0 + res
            top += [(x0, j1 * res), (x1, j1 * res)]
            bot += [(x0, j0 * res), (x1, j0 * res)]
        pts = bot + top[::-1]
        pts.append(bot[0])
        return np.asarray(pts)


@dataclass
class CriticalPoint:
    id: int
    position: np.ndarray  # (2,)
    kind: str  # open | close | split | merge


@dataclass
class ReebEdge:
    id: int
    u: int  # critical point id at the cell's left boundary
    v: int  # critical point id at the right boundary
    cell_id: int


@dataclass
class ReebGraph:
    vertices: list[CriticalPoint]
    edges: list[ReebEdge]
    cells: list[Cell]

    def phi(self, cell_id: int) -> int:
        """Cell id -> edge id."""
        return self._cell_to_edge[cell_id]

    def phi_inv(self, edge_id: int) -> int:
        return self.edges[edge_id].cell_id

    def __post_init__(self) -> None:
        self._cell_to_edge = {e.cell_id: e.id for e in self.edges}
        if len(self._cell_to_edge) != len(self.edges):
            raise AssertionError("phi is not a bijection: duplicate cell_id")


def service_area_mask(crack_graph: CrackGraph, r: float, resolution: float, length_m: float, width_m: float) -> RasterMask:
    """A_c: union of crack chord dilations by the perception radius."""
    out = RasterMask.empty(length_m, width_m, resolution)
    for e in crack_graph.edges:
        dilate(e.geometry, r, resolution, length_m, width_m, out=out)
    return out


def _column_runs(col: np.ndarray) -> list[tuple[int, int]]:
    """Maximal half-open runs of True in a boolean column."""
    idx = np.flatnonzero(np.diff(np.concatenate([[False], col, [False]]).astype(np.int8)))
    return [(int(idx[k]), int(idx[k + 1])) for k in range(0, len(idx), 2)]


def _overlap(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] < b[1] and b[0] < a[1]


def _sweep_cells(free: np.ndarray, resolution: float) -> list[Cell]:
    """Track per-column free runs into x-monotone cells."""
    nx = free.shape[0]
    cells: list[Cell] = []
    active: list[Cell] = []

    def finish(cell: Cell) -> None:
        cells.append(cell)

    for i in range(nx + 1):
        cur = _column_runs(free[i]) if i < nx else []
        # Bipartite overlap components between active cells and current runs.
        links = [
            (ai, ri)
            for ai, c in enumerate(active)
            for ri, run in enumerate(cur)
            if _overlap(c.intervals[-1], run)
        ]
        comp: dict[object, int] = {}

        def find(x):
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for ai in range(len(active)):
            comp[("a", ai)] = ("a", ai)
        for ri in range(len(cur)):
            comp[("r", ri)] = ("r", ri)
        for ai, ri in links:
            ra, rb = find(("a", ai)), find(("r", ri))
            if ra != rb:
                comp[rb] = ra
        groups: dict[object, tuple[list[int], list[int]]] = {}
        for ai in range(len(active)):
            groups.setdefault(find(("a", ai)), ([], []))[0].append(ai)
        for ri in range(len(cur)):
            groups.setdefault(find(("r", ri)), ([], []))[1].append(ri)
        new_active: list[Cell] = []
        consumed = [False] * len(cur)
        for key in sorted(groups, key=lambda k: str(k)):
            a_idx, r_idx = groups[key]
            if len(a_idx) == 1 and len(r_idx) == 1:
                cell = active[a_idx[0]]
                cell.intervals.append(cur[r_idx[0]])
                new_active.append(cell)
                consumed[r_idx[0]] = True
            else:
                for ai in a_idx:
                    finish(active[ai])
                for ri in r_idx:
                    new_active.append(Cell(-1, i, [cur[ri]], resolution))
                    consumed[ri] = True
        for ri, used in enumerate(consumed):
            if not used:
                new_active.append(Cell(-1, i, [cur[ri]], resolution))
        new_active.sort(key=lambda c: (c.intervals[-1][0], c.intervals[-1][1]))
        active = new_active
    cells.sort(key=lambda c: (c.col_start, c.intervals[0][0], c.intervals[0][1]))
    for k, c in enumerate(cells):
        c.id = k
    return cells


def _absorb_slivers(cells: list[Cell], min_area: float) -> list[Cell]:
    """Merge cells smaller than min_area into their largest x-adjacent
    neighbor when the column ranges are disjoint (the safe absorption)."""
    cells = [Cell(c.id, c.col_start, list(c.intervals), c.resolution) for c in cells]
    changed = True
    while changed:
        changed = False
        cells.sort(key=lambda c: (c.area(), c.col_start, c.intervals[0][0]))
        for s in cells:
            if s.area() >= min_area:
                continue
            hosts = []
            for h in cells:
                if h is s:
                    continue
                if h.col_end == s.col_start and _overlap(h.intervals[-1], s.intervals[0]):
                    hosts.append((h.area(), 1, h))
                elif s.col_end == h.col_start and _overlap(s.intervals[-1], h.intervals[0]):
                    hosts.append((h.area(), 0, h))
            hosts.sort(key=lambda t: (-t[0], t[1]))
            if not hosts:
                continue
            _, side, h = hosts[0]
            if side == 1:
                h.intervals.extend(s.intervals)
            else:
                h.intervals = s.intervals + h.intervals
                h.col_start = s.col_start
            cells.remove(s)
            changed = True
            break
    cells.sort(key=lambda c: (c.col_start, c.intervals[0][0], c.intervals[0][1]))
    for k, c in enumerate(cells):
        c.id = k
    return cells


def _merge_pass_through(cells: list[Cell]) -> bool:
    """Concatenate cell pairs forming a degenerate 1-in/1-out boundary."""
    by_start: dict[int, list[Cell]] = {}
    by_end: dict[int, list[Cell]] = {}
    for c in cells:
        by_start.setdefault(c.col_start, []).append(c)
        by_end.setdefault(c.col_end, []).append(c)
    for b in sorted(by_end):
        enders = by_end.get(b, [])
        starters = by_start.get(b, [])
        for e in enders:
            touching = [s for s in starters if _overlap(e.intervals[-1], s.intervals[0])]
            if len(touching) == 1:
                s = touching[0]
                back = [x for x in enders if _overlap(x.intervals[-1], s.intervals[0])]
                if len(back) == 1:
                    e.intervals.extend(s.intervals)
                    cells.remove(s)
                    return True
    return False


def decompose(
    length_m: float,
    width_m: float,
    service_mask: RasterMask,
    sliver_area: float | None = None,
) -> tuple[list[Cell], list[CriticalPoint]]:
    """Morse/boustrophedon decomposition of A_w = workspace minus A_c.

    Returns the final cells and critical points. `sliver_area` (if given)
    absorbs cells smaller than that area into an x-adjacent neighbor before
    deriving critical points.
    """
    free = ~service_mask.grid
    res = service_mask.resolution
    cells = _sweep_cells(free, res)
    if sliver_area is not None and sliver_area > 0:
        cells = _absorb_slivers(cells, sliver_area)
        while _merge_pass_through(cells):
            pass
        cells.sort(key=lambda c: (c.col_start, c.intervals[0][0], c.intervals[0][1]))
        for k, c in enumerate(cells):
            c.id = k
    cps = _derive_critical_points(cells, res, length_m)
    return cells, cps


def _derive_critical_points(cells: list[Cell], res: float, length_m: float) -> list[CriticalPoint]:
    """Group cell boundaries into events; one critical point per event."""
    events = []  # (boundary col, y_mid_rows, kind, left cell ids, right cell ids)
    by_start: dict[int, list[Cell]] = {}
    by_end: dict[int, list[Cell]] = {}
    for c in cells:
        by_start.setdefault(c.col_start, []).append(c)
        by_end.setdefault(c.col_end, []).append(c)
    for b in sorted(set(by_start) | set(by_end)):
        enders = by_end.get(b, [])
        starters = by_start.get(b, [])
        # Union-find components by row overlap across the boundary.
        nodes = [("e", c.id) for c in enders] + [("s", c.id) for c in starters]
        parent = {n: n for n in nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in enders:
            for s in starters:
                if _overlap(e.intervals[-1], s.intervals[0]):
                    re_, rs = find(("e", e.id)), find(("s", s.id))
                    if re_ != rs:
                        parent[rs] = re_
        groups: dict[object, tuple[list[Cell], list[Cell]]] = {}
        for e in enders:
            groups.setdefault(find(("e", e.id)), ([], []))[0].append(e)
        for s in starters:
            groups.setdefault(find(("s", s.id)), ([], []))[1].append(s)
        for key, (le, ri) in groups.items():
            rows = [iv for c in le for iv in [c.intervals[-1]]] + [
                c.intervals[0] for c in ri
            ]
            j_lo = min(r[0] for r in rows)
            j_hi = max(r[1] for r in rows)
            p, q = len(le), len(ri)
            if p == 0:
                kind = "open"
            elif q == 0:
                kind = "close"
            elif p == 1 and q > 1:
                kind = "split"
            elif p > 1:
                kind = "merge"
            else:
                kind = "merge"  # 1-1 residue after absorption; treated as merge
            x = min(max(b * res, 0.0), length_m)
            events.append((b, (j_lo + j_hi) / 2.0, kind, le, ri))
    events.sort(key=lambda ev: (ev[0], ev[1], KIND_RANK[ev[2]]))
    cps: list[CriticalPoint] = []
    for k, (b, j_mid, kind, le, ri) in enumerate(events):
        x = min(max(b * res, 0.0), length_m)
        cp = CriticalPoint(k, np.asarray([x, j_mid * res]), kind)
        cp.left_cells = [c.id for c in le]  # type: ignore[attr-defined]
        cp.right_cells = [c.id for c in ri]  # type: ignore[attr-defined]
        cps.append(cp)
    return cps


def build_reeb(cells: list[Cell], cps: list[CriticalPoint]) -> ReebGraph:
    """One edge per cell between its bounding critical points."""
    left_of: dict[int, int] = {}
    right_of: dict[int, int] = {}
    for cp in cps:
        for cid in cp.right_cells:  # type: ignore[attr-defined]
            left_of[cid] = cp.id
        for cid in cp.left_cells:  # type: ignore[attr-defined]
            right_of[cid] = cp.id
    edges = []
    for c in cells:
        if c.id not in left_of or c.id not in right_of:
            raise AssertionError(f"cell {c.id} lacks a bounding critical point")
        edges.append(ReebEdge(len(edges), left_of[c.id], right_of[c.id], c.id))
    return ReebGraph(list(cps), edges, list(cells))


def count_holes(obstacle: RasterMask) -> int:
    """8-connected obstacle components not touching the grid boundary.

    Matches the cycle count of the free-space Reeb graph under the sweep's
    4-connected free-space adjacency.
    """
    grid = obstacle.grid
    nx, ny = grid.shape
    runs: list[tuple[int, int, int]] = []  # (col, j0, j1)
    per_col: list[list[int]] = []
    for i in range(nx):
        ids = []
        for j0, j1 in _column_runs(grid[i]):
            ids.append(len(runs))
            runs.append((i, j0, j1))
        per_col.append(ids)
    parent = list(range(len(runs)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(1, nx):
        for ra in per_col[i - 1]:
            _, a0, a1 = runs[ra]
            for rb in per_col[i]:
                _, b0, b1 = runs[rb]
                if a0 < b1 + 1 and b0 < a1 + 1:  # 8-connectivity
                    x, y = find(ra), find(rb)
                    if x != y:
                        parent[y] = x
    touches = {}
    for k, (i, j0, j1) in enumerate(runs):
        r = find(k)
        t = touches.get(r, False)
        touches[r] = t or i == 0 or i == nx - 1 or j0 == 0 or j1 == ny
    return sum(1 for r, t in touches.items() if not t)
