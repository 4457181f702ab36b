"""Fuse the crack graph and Reeb graph into the simplified planning graph.

Split/merge critical points are matched to their nearest crack vertex and
each matched pair is contracted to one vertex at the critical point's
position. Remaining odd-degree vertices, apart from the designated global
start and end, are paired by minimum-weight connectors so the result carries
an open Eulerian path from start to end. Disconnected leftovers (free-space
pockets) are attached with doubled transit connectors, which preserve vertex
parity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .cracks import CrackGraph
from .geometry import polyline_length
from .reeb import Cell, ReebGraph

CRACK, REEB, CONNECTOR = "crack", "reeb", "connector"


@dataclass
class PGVertex:
    id: int
    position: np.ndarray
    provenance: str  # crack | critical | merged

    @property
    def g(self) -> float:
        return float(self.position[0])


@dataclass
class PGEdge:
    id: int
    u: int
    v: int
    label: str  # crack | reeb | connector
    geometry: np.ndarray  # full traversal path, oriented u -> v
    length: float
    cell_ref: int | None = None
    service_geometry: np.ndarray | None = None  # pure chord part of crack edges

    def other(self, vid: int) -> int:
        return self.v if vid == self.u else self.u


@dataclass
class PlanningGraph:
    vertices: dict[int, PGVertex] = field(default_factory=dict)
    edges: list[PGEdge] = field(default_factory=list)
    merged_ids: set[int] = field(default_factory=set)  # V_m
    start: int = -1
    end: int = -1
    cells: dict[int, Cell] = field(default_factory=dict)
    matcher: str = "exhaustive"
    doubled_connectors: int = 0

    def degree(self, vid: int) -> int:
        return sum(1 for e in self.edges if vid in (e.u, e.v)) + sum(
            1 for e in self.edges if e.u == e.v == vid
        )

    def degrees(self) -> dict[int, int]:
        d = {vid: 0 for vid in self.vertices}
        for e in self.edges:
            d[e.u] += 1
            d[e.v] += 1
        return d

    def adjacency(self) -> dict[int, list[PGEdge]]:
        adj: dict[int, list[PGEdge]] = {vid: [] for vid in self.vertices}
        for e in self.edges:
            adj[e.u].append(e)
            if e.v != e.u:
                adj[e.v].append(e)
        return adj

    def connected_components(self) -> list[set[int]]:
        adj = self.adjacency()
        seen: set[int] = set()
        comps = []
        for vid in sorted(self.vertices):
            if vid in seen:
                continue
            stack, comp = [vid], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                for e in adj[x]:
                    stack.append(e.other(x))
            seen |= comp
            comps.append(comp)
        return comps


def _straight(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.asarray([p, q], dtype=float)


def min_weight_pairing(points: dict[int, np.ndarray]) -> tuple[list[tuple[int, int]], str]:
    """Minimum-weight perfect matching on an even vertex set.

    Exhaustive (bitmask DP) up to 10 points, greedy closest-pair beyond.
    """
    ids = sorted(points)
    n = len(ids)
    if n == 0:
        return [], "exhaustive"
    if n % 2:
        raise ValueError("odd vertex count cannot be paired")
    pos = np.asarray([points[i] for i in ids])
    dist = np.hypot(pos[:, None, 0] - pos[None, :, 0], pos[:, None, 1] - pos[None, :, 1])
    if n <= 10:
        best: dict[int, tuple[float, list[tuple[int, int]]]] = {0: (0.0, [])}
        for mask in range(1 << n):
            if mask not in best:
                continue
            cost, pairs = best[mask]
            try:
                i = next(k for k in range(n) if not mask & (1 << k))
            except StopIteration:
                continue
            for j in range(i + 1, n):
                if mask & (1 << j):
                    continue
                m2 = mask | (1 << i) | (1 << j)
                c2 = cost + dist[i, j]
                if m2 not in best or c2 < best[m2][0] - 1e-12:
                    best[m2] = (c2, pairs + [(ids[i], ids[j])])
        return best[(1 << n) - 1][1], "exhaustive"
    left = set(range(n))
    pairs = []
    while left:
        cand = sorted(
            (dist[i, j], i, j) for i in left for j in left if i < j
        )
        _, i, j = cand[0]
        pairs.append((ids[i], ids[j]))
        left -= {i, j}
    return pairs, "greedy"


def match_and_augment(g_c: CrackGraph, g_w: ReebGraph, resolution: float = 0.05) -> PlanningGraph:
    """Build G_sim: fused multigraph with an open Eulerian path start/end."""
    pg = PlanningGraph()
    crack_id_of: dict[int, int] = {}
    for vid in sorted(g_c.vertices):
        nid = len(pg.vertices)
        pg.vertices[nid] = PGVertex(nid, np.asarray(g_c.vertices[vid], dtype=float), "crack")
        crack_id_of[vid] = nid
    crit_id_of: dict[int, int] = {}
    for cp in g_w.vertices:
        nid = len(pg.vertices)
        pg.vertices[nid] = PGVertex(nid, np.asarray(cp.position, dtype=float), "critical")
        crit_id_of[cp.id] = nid
    for cell in g_w.cells:
        pg.cells[cell.id] = cell

    raw_edges: list[PGEdge] = []
    for e in g_c.edges:
        u, v = crack_id_of[e.u], crack_id_of[e.v]
        raw_edges.append(PGEdge(-1, u, v, CRACK, e.geometry, e.length))
    for e in g_w.edges:
        u, v = crit_id_of[e.u], crit_id_of[e.v]
        geom = _straight(pg.vertices[u].position, pg.vertices[v].position)
        raw_edges.append(
            PGEdge(-1, u, v, REEB, geom, float(np.hypot(*(geom[1] - geom[0]))), e.cell_id)
        )

    # Match split/merge critical points to their nearest crack vertex.
    matches: list[tuple[int, int]] = []
    if crack_id_of:
        crack_ids = sorted(crack_id_of.values())
        crack_pos = np.asarray([pg.vertices[i].position for i in crack_ids])
        for cp in g_w.vertices:
            if cp.kind not in ("split", "merge"):
                continue
            d = np.hypot(crack_pos[:, 0] - cp.position[0], crack_pos[:, 1] - cp.position[1])
            matches.append((crit_id_of[cp.id], crack_ids[int(np.argmin(d))]))

    pg = _contract(pg, raw_edges, matches)
    _pair_remaining_odd(pg)
    _repair_connectivity(pg)
    _anchor_endpoints(pg)
    return pg


def _contract(pg: PlanningGraph, raw_edges: list[PGEdge], matches: list[tuple[int, int]]) -> PlanningGraph:
    """Collapse matched pairs; reject matches that would self-loop a Reeb edge."""
    group = {vid: vid for vid in pg.vertices}

    def find(x: int) -> int:
        while group[x] != x:
            group[x] = group[group[x]]
            x = group[x]
        return x

    reeb_pairs = {frozenset((e.u, e.v)) for e in raw_edges if e.label == REEB}
    accepted: list[tuple[int, int]] = []
    for crit, crack in matches:
        rc, rk = find(crit), find(crack)
        if rc == rk:
            continue
        members_c = [v for v in pg.vertices if find(v) == rc]
        members_k = [v for v in pg.vertices if find(v) == rk]
        bad = any(
            frozenset((a, b)) in reeb_pairs for a in members_c for b in members_k
        )
        if bad:
            continue  # keep the Reeb edge; the critical point pairs generically
        group[rk] = rc
        accepted.append((crit, crack))

    out = PlanningGraph(cells=pg.cells, matcher=pg.matcher)
    rep_position: dict[int, np.ndarray] = {}
    rep_is_merged: dict[int, bool] = {}
    for crit, crack in accepted:
        r = find(crit)
        if r not in rep_position:
            rep_position[r] = pg.vertices[crit].position  # critical point's position
            rep_is_merged[r] = True
    id_map: dict[int, int] = {}
    for vid in sorted(pg.vertices):
        r = find(vid)
        if r not in id_map:
            nid = len(out.vertices)
            pos = rep_position.get(r, pg.vertices[r].position)
            prov = "merged" if rep_is_merged.get(r, False) else pg.vertices[r].provenance
            out.vertices[nid] = PGVertex(nid, np.asarray(pos, dtype=float), prov)
            if prov == "merged":
                out.merged_ids.add(nid)
            id_map[r] = nid
    for e in raw_edges:
        u, v = id_map[find(e.u)], id_map[find(e.v)]
        if u == v:
            if e.label == CRACK:
                # Keep the crack serviced: split the looped chord at its
                # midpoint into two parallel edges (a legal 2-edge cycle).
                pm = out.vertices[u].position
                a, b = e.geometry[0], e.geometry[-1]
                mid = 0.5 * (a + b)
                nid = len(out.vertices)
                out.vertices[nid] = PGVertex(nid, mid, "crack")
                g1 = _dedup(np.asarray([pm, a, mid]))
                g2 = _dedup(np.asarray([mid, b, pm]))
                out.edges.append(
                    PGEdge(len(out.edges), u, nid, CRACK, g1, polyline_length(g1),
                           service_geometry=np.asarray([a, mid]))
                )
                out.edges.append(
                    PGEdge(len(out.edges), nid, u, CRACK, g2, polyline_length(g2),
                           service_geometry=np.asarray([mid, b]))
                )
            continue  # connector/reeb self-loops vanish
        geom = e.geometry
        service = e.geometry if e.label == CRACK else None
        # Re-anchor geometry to moved (contracted) endpoint positions; the
        # added lead-in/lead-out is transit, so crack edges keep the pure
        # chord separately in service_geometry.
        pu, pv = out.vertices[u].position, out.vertices[v].position
        if e.label == REEB:
            geom = _straight(pu, pv)
        else:
            parts = [pu[None, :], geom, pv[None, :]]
            geom = _dedup(np.vstack(parts))
        out.edges.append(
            PGEdge(len(out.edges), u, v, e.label, geom, polyline_length(geom), e.cell_ref, service)
        )
    return out


def _dedup(geom: np.ndarray) -> np.ndarray:
    """Drop consecutive duplicate points (keeps at least two points)."""
    keep = [0]
    for i in range(1, len(geom)):
        if np.hypot(*(geom[i] - geom[keep[-1]])) > 1e-9:
            keep.append(i)
    if len(keep) == 1:
        keep.append(len(geom) - 1)
    return geom[keep]


def _pair_remaining_odd(pg: PlanningGraph) -> None:
    deg = pg.degrees()
    odd = sorted(v for v, d in deg.items() if d % 2 == 1)
    if not odd:
        live = [v for v, d in deg.items() if d > 0] or sorted(pg.vertices)
        if live:
            pg.start = pg.end = min(
                live, key=lambda v: (pg.vertices[v].g, pg.vertices[v].position[1], v)
            )
        return
    keyed = sorted(odd, key=lambda v: (pg.vertices[v].g, pg.vertices[v].position[1], v))
    pg.start = keyed[0]
    pg.end = keyed[-1]
    rest = {v: pg.vertices[v].position for v in odd if v not in (pg.start, pg.end)}
    pairs, matcher = min_weight_pairing(rest)
    pg.matcher = matcher
    for u, v in pairs:
        geom = _straight(pg.vertices[u].position, pg.vertices[v].position)
        pg.edges.append(
            PGEdge(len(pg.edges), u, v, CONNECTOR, geom, float(np.hypot(*(geom[1] - geom[0]))))
        )


def _repair_connectivity(pg: PlanningGraph) -> None:
    """Join leftover components with doubled connectors (parity-neutral).

    Vertices with no edges carry no coverage work and are left alone.
    """
    while True:
        deg = pg.degrees()
        comps = [c for c in pg.connected_components() if any(deg[v] > 0 for v in c)]
        if len(comps) <= 1:
            return
        base = max(comps, key=lambda c: (pg.start in c, len(c)))
        best = None
        for comp in comps:
            if comp is base:
                continue
            for u in sorted(base):
                pu = pg.vertices[u].position
                for v in sorted(comp):
                    d = float(np.hypot(*(pg.vertices[v].position - pu)))
                    if best is None or d < best[0] - 1e-12:
                        best = (d, u, v)
        assert best is not None
        _, u, v = best
        geom = _straight(pg.vertices[u].position, pg.vertices[v].position)
        for _ in range(2):
            pg.edges.append(PGEdge(len(pg.edges), u, v, CONNECTOR, geom, best[0]))
        pg.doubled_connectors += 1


def _anchor_endpoints(pg: PlanningGraph) -> None:
    deg = pg.degrees()
    odd = sorted(v for v, d in deg.items() if d % 2 == 1)
    if len(odd) == 0:
        if pg.start < 0 and pg.vertices:
            pg.start = pg.end = min(
                pg.vertices, key=lambda v: (pg.vertices[v].g, pg.vertices[v].position[1], v)
            )
        return
    if len(odd) != 2:
        raise AssertionError(f"expected 2 odd vertices after pairing, got {len(odd)}")
    keyed = sorted(odd, key=lambda v: (pg.vertices[v].g, pg.vertices[v].position[1], v))
    pg.start, pg.end = keyed[0], keyed[1]


def eulerian_lower_bound(pg: PlanningGraph) -> int:
    """Factorial product bound on Eulerian tour count over merged vertices.

    Returns 1 when there are no merged vertices or any has degree below 4.
    """
    if not pg.merged_ids:
        return 1
    deg = pg.degrees()
    if min(deg[v] for v in pg.merged_ids) < 4:
        return 1
    out = 1
    for v in sorted(pg.merged_ids):
        out *= math.factorial(deg[v] - 1)
    return out
