"""End-to-end planning entry point.

Wires the map through crack graph, decomposition, graph fusion, tour
enumeration, allocation, and trajectory generation, and packages metrics.
Falls back to a single Hierholzer tour when the hierarchy search declines
the instance, recording the reason in the result notes.
"""

from __future__ import annotations

import time

import numpy as np
from dataclasses import dataclass, field

from .allocation import balanced_partition, edge_costs, rank_tours
from .baseline import greedy_plan
from .config import Params
from .cracks import build_crack_graph
from .fusion import CONNECTOR, PlanningGraph, match_and_augment
from .hierarchy import HierarchyError, build_hierarchy
from .mapgen import WorkspaceMap
from .metrics import compute_metrics
from .reeb import build_reeb, decompose, service_area_mask
from .search import PlannerInfeasible, Tour, enumerate_tours, global_fallback_tour
from .trajectory import RobotPlan, edge_ports, generate


@dataclass
class PlanResult:
    plans: list[RobotPlan]
    tour_edge_ids: list[int]
    objective: float
    metrics: dict
    notes: list[str] = field(default_factory=list)


def build_planning_graph(wmap: WorkspaceMap, params: Params) -> PlanningGraph:
    ws = wmap.workspace
    gc = build_crack_graph(wmap.cracks, params.service_radius, params.resolution)
    mask = service_area_mask(gc, params.sensor_radius, params.resolution,
                             ws.length_m, ws.width_m)
    sliver = (2.0 * params.service_radius) ** 2
    cells, cps = decompose(ws.length_m, ws.width_m, mask, sliver)
    rg = build_reeb(cells, cps)
    return match_and_augment(gc, rg, params.resolution)


def _jump_bonus(edge_ids, ports) -> list[float]:
    """Per-cut-position reward: the bridge a cut there would delete.

    For consecutive geometry-bearing edges the minimal exit-to-entry
    distance over their orientation choices approximates the transit a
    single robot pays between them; every cut position separating the pair
    earns that amount (connectors in between carry no geometry).
    """
    bonus = [0.0] * len(edge_ids)
    geo = [i for i, eid in enumerate(edge_ids) if ports[eid]]
    for i, j in zip(geo, geo[1:]):
        d = min(
            float(np.hypot(*(exit_a - entry_b)))
            for _, exit_a in ports[edge_ids[i]]
            for entry_b, _ in ports[edge_ids[j]]
        )
        for pos in range(i + 1, j + 1):
            bonus[pos] = d
    return bonus


def _improve_tour(tour, ports, max_moves: int = 200):
    """Shorten a tour's realized bridges by reversing closed sub-walks.

    Whenever a vertex appears twice in the walk, the stretch between the
    occurrences is a closed sub-walk that can run in either direction; the
    reversal that shrinks the exit-to-entry bridge proxy the most is applied
    until no move helps. The edge multiset, and hence coverage, never
    changes.
    """
    E = list(tour.edge_ids)
    V = list(tour.vertices)
    cache: dict[tuple[int, int], float] = {}

    def bridge(e1: int, e2: int) -> float:
        key = (e1, e2)
        if key not in cache:
            cache[key] = min(
                float(np.hypot(*(exit_a - entry_b)))
                for _, exit_a in ports[e1]
                for entry_b, _ in ports[e2]
            )
        return cache[key]

    def proxy(seq: list[int]) -> float:
        geo = [eid for eid in seq if ports[eid]]
        return sum(bridge(x, y) for x, y in zip(geo, geo[1:]))

    cur = proxy(E)
    for _ in range(max_moves):
        occ: dict[int, list[int]] = {}
        for idx, v in enumerate(V):
            occ.setdefault(v, []).append(idx)
        best = None
        for idxs in occ.values():
            for a in range(len(idxs)):
                for b in range(a + 1, len(idxs)):
                    i, j = idxs[a], idxs[b]
                    if j - i < 2:
                        continue
                    cand = E[:i] + E[i:j][::-1] + E[j:]
                    gain = cur - proxy(cand)
                    if gain > 1e-9 and (best is None or gain > best[0]):
                        best = (gain, i, j, cand)
        if best is None:
            break
        _, i, j, E = best
        V = V[:i + 1] + V[i + 1:j][::-1] + V[j:]
        cur -= best[0]
    return Tour(E, V)


def connector_positions(graph: PlanningGraph) -> list:
    pts = []
    for e in graph.edges:
        if e.label == CONNECTOR:
            pts.append(tuple(graph.vertices[e.u].position))
            pts.append(tuple(graph.vertices[e.v].position))
    return sorted(set(pts))


def plan_map(
    wmap: WorkspaceMap,
    n_robots: int,
    params: Params | None = None,
    planner: str = "hcmr",
    alpha: float | None = None,
    max_tours: int | None = None,
    refine_k: int = 8,
) -> PlanResult:
    if planner not in ("hcmr", "greedy"):
        raise ValueError(f"unknown planner {planner!r}")
    p = params or Params()
    a = p.alpha if alpha is None else alpha
    t0 = time.perf_counter()
    notes: list[str] = []

    if planner == "greedy":
        plans = greedy_plan(wmap, n_robots, p)
        times = [pl.total_time_s for pl in plans]
        objective = sum(pl.total_length_m for pl in plans) + a * max(times, default=0.0)
        wall = (time.perf_counter() - t0) * 1e3
        metrics = compute_metrics(plans, wmap, p, planner="greedy", wall_time_ms=wall)
        return PlanResult(plans, [], float(objective), metrics, notes)

    graph = build_planning_graph(wmap, p)
    tours_enumerated = 0
    try:
        hier = build_hierarchy(graph)
        sr = enumerate_tours(graph, hier, max_tours=max_tours)
        tours = sr.tours
        tours_enumerated = len(tours)
        notes.extend(sr.notes)
        if sr.capped:
            notes.append(f"tour enumeration capped at {max_tours}")
    except (HierarchyError, PlannerInfeasible) as exc:
        tours = [global_fallback_tour(graph)]
        tours_enumerated = 1
        notes.append(f"fallback tour: {exc}")
    costs = edge_costs(graph, p)
    ranked = rank_tours(tours, costs, n_robots, alpha=a)
    ports = {eid: edge_ports(graph, eid, p) for eid in range(len(graph.edges))}
    # The cost model ranks tours well but misses bridge transits between
    # consecutive items, so realize the top few and keep the shortest plan.
    # Re-partition with a jump bonus first: among time-optimal cut sets,
    # prefer cuts at the big spatial jumps a single robot would have to
    # drive (each robot starts at its own subpath, so cut jumps cost nothing).
    candidates = []
    seen_keys = set()
    for tour, _part, _model_obj in ranked[:max(1, refine_k)]:
        for t in (tour, _improve_tour(tour, ports)):
            if t.key() not in seen_keys:
                seen_keys.add(t.key())
                candidates.append(t)
    best = None
    for tour in candidates:
        times = [costs[eid].time_s for eid in tour.edge_ids]
        part = balanced_partition(
            times, min(n_robots, len(times)),
            cut_bonus=_jump_bonus(tour.edge_ids, ports))
        plans = [
            generate(graph, tour.edge_ids[lo:hi], tour.vertices[lo:hi + 1], p, rid)
            for rid, (lo, hi) in enumerate(part.slices())
        ]
        realized = sum(pl.total_length_m for pl in plans) + a * max(
            (pl.total_time_s for pl in plans), default=0.0)
        if best is None or realized < best[0] - 1e-9:
            best = (realized, tour, plans)
    objective, tour, plans = best
    while len(plans) < n_robots:  # more robots than subpaths: the rest idle
        plans.append(RobotPlan(len(plans), []))
    wall = (time.perf_counter() - t0) * 1e3
    metrics = compute_metrics(
        plans, wmap, p,
        connector_positions=connector_positions(graph),
        planner="hcmr",
        wall_time_ms=wall,
        tours_enumerated=tours_enumerated,
    )
    return PlanResult(plans, list(tour.edge_ids), float(objective), metrics, notes)
