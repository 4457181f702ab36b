"""Segment-sequence search and expansion into concrete Eulerian tours.

Per component, a depth-first cyclic merging search (cms) enumerates orders of
its bridge/cycle segments: after a bridge any vertex-adjacent segment may
follow; after a cycle only cycles that are vertex-adjacent to the last one
and edge-adjacent to the running merged cycle, falling back to bridges when
no such cycle exists. Merges must share a single simple path with the merged
cycle, sequences that strand the unvisited remainder or swallow an unvisited
cycle are pruned, and a sequence survives only if it expands into an actual
edge walk (bp). Component walks are then chained and child components spliced
in to form the tour collection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .fusion import REEB, PlanningGraph
from .hierarchy import Component, Hierarchy, HierarchyError

CMS_NODE_CAP = 500_000
BP_NODE_CAP = 200_000


class PlannerInfeasible(Exception):
    """The search could not produce a tour for a component."""


@dataclass
class Tour:
    edge_ids: list[int]
    vertices: list[int]  # len(edge_ids) + 1, walk including both endpoints

    def key(self) -> tuple[int, ...]:
        return tuple(self.edge_ids)


def _subgraph_adj(pg: PlanningGraph, edge_ids) -> dict[int, list[tuple[int, int]]]:
    """Adjacency lists sorted nearest-neighbor first (then by edge id).

    Walk builders take candidates in list order, so spatially close edges
    get picked first and the resulting tours backtrack less; any order
    yields a valid trail.
    """
    adj: dict[int, list[tuple[int, int]]] = {}
    for eid in sorted(edge_ids):
        e = pg.edges[eid]
        adj.setdefault(e.u, []).append((eid, e.v))
        adj.setdefault(e.v, []).append((eid, e.u))
    for v, lst in adj.items():
        pv = pg.vertices[v].position
        lst.sort(key=lambda ew: (math.hypot(
            pg.vertices[ew[1]].position[0] - pv[0],
            pg.vertices[ew[1]].position[1] - pv[1]), ew[0]))
    return adj


def _edge_groups(pg: PlanningGraph, edge_ids) -> list[tuple[set[int], set[int]]]:
    """Connected groups of an edge set as (edge ids, vertex ids)."""
    adj = _subgraph_adj(pg, edge_ids)
    seen: set[int] = set()
    groups = []
    for v in sorted(adj):
        if v in seen:
            continue
        stack, vs, es = [v], set(), set()
        while stack:
            x = stack.pop()
            if x in vs:
                continue
            vs.add(x)
            for eid, w in adj[x]:
                es.add(eid)
                stack.append(w)
        seen |= vs
        groups.append((es, vs))
    return groups


def _single_simple_path(pg: PlanningGraph, shared: set[int]) -> tuple[bool, set[int]]:
    """Whether `shared` is one simple path; returns (ok, its vertex set)."""
    deg: dict[int, int] = {}
    for eid in shared:
        e = pg.edges[eid]
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    if any(d > 2 for d in deg.values()):
        return False, set()
    ends = [v for v, d in deg.items() if d == 1]
    if len(ends) != 2 or len(deg) != len(shared) + 1:
        return False, set()
    if len(_edge_groups(pg, shared)) != 1:
        return False, set()
    return True, set(deg)


def cms(
    pg: PlanningGraph,
    comp: Component,
    entry: int,
    max_sequences: int | None = None,
) -> list[tuple[int, ...]]:
    """Enumerate admissible segment orders for one component."""
    segs = comp.segments
    n = len(segs)
    if n == 0:
        return [()]
    edge_sets = [set(s.edge_ids) for s in segs]
    vert_sets = [set(s.vertex_ids) for s in segs]
    cycles = [i for i in range(n) if segs[i].kind == "cycle"]
    help_v = set(comp.help_vertices)
    results: list[tuple[int, ...]] = []
    nodes = [0]

    def vertices_of(edges: set[int]) -> set[int]:
        out: set[int] = set()
        for eid in edges:
            out.add(pg.edges[eid].u)
            out.add(pg.edges[eid].v)
        return out

    def pruned(visited: set[int]) -> bool:
        vis_edges: set[int] = set()
        for i in visited:
            vis_edges |= edge_sets[i]
        unv = [i for i in range(n) if i not in visited]
        for i in unv:
            if i in visited or segs[i].kind != "cycle":
                continue
            if edge_sets[i] <= vis_edges:
                return True  # swallowed cycle can never be appended
        unv_edges: set[int] = set()
        for i in unv:
            unv_edges |= edge_sets[i]
        unv_edges -= vis_edges
        if unv_edges:
            groups = _edge_groups(pg, unv_edges)
            outside = [g for g, vs in groups if not (vs & help_v)]
            if len(outside) > 1:
                return True  # stranded remainder not bridged by child cycles
        return False

    def rec(seq: list[int], visited: set[int], m: set[int], last: int | None):
        nodes[0] += 1
        if nodes[0] > CMS_NODE_CAP:
            raise PlannerInfeasible("cms node cap exceeded")
        if max_sequences is not None and len(results) >= max_sequences:
            return
        if len(seq) == n:
            results.append(tuple(seq))
            return
        if pruned(visited):
            return
        if last is None:
            cands = [i for i in range(n) if entry in vert_sets[i]]
            for i in sorted(cands):
                nm = set(edge_sets[i]) if segs[i].kind == "cycle" else set()
                rec(seq + [i], visited | {i}, nm, i)
            return
        if segs[last].kind == "bridge":
            cands = [
                i for i in range(n) if i not in visited and vert_sets[i] & vert_sets[last]
            ]
            for i in sorted(cands):
                nm = set(edge_sets[i]) if segs[i].kind == "cycle" else set()
                rec(seq + [i], visited | {i}, nm, i)
            return
        # From a cycle: merge-compatible cycles first, bridges only when none.
        cyc_cands = []
        for i in cycles:
            if i in visited or not (vert_sets[i] & vert_sets[last]):
                continue
            shared = m & edge_sets[i]
            if not shared:
                continue
            ok, path_vs = _single_simple_path(pg, shared)
            if not ok:
                continue
            if vertices_of(m) & vert_sets[i] != path_vs:
                continue  # touching beyond the shared path breaks the merge
            cyc_cands.append(i)
        if cyc_cands:
            for i in sorted(cyc_cands):
                rec(seq + [i], visited | {i}, m ^ edge_sets[i], i)
            return
        bridge_cands = [
            i
            for i in range(n)
            if i not in visited
            and segs[i].kind == "bridge"
            and vert_sets[i] & vert_sets[last]
        ]
        for i in sorted(bridge_cands):
            rec(seq + [i], visited | {i}, set(), i)

    rec([], set(), set(), None)
    return results


def _euler_walk(
    pg: PlanningGraph,
    edge_ids,
    entry: int,
    exit_v: int,
    seq: tuple[int, ...] | None = None,
    comp: Component | None = None,
    strict_reeb: bool = True,
    node_cap: int = BP_NODE_CAP,
) -> list[int] | None:
    """Backtracking Euler trail entry -> exit_v over edge_ids.

    With `seq`, the walk is regulated: only unused edges of the frontier
    segment (earliest in `seq` with edges remaining) may be taken, and an
    edge shared by several segments counts toward all of them, mirroring the
    merged-cycle traversal. Entering an untouched cycle right after a bridge
    edge must use a Reeb edge (strict)."""
    edges = sorted(edge_ids)
    if not edges:
        return [] if entry == exit_v else None
    adj = _subgraph_adj(pg, edges)
    if entry not in adj:
        return None
    odd = {v for v, lst in adj.items() if len(lst) % 2 == 1}
    if entry == exit_v:
        if odd:
            return None
    elif odd != {entry, exit_v}:
        return None

    segs_of: dict[int, tuple[int, ...]] = {}
    remaining: list[int] = []
    kind: list[str] = []
    if seq is not None and comp is not None:
        kind = [s.kind for s in comp.segments]
        for eid in edges:
            segs_of[eid] = tuple(
                i for i, s in enumerate(comp.segments) if eid in s.edge_set
            )
        counts = [len(s.edge_ids) for s in comp.segments]
        remaining = [counts[i] for i in seq]
        pos_of = {si: k for k, si in enumerate(seq)}
    else:
        pos_of = {}

    used: set[int] = set()
    walk: list[int] = []
    odd_now = set(odd)
    nodes = 0

    def frontier(k: int) -> int:
        while seq is not None and k < len(seq) and remaining[k] == 0:
            k += 1
        return k

    def candidates(pos: int, k: int, prev_bridge: bool) -> list[tuple[int, int]]:
        out = []
        for eid, w in adj[pos]:
            if eid in used:
                continue
            reeb_rank = 0
            if seq is not None:
                if k >= len(seq) or seq[k] not in segs_of[eid]:
                    continue  # not the frontier segment's turn yet
                fresh = remaining[k] == len(comp.segments[seq[k]].edge_ids)
                if fresh and kind[seq[k]] == "cycle":
                    is_reeb = pg.edges[eid].label == REEB
                    if prev_bridge and strict_reeb and not is_reeb:
                        continue  # regulated entry demands a Reeb edge
                    if not is_reeb:
                        reeb_rank = 1
            out.append((reeb_rank, eid, w))
        out.sort(key=lambda t: t[0])  # stable: keeps nearest-first within a rank
        return [(eid, w) for _, eid, w in out]

    def feasible_after(w: int) -> bool:
        if len(used) == len(edges):
            return w == exit_v
        if w == exit_v:
            return not odd_now
        return odd_now == {w, exit_v}

    def rec(pos: int, k: int, prev_bridge: bool) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise PlannerInfeasible("bp node cap exceeded")
        if len(used) == len(edges):
            return pos == exit_v
        took_kind = kind[seq[k]] if seq is not None and k < len(seq) else ""
        for eid, w in candidates(pos, k, prev_bridge):
            e = pg.edges[eid]
            used.add(eid)
            walk.append(eid)
            odd_now.symmetric_difference_update((e.u, e.v))
            touched = segs_of.get(eid, ())
            for si in touched:
                if si in pos_of:
                    remaining[pos_of[si]] -= 1
            if feasible_after(w) and rec(w, frontier(k), took_kind == "bridge"):
                return True
            for si in touched:
                if si in pos_of:
                    remaining[pos_of[si]] += 1
            odd_now.symmetric_difference_update((e.u, e.v))
            walk.pop()
            used.remove(eid)
        return False

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, len(edges) * 4 + 1000))
    try:
        found = rec(entry, frontier(0), False)
    finally:
        sys.setrecursionlimit(old_limit)
    return list(walk) if found else None


def hierholzer_trail(pg: PlanningGraph, edge_ids, entry: int, exit_v: int) -> list[int] | None:
    """Plain Euler trail (no segment constraints); deterministic splicing."""
    edges = sorted(edge_ids)
    if not edges:
        return [] if entry == exit_v else None
    adj = _subgraph_adj(pg, edges)
    if entry not in adj:
        return None
    odd = {v for v, lst in adj.items() if len(lst) % 2 == 1}
    if entry == exit_v:
        if odd:
            return None
    elif odd != {entry, exit_v}:
        return None
    groups = _edge_groups(pg, edges)
    if len(groups) != 1:
        return None
    ptr = {v: 0 for v in adj}
    used: set[int] = set()
    vstack = [entry]
    estack: list[int] = []
    trail: list[int] = []
    while vstack:
        v = vstack[-1]
        lst = adj[v]
        while ptr[v] < len(lst) and lst[ptr[v]][0] in used:
            ptr[v] += 1
        if ptr[v] < len(lst):
            eid, w = lst[ptr[v]]
            used.add(eid)
            vstack.append(w)
            estack.append(eid)
        else:
            vstack.pop()
            if estack:
                trail.append(estack.pop())
    trail.reverse()
    if len(trail) != len(edges):
        return None
    return trail


def walk_vertices(pg: PlanningGraph, edge_ids, entry: int) -> list[int]:
    """Vertex path for an edge walk starting at entry."""
    path = [entry]
    for eid in edge_ids:
        e = pg.edges[eid]
        if path[-1] == e.u:
            path.append(e.v)
        elif path[-1] == e.v:
            path.append(e.u)
        else:
            raise PlannerInfeasible(f"edge {eid} does not continue the walk")
    return path


def validate_tour(pg: PlanningGraph, tour: Tour, start: int, end: int) -> tuple[bool, str]:
    if sorted(tour.edge_ids) != list(range(len(pg.edges))):
        return False, "edge multiset mismatch"
    try:
        vs = walk_vertices(pg, tour.edge_ids, start)
    except PlannerInfeasible as exc:
        return False, str(exc)
    if vs != tour.vertices:
        return False, "stored vertex walk disagrees with edges"
    if vs[0] != start or vs[-1] != end:
        return False, "walk endpoints are not the designated start/end"
    return True, ""


def component_walks(
    pg: PlanningGraph,
    comp: Component,
    entry: int,
    exit_v: int,
    max_sequences: int | None = None,
    notes: list[str] | None = None,
) -> list[list[int]]:
    """All surviving edge walks for a component (cms orders expanded by bp)."""
    walks: list[list[int]] = []
    try:
        orders = cms(pg, comp, entry, max_sequences=max_sequences)
    except PlannerInfeasible:
        orders = []
        if notes is not None:
            notes.append(f"component {comp.id}: cms capped out")
    for sq in orders:
        try:
            w = _euler_walk(pg, comp.edge_ids, entry, exit_v, seq=sq, comp=comp)
        except PlannerInfeasible:
            w = None
        if w is not None:
            walks.append(w)
    if not walks:
        w = hierholzer_trail(pg, comp.edge_ids, entry, exit_v)
        if w is None:
            raise PlannerInfeasible(
                f"component {comp.id} admits no walk from {entry} to {exit_v}"
            )
        walks.append(w)
        if notes is not None:
            notes.append(f"component {comp.id}: fell back to an unconstrained walk")
    return walks


@dataclass
class SearchResult:
    tours: list[Tour]
    sequence_counts: list[int]
    eq16_product: int
    capped: bool = False
    notes: list[str] = field(default_factory=list)


def enumerate_tours(
    pg: PlanningGraph, hier: Hierarchy, max_tours: int | None = None
) -> SearchResult:
    """Chain level-0 component walks, then splice child components in."""
    notes = list(hier.notes)
    per_comp_cap = max_tours if max_tours is not None else None
    walk_lists: list[list[list[int]]] = []
    counts: list[int] = []
    for cid in hier.level0_order:
        comp = hier.components[cid]
        walks = component_walks(
            pg,
            comp,
            comp.entry_vertex,
            comp.exit_vertex,
            max_sequences=per_comp_cap,
            notes=notes,
        )
        walk_lists.append(walks)
        counts.append(len(walks))

    deep_counts: list[int] = []
    tours: list[Tour] = []
    capped = False
    for combo in itertools.product(*walk_lists):
        edges: list[int] = []
        for w in combo:
            edges.extend(w)
        tours.append(Tour(edges, walk_vertices(pg, edges, pg.start)))
        if max_tours is not None and len(tours) >= max_tours:
            capped = True
            break

    child_cache: dict[tuple[int, int], list[int]] = {}
    pending = list(hier.deep_order)
    stall = 0
    while pending:
        cid = pending.pop(0)
        comp = hier.components[cid]
        if not any(v in comp.vertex_ids for v in tours[0].vertices):
            # attachment vertex arrives with a later child; retry after it
            pending.append(cid)
            stall += 1
            if stall > len(pending):
                raise PlannerInfeasible(
                    f"child component {comp.id} shares no vertex with any tour"
                )
            continue
        stall = 0
        deep_counts.append(1)
        spliced: list[Tour] = []
        for tour in tours:
            at = next(i for i, v in enumerate(tour.vertices) if v in comp.vertex_ids)
            v = tour.vertices[at]
            if (cid, v) not in child_cache:
                child_cache[(cid, v)] = _closed_child_walk(pg, comp, v, notes)
            cw = child_cache[(cid, v)]
            cvs = walk_vertices(pg, cw, v)
            spliced.append(
                Tour(
                    tour.edge_ids[:at] + cw + tour.edge_ids[at:],
                    tour.vertices[:at] + cvs + tour.vertices[at + 1 :],
                )
            )
        tours = spliced

    for tour in tours:
        ok, why = validate_tour(pg, tour, pg.start, pg.end)
        if not ok:
            raise PlannerInfeasible(f"assembled tour failed validation: {why}")

    eq16 = 1
    for c in counts + deep_counts:
        eq16 *= c
    return SearchResult(tours, counts + deep_counts, eq16, capped, notes)


def _closed_child_walk(
    pg: PlanningGraph, comp: Component, v: int, notes: list[str]
) -> list[int]:
    walks = component_walks(pg, comp, v, v, max_sequences=1, notes=notes)
    return walks[0]


def global_fallback_tour(pg: PlanningGraph) -> Tour:
    """Unregulated Euler trail over the whole graph (last-resort planner path)."""
    trail = hierholzer_trail(pg, range(len(pg.edges)), pg.start, pg.end)
    if trail is None:
        raise PlannerInfeasible("planning graph admits no open Eulerian path")
    return Tour(trail, walk_vertices(pg, trail, pg.start))
