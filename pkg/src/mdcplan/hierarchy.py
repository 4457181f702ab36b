"""Bridge/cycle decomposition of the planning graph and its containment hierarchy.

The planning graph splits into bridge edges and a cycle space. A fundamental
basis (from a minimum spanning tree) is repaired by symmetric differences
until no basis cycle's Reeb-cell set properly contains another's. Cycles
whose sweep-coordinate interval is strictly contained by every edge-adjacent
neighbour are demoted one level; iterating to a fixpoint yields the levels.

Each edge is owned by the deepest basis cycle containing it. Level-0
ownership groups, joined by the graph bridges, form an ordered chain of
components walked from the global start vertex; deeper cycles become closed
child components spliced into their parent's walk later. Every component
carries local segments (bridges plus a local disjoint cycle basis) for the
merging search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fusion import REEB, PlanningGraph


class HierarchyError(Exception):
    """Structural failure while building the hierarchy (caller may fall back)."""


@dataclass
class Segment:
    id: int
    kind: str  # cycle | bridge
    edge_ids: tuple[int, ...]  # ordered closed walk for cycles, single edge for bridges
    vertex_ids: frozenset[int]
    g_range: tuple[float, float]

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)


@dataclass
class Component:
    id: int
    level: int
    edge_ids: frozenset[int]
    vertex_ids: frozenset[int]
    segments: list[Segment] = field(default_factory=list)
    entry_vertex: int = -1
    exit_vertex: int = -1
    closed: bool = False  # walk must return to its entry vertex
    parent: int | None = None  # component id for level >= 1
    cycle_index: int | None = None  # owning global basis cycle for deep components
    help_vertices: frozenset[int] = frozenset()  # children's vertices (search prune)


@dataclass
class Hierarchy:
    components: list[Component]
    level0_order: list[int]  # component ids in walk order
    basis: list[frozenset[int]]
    levels: list[int]
    bridges: frozenset[int]
    notes: list[str] = field(default_factory=list)

    @property
    def deep_order(self) -> list[int]:
        deep = [c.id for c in self.components if c.level > 0]
        return sorted(deep, key=lambda cid: (self.components[cid].level, cid))


def _adjacency(pg: PlanningGraph, edge_ids=None) -> dict[int, list[tuple[int, int]]]:
    """vertex -> [(edge id, other endpoint)] over a subset of edges."""
    ids = range(len(pg.edges)) if edge_ids is None else edge_ids
    adj: dict[int, list[tuple[int, int]]] = {}
    for eid in ids:
        e = pg.edges[eid]
        adj.setdefault(e.u, []).append((eid, e.v))
        adj.setdefault(e.v, []).append((eid, e.u))
    for v in adj:
        adj[v].sort()
    return adj


def find_bridges(adj: dict[int, list[tuple[int, int]]]) -> set[int]:
    """Bridges of a multigraph by iterative lowpoint search.

    Parallel edges are distinguished by edge id, so neither of a parallel
    pair is ever reported.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    bridges: set[int] = set()
    clock = 0
    for root in sorted(adj):
        if root in disc:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            v, pedge, i = stack[-1]
            if i < len(adj[v]):
                stack[-1] = (v, pedge, i + 1)
                eid, w = adj[v][i]
                if eid == pedge:
                    continue
                if w not in disc:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, eid, 0))
                else:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(pedge)
    return bridges


def split_bridges_cycles(pg: PlanningGraph) -> tuple[set[int], int]:
    """Bridge edge ids and the cycle space dimension |E| - |V| + components."""
    adj = _adjacency(pg)
    if not adj:
        return set(), 0
    bridges = find_bridges(adj)
    n_comp = _count_components(adj)
    return bridges, len(pg.edges) - len(adj) + n_comp


def _count_components(adj: dict[int, list[tuple[int, int]]]) -> int:
    seen: set[int] = set()
    count = 0
    for v in adj:
        if v in seen:
            continue
        count += 1
        stack = [v]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(w for _, w in adj[x])
    return count


def _vertex_key(pg: PlanningGraph, vid: int) -> tuple[float, float, int]:
    p = pg.vertices[vid].position
    return (float(p[0]), float(p[1]), vid)


def fundamental_basis(pg: PlanningGraph, edge_ids=None) -> list[frozenset[int]]:
    """Fundamental cycles off a minimum spanning tree (length-weighted,
    deterministic ties), parent paths rooted at the leftmost vertex."""
    ids = sorted(range(len(pg.edges)) if edge_ids is None else edge_ids)
    if not ids:
        return []
    group: dict[int, int] = {}

    def find(x: int) -> int:
        group.setdefault(x, x)
        while group[x] != x:
            group[x] = group[group[x]]
            x = group[x]
        return x

    tree: set[int] = set()
    for eid in sorted(ids, key=lambda i: (pg.edges[i].length, i)):
        e = pg.edges[eid]
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            group[ru] = rv
            tree.add(eid)

    adj = _adjacency(pg, tree)
    touched = _adjacency(pg, ids)
    parent: dict[int, tuple[int, int]] = {}  # vertex -> (edge id up, parent vertex)
    seen: set[int] = set()
    for root in sorted(touched, key=lambda v: _vertex_key(pg, v)):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            for eid, w in adj.get(v, []):
                if w in seen:
                    continue
                seen.add(w)
                parent[w] = (eid, v)
                queue.append(w)

    def path_to_root(v: int) -> set[int]:
        out: set[int] = set()
        while v in parent:
            eid, v = parent[v]
            out.add(eid)
        return out

    basis: list[frozenset[int]] = []
    for eid in ids:
        if eid in tree:
            continue
        e = pg.edges[eid]
        cyc = path_to_root(e.u) ^ path_to_root(e.v)
        cyc.add(eid)
        basis.append(frozenset(cyc))
    return basis


def _cells_of(pg: PlanningGraph, cyc: frozenset[int]) -> frozenset[int]:
    return frozenset(
        pg.edges[eid].cell_ref
        for eid in cyc
        if pg.edges[eid].label == REEB and pg.edges[eid].cell_ref is not None
    )


def _g_range(pg: PlanningGraph, cyc) -> tuple[float, float]:
    gs = [pg.vertices[v].g for eid in cyc for v in (pg.edges[eid].u, pg.edges[eid].v)]
    return (min(gs), max(gs))


def _is_simple_cycle(pg: PlanningGraph, edge_set) -> bool:
    """Closed walk visiting each of its vertices once (or a 2-edge parallel pair)."""
    if len(edge_set) < 2:
        return False
    deg: dict[int, int] = {}
    for eid in edge_set:
        e = pg.edges[eid]
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    adj = _adjacency(pg, edge_set)
    return _count_components(adj) == 1


def basis_violations(pg: PlanningGraph, cycles) -> list[tuple[int, int]]:
    """Pairs (i, j) where cycle i's nonempty Reeb-cell set is properly inside j's."""
    cells = [_cells_of(pg, c) for c in cycles]
    out = []
    for i in range(len(cycles)):
        if not cells[i]:
            continue
        for j in range(len(cycles)):
            if i != j and cells[i] < cells[j]:
                out.append((i, j))
    return out


def repair_basis(pg: PlanningGraph, basis) -> list[frozenset[int]]:
    """Symmetric-difference repair until no cycle's cell set properly contains
    another's. Replacements keep the basis property; a replacement that would
    not be a simple cycle is skipped (left for the containment levels)."""
    cycles = [frozenset(c) for c in basis]
    if len(cycles) < 2:
        return cycles
    cells = [_cells_of(pg, c) for c in cycles]
    cap = max(16, len(pg.edges) ** 2)
    for _ in range(cap):
        hit = None
        order = sorted(range(len(cycles)), key=lambda i: (_g_range(pg, cycles[i])[0], i))
        for i in order:
            if not cells[i]:
                continue
            for j in order:
                if i == j or not cells[i] < cells[j]:
                    continue
                cand = cycles[i] ^ cycles[j]
                if _is_simple_cycle(pg, cand):
                    hit = (j, frozenset(cand))
                    break
            if hit:
                break
        if hit is None:
            return cycles
        j, cand = hit
        cycles[j] = cand
        cells[j] = _cells_of(pg, cand)
    raise HierarchyError("cycle basis repair exceeded its iteration cap")


def reduce_basis(pg: PlanningGraph, basis) -> list[frozenset[int]]:
    """Shrink overlapping pairs: when C_i shares edges with a longer C_j and
    C_i ^ C_j is a shorter simple cycle, C_j is replaced by the difference.
    Total edge count strictly decreases, so this terminates; the span of the
    cycle space is preserved. A near-disjoint basis keeps the merge search
    from dead-ending on swallowed segments."""
    cycles = [set(c) for c in basis]
    cap = max(16, sum(len(c) for c in cycles) + 4)
    for _ in range(cap):
        changed = False
        for i in range(len(cycles)):
            for j in range(len(cycles)):
                if i == j or not (cycles[i] & cycles[j]):
                    continue
                diff = cycles[i] ^ cycles[j]
                if len(diff) < len(cycles[j]) and _is_simple_cycle(pg, diff):
                    cycles[j] = diff
                    changed = True
        if not changed:
            break
    return [frozenset(c) for c in cycles]


def order_cycle_walk(pg: PlanningGraph, edge_set) -> tuple[int, ...]:
    """Deterministic closed-walk ordering of a simple cycle's edges."""
    adj = _adjacency(pg, edge_set)
    start = min(adj, key=lambda v: _vertex_key(pg, v))
    walk: list[int] = []
    used: set[int] = set()
    cur = start
    while len(walk) < len(edge_set):
        nxt = [(eid, w) for eid, w in adj[cur] if eid not in used]
        if not nxt:
            raise HierarchyError("cycle walk stuck; segment is not a simple cycle")
        eid, w = nxt[0]
        used.add(eid)
        walk.append(eid)
        cur = w
    if cur != start:
        raise HierarchyError("cycle walk did not close")
    return tuple(walk)


def assign_levels(pg: PlanningGraph, basis) -> list[int]:
    """Demotion fixpoint: a cycle drops a level when it has unassigned
    edge-adjacent neighbours and every one strictly contains its g-interval."""
    n = len(basis)
    if n == 0:
        return []
    spans = [_g_range(pg, c) for c in basis]
    neigh = [[j for j in range(n) if j != i and basis[i] & basis[j]] for i in range(n)]

    def contains(j: int, i: int) -> bool:
        (a, b), (c, d) = spans[j], spans[i]
        return a <= c and d <= b and (a, b) != (c, d)

    levels = [0] * n
    unassigned = set(range(n))
    k = 0
    while unassigned:
        demote = set()
        for i in sorted(unassigned):
            nb = [j for j in neigh[i] if j in unassigned]
            if nb and all(contains(j, i) for j in nb):
                demote.add(i)
        if demote == unassigned:  # guard; a maximal interval never demotes
            demote = set()
        for i in unassigned - demote:
            levels[i] = k
        unassigned = demote
        k += 1
    return levels


def _edge_components(pg: PlanningGraph, edge_ids) -> list[set[int]]:
    """Connected groups of an edge subset, as edge-id sets, deterministic order."""
    adj = _adjacency(pg, edge_ids)
    seen_v: set[int] = set()
    groups: list[set[int]] = []
    for v in sorted(adj, key=lambda x: _vertex_key(pg, x)):
        if v in seen_v:
            continue
        stack, comp_v, comp_e = [v], set(), set()
        while stack:
            x = stack.pop()
            if x in comp_v:
                continue
            comp_v.add(x)
            for eid, w in adj[x]:
                comp_e.add(eid)
                stack.append(w)
        seen_v |= comp_v
        groups.append(comp_e)
    return groups


def _edge_vertices(pg: PlanningGraph, edge_ids) -> frozenset[int]:
    out: set[int] = set()
    for eid in edge_ids:
        out.add(pg.edges[eid].u)
        out.add(pg.edges[eid].v)
    return frozenset(out)


def _local_segments(pg: PlanningGraph, comp: Component) -> list[Segment]:
    """Per-component segments: local bridges plus a local disjoint basis."""
    sub = sorted(comp.edge_ids)
    adj = _adjacency(pg, sub)
    local_bridges = sorted(find_bridges(adj))
    segs: list[Segment] = []
    for eid in local_bridges:
        e = pg.edges[eid]
        segs.append(
            Segment(
                len(segs),
                "bridge",
                (eid,),
                frozenset((e.u, e.v)),
                _g_range(pg, (eid,)),
            )
        )
    cyc_edges = [eid for eid in sub if eid not in set(local_bridges)]
    if cyc_edges:
        local_basis = repair_basis(
            pg, reduce_basis(pg, fundamental_basis(pg, cyc_edges))
        )
        for cyc in local_basis:
            walk = order_cycle_walk(pg, cyc)
            segs.append(
                Segment(len(segs), "cycle", walk, _edge_vertices(pg, cyc), _g_range(pg, cyc))
            )
    covered = set()
    for s in segs:
        covered.update(s.edge_ids)
    if covered != set(sub):
        raise HierarchyError("component edges escaped all local segments")
    return segs


def build_hierarchy(pg: PlanningGraph) -> Hierarchy:
    notes: list[str] = []
    n_e = len(pg.edges)
    if n_e == 0:
        raise HierarchyError("planning graph has no edges")
    full_adj = _adjacency(pg)
    if _count_components(full_adj) != 1:
        raise HierarchyError("planning graph is disconnected")

    bridges = find_bridges(full_adj)
    dim = n_e - len(full_adj) + 1
    basis = (
        repair_basis(pg, reduce_basis(pg, fundamental_basis(pg))) if dim >= 1 else []
    )
    levels = assign_levels(pg, basis)
    viol = basis_violations(pg, basis)
    if viol:
        notes.append(f"basis kept {len(viol)} unrepairable cell-containment pairs")

    # Edge ownership: the deepest basis cycle containing the edge, low id on ties.
    own: dict[int, int] = {}
    for eid in range(n_e):
        if eid in bridges:
            continue
        holders = [i for i, c in enumerate(basis) if eid in c]
        if not holders:
            raise HierarchyError(f"non-bridge edge {eid} lies outside every basis cycle")
        own[eid] = max(holders, key=lambda i: (levels[i], -i))

    # Level-0 pieces: group the level-0 cycles by edge adjacency first, so two
    # cycles meeting only at a vertex become separate pieces (the stranded one
    # is spliced in later, like a child component), then take the connected
    # chunks of each class's owned edges.
    lvl0_cycles = [i for i in range(len(basis)) if levels[i] == 0]
    cls = {i: i for i in lvl0_cycles}

    def cfind(x: int) -> int:
        while cls[x] != x:
            cls[x] = cls[cls[x]]
            x = cls[x]
        return x

    for ia in lvl0_cycles:
        for ib in lvl0_cycles:
            if ib <= ia:
                continue
            if basis[ia] & basis[ib]:
                ra, rb = cfind(ia), cfind(ib)
                if ra != rb:
                    cls[rb] = ra
    by_class: dict[int, list[int]] = {}
    for eid, i in sorted(own.items()):
        if levels[i] == 0:
            by_class.setdefault(cfind(i), []).append(eid)
    pieces: list[set[int]] = []
    for root in sorted(by_class):
        pieces.extend(_edge_components(pg, by_class[root]))
    piece_vs = [_edge_vertices(pg, p) for p in pieces]

    bridge_adj: dict[int, list[int]] = {}
    for eid in sorted(bridges):
        e = pg.edges[eid]
        bridge_adj.setdefault(e.u, []).append(eid)
        bridge_adj.setdefault(e.v, []).append(eid)

    components: list[Component] = []
    level0_order: list[int] = []
    visited_piece = [False] * len(pieces)
    used_bridges: set[int] = set()

    def unused_at(v: int) -> list[int]:
        return [b for b in bridge_adj.get(v, []) if b not in used_bridges]

    def piece_odd(pi: int) -> set[int]:
        deg: dict[int, int] = {}
        for eid in pieces[pi]:
            e = pg.edges[eid]
            deg[e.u] = deg.get(e.u, 0) + 1
            deg[e.v] = deg.get(e.v, 0) + 1
        return {v for v, d in deg.items() if d % 2 == 1}

    odd_of = [piece_odd(pi) for pi in range(len(pieces))]

    def emit(edges, entry, exit_v, closed, level=0, parent=None, cyc_idx=None, segs=True):
        comp = Component(
            id=len(components),
            level=level,
            edge_ids=frozenset(edges),
            vertex_ids=_edge_vertices(pg, edges),
            entry_vertex=entry,
            exit_vertex=exit_v,
            closed=closed,
            parent=parent,
            cycle_index=cyc_idx,
        )
        if segs:
            comp.segments = _local_segments(pg, comp)
        components.append(comp)
        if level == 0:
            level0_order.append(comp.id)
        return comp

    current = pg.start
    guard = 0
    while True:
        guard += 1
        if guard > 2 * (n_e + len(pieces)) + 8:
            raise HierarchyError("level-0 walk failed to terminate")
        here = [
            pi
            for pi in range(len(pieces))
            if not visited_piece[pi] and current in piece_vs[pi]
        ]
        # Internal parity decides how a piece is walked: all even means a
        # closed excursion returning here; odd exactly at {current, w} means
        # an open traversal exiting at w; odd ends elsewhere means the piece
        # is entered later from one of those ends.
        closed_here = sorted(pi for pi in here if not odd_of[pi])
        open_here = sorted(pi for pi in here if current in odd_of[pi])
        if closed_here:
            for pi in closed_here:
                emit(pieces[pi], current, current, closed=True)
                visited_piece[pi] = True
            continue
        if open_here:
            if len(open_here) > 1:
                raise HierarchyError(f"ambiguous continuation at vertex {current}")
            pi = open_here[0]
            o = odd_of[pi]
            if len(o) != 2:
                raise HierarchyError(
                    f"piece at vertex {current} has odd ends {sorted(o)}"
                )
            w = (o - {current}).pop()
            emit(pieces[pi], current, w, closed=False)
            visited_piece[pi] = True
            current = w
            continue
        chain = unused_at(current)
        if chain:
            walk: list[int] = []
            v = current
            while True:
                step = unused_at(v)
                if not step:
                    break
                if len(step) > 1:
                    raise HierarchyError(f"bridge branching at vertex {v}")
                eid = step[0]
                used_bridges.add(eid)
                walk.append(eid)
                v = pg.edges[eid].other(v)
                if any(
                    not visited_piece[pi]
                    and v in piece_vs[pi]
                    and (not odd_of[pi] or v in odd_of[pi])
                    for pi in range(len(pieces))
                ):
                    break
            emit(walk, current, v, closed=False)
            current = v
            continue
        break

    # Pieces the walk never reached are fine only if they hang off deeper
    # structure alone: no bridges touch them and parity is all even (deep
    # cycles contribute even degree everywhere), so a closed ride-along walk
    # exists and can be spliced in after the children.
    floats: list[int] = []
    for pi in range(len(pieces)):
        if visited_piece[pi]:
            continue
        if any(unused_at(v) for v in piece_vs[pi]) or pg.end in piece_vs[pi]:
            raise HierarchyError("level-0 walk left structure behind (broken chain)")
        deg: dict[int, int] = {}
        for eid in pieces[pi]:
            e = pg.edges[eid]
            deg[e.u] = deg.get(e.u, 0) + 1
            deg[e.v] = deg.get(e.v, 0) + 1
        if any(d % 2 for d in deg.values()):
            raise HierarchyError(f"stranded piece at {sorted(piece_vs[pi])[:3]} has odd parity")
        floats.append(pi)
        visited_piece[pi] = True
    if len(used_bridges) != len(bridges):
        raise HierarchyError("level-0 walk left bridges behind (broken chain)")
    if current != pg.end:
        raise HierarchyError(
            f"level-0 walk ended at vertex {current}, expected {pg.end}"
        )

    # Deep components: one per demoted basis cycle, owning its edges.
    comp_of_cycle: dict[int, int] = {}
    for comp in components:
        for eid in comp.edge_ids:
            if eid in own and levels[own[eid]] == 0:
                comp_of_cycle[own[eid]] = comp.id
    deep = sorted(
        (i for i in range(len(basis)) if levels[i] > 0),
        key=lambda i: (levels[i], _g_range(pg, basis[i])[0], i),
    )
    for idx in deep:
        owned = frozenset(e for e, i in own.items() if i == idx)
        if not owned:
            notes.append(f"basis cycle {idx} owns no edges; folded into deeper cycles")
            continue
        shallower = [
            j
            for j in range(len(basis))
            if j != idx and levels[j] < levels[idx] and basis[j] & basis[idx]
        ]
        if not shallower:
            raise HierarchyError(f"demoted cycle {idx} has no shallower edge-adjacent parent")
        pj = max(shallower, key=lambda j: (levels[j], -j))
        host = comp_of_cycle.get(pj)
        if host is None:
            # The parent cycle dissolved (all its edges owned elsewhere);
            # attach to a component carrying its edges, nearest to the child.
            child_vs = _edge_vertices(pg, owned)
            cands = [c.id for c in components if c.edge_ids & basis[pj]]
            vmatch = [cid for cid in cands if components[cid].vertex_ids & child_vs]
            if vmatch:
                host = vmatch[0]
            elif cands:
                host = cands[0]
            else:
                raise HierarchyError(f"no component hosts parent cycle {pj}")
            comp_of_cycle[pj] = host
            notes.append(
                f"cycle {pj} owns no edges; child {idx} hosted by component {host}"
            )
        comp = emit(
            owned,
            -1,
            -1,
            closed=True,
            level=levels[idx],
            parent=host,
            cyc_idx=idx,
        )
        comp_of_cycle[idx] = comp.id
        if owned != basis[idx]:
            notes.append(
                f"cycle {idx} lost {len(basis[idx]) - len(owned)} edges to deeper children"
            )

    float_level = (max(levels) if levels else 0) + 1
    for pi in floats:
        emit(pieces[pi], -1, -1, closed=True, level=float_level)
        notes.append(
            f"stranded piece of {len(pieces[pi])} edges rides along a deeper splice"
        )

    for comp in components:
        kids = [c for c in components if c.parent == comp.id]
        if kids:
            help_v: set[int] = set()
            for k in kids:
                help_v |= set(k.vertex_ids)
            comp.help_vertices = frozenset(help_v)

    return Hierarchy(
        components=components,
        level0_order=level0_order,
        basis=basis,
        levels=levels,
        bridges=frozenset(bridges),
        notes=notes,
    )
