"""Slow reference implementations the tests compare the package against.

Everything here is deliberately naive: exhaustive search, textbook DP,
closed-form geometry. Nothing imports the package's algorithmic modules, so
agreement is meaningful.
"""

from __future__ import annotations

import math


def capsule_area(length: float, r: float) -> float:
    """Area of a segment dilated by radius r (rectangle plus end caps)."""
    return 2.0 * r * length + math.pi * r * r


def minmax_partition(values: list[float], k: int) -> float:
    """Optimal min-max contiguous partition cost by quadratic DP."""
    n = len(values)
    if not 1 <= k <= n:
        raise ValueError("k out of range")
    pre = [0.0]
    for v in values:
        pre.append(pre[-1] + v)
    best = [[math.inf] * (k + 1) for _ in range(n + 1)]
    best[0][0] = 0.0
    for i in range(1, n + 1):
        for c in range(1, min(k, i) + 1):
            for j in range(c - 1, i):
                cand = max(best[j][c - 1], pre[i] - pre[j])
                if cand < best[i][c]:
                    best[i][c] = cand
    return best[n][k]


def _adj(edges: list[tuple[int, int]]) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, (u, v) in enumerate(edges):
        adj.setdefault(u, []).append((i, v))
        adj.setdefault(v, []).append((i, u))
    return adj


def euler_trails(
    edges: list[tuple[int, int]], start: int | None = None, end: int | None = None
) -> list[tuple[int, ...]]:
    """Every Euler trail of the multigraph, as tuples of edge indices."""
    adj = _adj(edges)
    starts = [start] if start is not None else sorted(adj)
    out: list[tuple[int, ...]] = []
    used = [False] * len(edges)

    def rec(v: int, seq: list[int]) -> None:
        if len(seq) == len(edges):
            if end is None or v == end:
                out.append(tuple(seq))
            return
        for eid, w in adj[v]:
            if used[eid]:
                continue
            used[eid] = True
            seq.append(eid)
            rec(w, seq)
            seq.pop()
            used[eid] = False

    for s in starts:
        rec(s, [])
    return out


def is_euler_trail(edges: list[tuple[int, int]], seq: list[int]) -> bool:
    """Each edge exactly once, consecutive edges vertex-adjacent."""
    if sorted(seq) != list(range(len(edges))):
        return False
    if not seq:
        return True
    u, v = edges[seq[0]]
    frontier = {u, v}
    for eid in seq[1:]:
        a, b = edges[eid]
        nxt = frontier & {a, b}
        if not nxt:
            return False
        # walk continues from whichever endpoint the previous edge reached;
        # with both shared, either works for adjacency purposes
        frontier = {a, b} - nxt if {a, b} - nxt else {a, b}
    return True


def walk_of(edges: list[tuple[int, int]], seq: list[int], start: int) -> list[int] | None:
    """Vertex walk of an edge sequence from start, or None if broken."""
    walk = [start]
    for eid in seq:
        u, v = edges[eid]
        if walk[-1] == u:
            walk.append(v)
        elif walk[-1] == v:
            walk.append(u)
        else:
            return None
    return walk


def components_of(edges: list[tuple[int, int]], edge_ids=None) -> list[set[int]]:
    """Vertex sets of connected components of a sub-multigraph."""
    ids = range(len(edges)) if edge_ids is None else sorted(edge_ids)
    adj: dict[int, set[int]] = {}
    for i in ids:
        u, v = edges[i]
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    comps = []
    left = set(adj)
    while left:
        stack = [left.pop()]
        comp = set(stack)
        while stack:
            for w in adj[stack.pop()]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        comps.append(comp)
    return comps


def brute_bridges(edges: list[tuple[int, int]]) -> set[int]:
    """Edges whose removal separates their endpoints (self-loops never)."""
    out = set()
    for i, (u, v) in enumerate(edges):
        if u == v:
            continue
        rest = [j for j in range(len(edges)) if j != i]
        joined = any(u in c and v in c for c in components_of(edges, rest))
        if not joined:
            out.add(i)
    return out


def min_pairing_cost(points: list[tuple[float, float]]) -> float:
    """Minimum total length over perfect matchings of an even point set."""
    n = len(points)
    if n % 2:
        raise ValueError("odd point count")
    if n == 0:
        return 0.0
    first, rest = 0, list(range(1, n))
    best = math.inf
    for j in rest:
        d = math.dist(points[first], points[j])
        sub = [points[i] for i in rest if i != j]
        best = min(best, d + min_pairing_cost(sub))
    return best


def cycle_space_dim(edges: list[tuple[int, int]]) -> int:
    """GF(2) cycle space dimension: |E| - |V| + components."""
    verts = {u for u, _ in edges} | {v for _, v in edges}
    return len(edges) - len(verts) + len(components_of(edges))


def is_single_simple_path(edges: list[tuple[int, int]], shared: set[int]) -> tuple[bool, set[int]]:
    """Whether the edge subset is one simple open path; (ok, path vertices)."""
    deg: dict[int, int] = {}
    for eid in shared:
        u, v = edges[eid]
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if not shared or any(d > 2 for d in deg.values()):
        return False, set()
    ends = [v for v, d in deg.items() if d == 1]
    if len(ends) != 2 or len(deg) != len(shared) + 1:
        return False, set()
    if len(components_of(edges, shared)) != 1:
        return False, set()
    return True, set(deg)


def check_segment_order(
    edges: list[tuple[int, int]],
    segments: list[tuple[str, frozenset[int]]],
    order: list[int],
    entry: int,
) -> tuple[bool, str]:
    """Re-verify an attach order of cycle/bridge segments from first rules.

    Mirrors the admissibility conditions independently: start at a segment
    containing the entry vertex; every later segment shares a vertex with
    the one before it; attach a cycle to the running merged set only along
    a nonempty single simple path, touching it nowhere else (vertex contact
    confined to that path); take a bridge from a cycle only when no cycle
    could merge.
    """
    def verts(eids) -> set[int]:
        out: set[int] = set()
        for e in eids:
            out.update(edges[e])
        return out

    if sorted(order) != list(range(len(segments))):
        return False, "order is not a permutation"
    if not order:
        return True, ""
    kinds = [segments[i][0] for i in range(len(segments))]
    esets = [set(segments[i][1]) for i in range(len(segments))]
    first = order[0]
    if entry not in verts(esets[first]):
        return False, "first segment misses the entry vertex"
    merged: set[int] = set(esets[first]) if kinds[first] == "cycle" else set()
    visited = {first}
    prev = first
    for si in order[1:]:
        if not (verts(esets[si]) & verts(esets[prev])):
            return False, f"segment {si} does not touch segment {prev}"
        if kinds[prev] == "bridge":
            merged = set(esets[si]) if kinds[si] == "cycle" else set()
        else:
            def merge_ok(cj: int) -> bool:
                shared = merged & esets[cj]
                if not shared:
                    return False
                ok, path_vs = is_single_simple_path(edges, shared)
                return ok and verts(merged) & verts(esets[cj]) == path_vs

            if kinds[si] == "cycle":
                if not merge_ok(si):
                    return False, f"cycle {si} not merge-compatible when taken"
                merged ^= esets[si]
            else:
                mergeable = [
                    cj
                    for cj in range(len(segments))
                    if cj not in visited
                    and kinds[cj] == "cycle"
                    and verts(esets[cj]) & verts(esets[prev])
                    and merge_ok(cj)
                ]
                if mergeable:
                    return False, f"bridge {si} taken while a cycle could merge"
                merged = set()
        visited.add(si)
        prev = si
    return True, ""


def first_touch_order(
    seq: list[int], segments: list[tuple[str, frozenset[int]]]
) -> list[int]:
    """Order in which a tour's edge sequence first enters each segment."""
    owner: dict[int, list[int]] = {}
    for si, (_, eids) in enumerate(segments):
        for e in eids:
            owner.setdefault(e, []).append(si)
    seen: list[int] = []
    for eid in seq:
        for si in owner.get(eid, ()):
            if si not in seen:
                seen.append(si)
    return seen
