"""Crack graph construction: branches, endpoint merging, sparsification.

Input cracks are raw polylines. The pipeline splits them into branches at
junctions (points where three or more segment ends meet), merges nearby
branch endpoints into shared vertices, and replaces each branch by a minimal
chain of chord edges whose dilation by the service radius still covers the
original branch geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    as_polyline,
    distance_to_polyline,
    point_segment_distance,
    polyline_length,
    sample_polyline,
    _segment_crossings,
)


@dataclass
class Branch:
    id: int
    polyline: np.ndarray  # (n, 2)
    endpoints: tuple[int, int] = (-1, -1)  # vertex ids, filled by build_crack_graph


@dataclass
class CrackEdge:
    u: int
    v: int
    geometry: np.ndarray  # straight chord, shape (2, 2)
    length: float


@dataclass
class CrackGraph:
    vertices: dict[int, np.ndarray] = field(default_factory=dict)
    endpoint_ids: set[int] = field(default_factory=set)  # merged branch endpoints
    edges: list[CrackEdge] = field(default_factory=list)
    branches: list[Branch] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.edges


def _insert_points(poly: np.ndarray, hits: dict[int, list[float]]) -> np.ndarray:
    """Insert parametric hit points (per segment index) into a polyline."""
    out = [poly[0]]
    for i in range(len(poly) - 1):
        a, b = poly[i], poly[i + 1]
        seglen = float(np.hypot(*(b - a)))
        for t in sorted(set(hits.get(i, []))):
            pt = a + t * (b - a)
            if min(t, 1 - t) * seglen < 1e-9:
                continue  # coincides with an existing vertex
            if np.hypot(*(pt - out[-1])) > 1e-9:
                out.append(pt)
        if np.hypot(*(b - out[-1])) > 1e-9:
            out.append(b)
    if len(out) < 2:
        out.append(poly[-1])
    return np.asarray(out)


def _param_on_segment(pt, a, b) -> float:
    d = b - a
    den = float(d @ d)
    if den == 0.0:
        return 0.0
    return float(np.clip((pt - a) @ d / den, 0.0, 1.0))


def split_at_junctions(cracks: list[np.ndarray], tol: float) -> list[np.ndarray]:
    """Insert crossing/near-touch points and return polylines split there.

    A junction is any point where at least three segment ends meet within
    `tol`: transversal crossings of two cracks (or a self-crossing) and
    T-style near-touches of an endpoint against another crack's interior.
    """
    polys = [as_polyline(c).copy() for c in cracks]
    # Pass 1: collect insertion points per (polyline, segment).
    hits: list[dict[int, list[float]]] = [dict() for _ in polys]
    hot: list[np.ndarray] = []  # crossing points and endpoints, for marker pass
    for pi in range(len(polys)):
        for pj in range(pi, len(polys)):
            a, b = polys[pi], polys[pj]
            for i in range(len(a) - 1):
                j_start = i + 2 if pi == pj else 0
                for j in range(j_start, len(b) - 1):
                    for pt in _segment_crossings(a[i], a[i + 1], b[j], b[j + 1]):
                        pt = np.asarray(pt)
                        hot.append(pt)
                        hits[pi].setdefault(i, []).append(_param_on_segment(pt, a[i], a[i + 1]))
                        hits[pj].setdefault(j, []).append(_param_on_segment(pt, b[j], b[j + 1]))
    for p in polys:
        hot.append(p[0])
        hot.append(p[-1])
    # T near-touches: endpoint of one crack close to the interior of another.
    for pi, a in enumerate(polys):
        for end in (a[0], a[-1]):
            for pj, b in enumerate(polys):
                if pj == pi:
                    continue
                for j in range(len(b) - 1):
                    if point_segment_distance(end[None, :], b[j], b[j + 1])[0] <= tol:
                        hits[pj].setdefault(j, []).append(_param_on_segment(end, b[j], b[j + 1]))
    inserted = [_insert_points(p, h) for p, h in zip(polys, hits)]

    # Pass 2: cluster break markers and count segment ends per cluster.
    hot_arr = np.asarray(hot).reshape(-1, 2)
    markers: list[tuple[int, int, np.ndarray, int]] = []  # (poly, vertex idx, pos, ends)
    for pi, p in enumerate(inserted):
        markers.append((pi, 0, p[0], 1))
        markers.append((pi, len(p) - 1, p[-1], 1))
        for vi in range(1, len(p) - 1):
            d = np.hypot(hot_arr[:, 0] - p[vi][0], hot_arr[:, 1] - p[vi][1])
            if bool((d <= tol).any()):
                markers.append((pi, vi, p[vi], 2))
    cluster_of, n_clusters = _single_link(np.asarray([m[2] for m in markers]), tol)
    ends = np.zeros(n_clusters, dtype=int)
    for m, c in zip(markers, cluster_of):
        ends[c] += m[3]
    split_idx: dict[int, set[int]] = {pi: set() for pi in range(len(inserted))}
    for m, c in zip(markers, cluster_of):
        if ends[c] >= 3 and 0 < m[1] < len(inserted[m[0]]) - 1:
            split_idx[m[0]].add(m[1])

    pieces: list[np.ndarray] = []
    for pi, p in enumerate(inserted):
        cuts = [0] + sorted(split_idx[pi]) + [len(p) - 1]
        for k in range(len(cuts) - 1):
            piece = p[cuts[k] : cuts[k + 1] + 1]
            if len(piece) >= 2 and polyline_length(piece) > 1e-9:
                pieces.append(piece)
    return pieces


def extract_branches(cracks, a: float) -> list[Branch]:
    """Split raw crack polylines into branches at junctions (tolerance a/4)."""
    pieces = split_at_junctions([as_polyline(c) for c in cracks], tol=a / 4.0)
    return [Branch(i, p) for i, p in enumerate(pieces)]


def _single_link(points: np.ndarray, cap: float) -> tuple[list[int], int]:
    """Closest-pair-first single-link clustering with cluster diameter <= cap.

    Returns (cluster index per point, number of clusters). Ties on pair
    distance break toward lower point indices.
    """
    n = len(points)
    if n == 0:
        return [], 0
    clusters: list[set[int]] = [{i} for i in range(n)]
    pairs = sorted(
        ((float(np.hypot(*(points[i] - points[j]))), i, j) for i in range(n) for j in range(i + 1, n))
    )
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    members: dict[int, set[int]] = {i: {i} for i in range(n)}
    for d, i, j in pairs:
        if d > cap:
            break
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        merged = members[ri] | members[rj]
        diam = max(
            float(np.hypot(*(points[x] - points[y]))) for x in merged for y in merged if x < y
        )
        if diam <= cap:
            parent[rj] = ri
            members[ri] = merged
            del members[rj]
    roots = sorted(members, key=lambda r: (points[min(members[r])][0], points[min(members[r])][1], r))
    label = {r: k for k, r in enumerate(roots)}
    return [label[find(i)] for i in range(n)], len(roots)


def merge_endpoints(branches: list[Branch], a: float) -> tuple[list[np.ndarray], list[tuple[int, int]]]:
    """Merge branch endpoints within radius `a` into shared vertices.

    Single-link clustering with diameter cap `a`, iterated on the centroids
    until a fixpoint, so re-running changes nothing and no two output
    vertices sit within `a` of each other. Returns (vertex positions,
    per-branch (start_vertex, end_vertex)) and re-anchors branch geometry by
    prepending/appending the centroid so the original points are preserved.
    """
    pts = []
    for b in branches:
        pts.append(b.polyline[0])
        pts.append(b.polyline[-1])
    pts = np.asarray(pts)
    assign = np.arange(len(pts))
    centroids = pts.copy()
    for _ in range(len(pts) + 1):
        labels, k = _single_link(centroids, a)
        labels = np.asarray(labels)
        if k == len(centroids):
            break
        new_centroids = np.asarray([centroids[labels == c].mean(axis=0) for c in range(k)])
        assign = labels[assign]
        centroids = new_centroids
    vertex_pos = [centroids[c] for c in range(len(centroids))]
    anchors: list[tuple[int, int]] = []
    for bi, b in enumerate(branches):
        cs, ce = int(assign[2 * bi]), int(assign[2 * bi + 1])
        geom = b.polyline
        if np.hypot(*(vertex_pos[cs] - geom[0])) > 1e-9:
            geom = np.vstack([vertex_pos[cs][None, :], geom])
        if np.hypot(*(vertex_pos[ce] - geom[-1])) > 1e-9:
            geom = np.vstack([geom, vertex_pos[ce][None, :]])
        b.polyline = geom
        b.endpoints = (cs, ce)
        anchors.append((cs, ce))
    return vertex_pos, anchors


def sparsify(branch_poly: np.ndarray, a: float, resolution: float) -> np.ndarray:
    """Minimal interior chord points covering the branch within radius `a`.

    Greedy farthest-point insertion: while some branch sample lies more than
    `a` from the chord polyline, insert the worst-violating sample as a new
    chord point. Returns the interior points, shape (m, 2); m = 0 when the
    straight chord already suffices.
    """
    poly = as_polyline(branch_poly)
    step = min(resolution, a / 4.0)
    samples = sample_polyline(poly, step)
    seg = np.hypot(*(poly[1:] - poly[:-1]).T)
    total = float(seg.sum())
    n = max(1, int(np.ceil(total / step)))
    arc = np.linspace(0.0, total, n + 1)
    chord_arcs = [0.0, total]
    chord_pts = [samples[0], samples[-1]]
    # Points between samples sit at most step/2 along the branch from a
    # sample, so holding samples to a - step/2 keeps the whole branch
    # within radius a of the chord, not just the sampled points.
    budget = a - 0.5 * step - 1e-6
    for _ in range(len(samples)):
        d = distance_to_polyline(samples, np.asarray(chord_pts))
        worst = int(np.argmax(d))
        if d[worst] <= budget:
            break
        pos = float(arc[worst])
        k = int(np.searchsorted(chord_arcs, pos))
        if pos in chord_arcs:
            break  # numerical stalemate; give up rather than loop
        chord_arcs.insert(k, pos)
        chord_pts.insert(k, samples[worst])
    return np.asarray(chord_pts[1:-1]).reshape(-1, 2)


def build_crack_graph(cracks, a: float, resolution: float) -> CrackGraph:
    """Full crack pipeline: branches -> merged endpoints -> chord edges."""
    g = CrackGraph()
    cracks = [as_polyline(c) for c in cracks] if cracks else []
    if not cracks:
        return g
    branches = extract_branches(cracks, a)
    if not branches:
        return g
    vertex_pos, anchors = merge_endpoints(branches, a)
    order = sorted(range(len(vertex_pos)), key=lambda i: (vertex_pos[i][0], vertex_pos[i][1]))
    vid_of = {old: new for new, old in enumerate(order)}
    for old, new in vid_of.items():
        g.vertices[new] = vertex_pos[old]
        g.endpoint_ids.add(new)
    next_vid = len(vertex_pos)
    for b, (cs, ce) in zip(branches, anchors):
        interior = sparsify(b.polyline, a, resolution)
        chain = [vid_of[cs]]
        for p in interior:
            g.vertices[next_vid] = p
            chain.append(next_vid)
            next_vid += 1
        chain.append(vid_of[ce])
        b.endpoints = (vid_of[cs], vid_of[ce])
        g.branches.append(b)
        for u, v in zip(chain[:-1], chain[1:]):
            geom = np.asarray([g.vertices[u], g.vertices[v]])
            g.edges.append(CrackEdge(u, v, geom, polyline_length(geom)))
    return g
