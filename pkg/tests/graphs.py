"""Small planning-graph builders shared by the search and acceptance tests.

`structured_random_graph` composes the same shapes the map pipeline emits
(bridge chains, parallel pairs, triangles, shared-edge cycle books) so the
hierarchy walk is always applicable, while staying small enough for
exhaustive Euler-trail oracles.
"""

from __future__ import annotations

import random

import numpy as np

from mdcplan.fusion import CONNECTOR, PGEdge, PGVertex, PlanningGraph


def mk_graph(edges, positions=None, start=0, end=None) -> PlanningGraph:
    n = max(max(u, v) for u, v in edges) + 1
    pg = PlanningGraph()
    for i in range(n):
        pos = positions[i] if positions else (float(i), float((i * 7) % 5))
        pg.vertices[i] = PGVertex(i, np.asarray(pos, float), "critical")
    for k, (u, v) in enumerate(edges):
        geom = np.asarray([pg.vertices[u].position, pg.vertices[v].position])
        ln = float(np.hypot(*(geom[1] - geom[0])))
        pg.edges.append(PGEdge(k, u, v, CONNECTOR, geom, ln))
    pg.start = start
    pg.end = n - 1 if end is None else end
    return pg


def hand_built_graphs() -> list[PlanningGraph]:
    out = []
    # plain bridge path
    out.append(mk_graph([(0, 1), (1, 2), (2, 3)]))
    # tail into a triangle, open trail ends back at the junction
    out.append(
        mk_graph(
            [(0, 1), (1, 2), (2, 3), (3, 1)],
            positions=[(0, 0), (1, 0), (2, 1), (2, -1)],
            start=0,
            end=1,
        )
    )
    # figure eight: two triangles pinched at the start vertex, closed tour
    out.append(
        mk_graph(
            [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
            positions=[(0, 0), (-1, 1), (-1, -1), (1, 1), (2, 0)],
            start=0,
            end=0,
        )
    )
    # theta with entry/exit tails: three parallel strands between junctions
    out.append(
        mk_graph(
            [(0, 1), (1, 2), (1, 2), (1, 2), (2, 3)],
            positions=[(0, 0), (1, 0), (2, 0), (3, 0)],
            start=0,
            end=3,
        )
    )
    # square whose middle chord has a parallel copy (nested sweep interval)
    out.append(
        mk_graph(
            [(0, 1), (1, 2), (2, 3), (0, 3), (1, 2)],
            positions=[(0, 5), (4, 5), (6, 5), (10, 5)],
            start=1,
            end=2,
        )
    )
    # two triangles joined by one bridge
    out.append(
        mk_graph(
            [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)],
            positions=[(0, 0), (1, 1), (1, -1), (3, 0), (4, 1), (4, -1)],
            start=2,
            end=3,
        )
    )
    # two parallel pairs sharing only a vertex (second pair rides a splice)
    out.append(
        mk_graph(
            [(0, 1), (0, 1), (1, 2), (1, 2)],
            positions=[(0, 0), (1, 0), (2, 0)],
            start=0,
            end=0,
        )
    )
    return out


def structured_random_graph(seed: int, max_edges: int = 12) -> PlanningGraph:
    rng = random.Random(seed)
    edges: list[tuple[int, int]] = []
    positions: list[tuple[float, float]] = [(0.0, 0.0)]
    current = 0

    def fresh(x: float) -> int:
        positions.append((x, rng.uniform(-1.0, 1.0)))
        return len(positions) - 1

    while len(edges) < max_edges - 1:
        budget = max_edges - len(edges)
        kinds = ["chain"]
        if budget >= 2:
            kinds.append("pair")
        if budget >= 3:
            kinds += ["triangle", "strands"]
        if budget >= 4:
            kinds.append("square")
        if budget >= 6:
            kinds.append("book")
        kind = rng.choice(kinds)
        x0 = positions[current][0]
        if kind == "chain":
            for _ in range(rng.randint(1, min(2, budget))):
                w = fresh(positions[current][0] + 1.0)
                edges.append((current, w))
                current = w
        elif kind == "pair":
            w = fresh(x0 + 1.0)
            edges += [(current, w), (current, w)]
        elif kind == "triangle":
            a, b = fresh(x0 + 1.0), fresh(x0 + 2.0)
            edges += [(current, a), (a, b), (b, current)]
        elif kind == "strands":
            w = fresh(x0 + 1.0)
            edges += [(current, w)] * 3
            current = w
        elif kind == "square":
            a, b, c = fresh(x0 + 1.0), fresh(x0 + 2.0), fresh(x0 + 1.0)
            edges += [(current, a), (a, b), (b, c), (c, current)]
        else:  # book: two triangles sharing a doubled spine edge
            a = fresh(x0 + 1.0)
            y, z = fresh(x0 + 0.5), fresh(x0 + 1.5)
            edges += [(current, a), (current, a), (current, y), (y, a), (current, z), (z, a)]
        if rng.random() < 0.25:
            break
    return mk_graph(edges, positions=positions, start=0, end=current)
