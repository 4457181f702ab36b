import sys

sys.path.insert(0, "src")
import numpy as np

from mdcplan.fusion import CRACK, CONNECTOR, REEB, PGEdge, PGVertex, PlanningGraph
from mdcplan.hierarchy import build_hierarchy, find_bridges, _adjacency
from mdcplan.search import enumerate_tours, global_fallback_tour, validate_tour


def mk(positions, edge_list, start, end):
    pg = PlanningGraph()
    for i, p in enumerate(positions):
        pg.vertices[i] = PGVertex(i, np.asarray(p, float), "critical")
    for i, (u, v, lab) in enumerate(edge_list):
        g = np.asarray([positions[u], positions[v]], float)
        ln = float(np.linalg.norm(g[1] - g[0]))
        pg.edges.append(PGEdge(i, u, v, lab, g, ln, cell_ref=i if lab == REEB else None))
    pg.start, pg.end = start, end
    return pg


# barbell: s -e0- [triangle 1-2-3] -e4- [triangle 4-6-7] -e8- t
pos = [(0, 0), (1, 0), (1.5, 1), (2, 0), (3, 0), (6, 0), (4, 1), (5, 0)]
edges = [
    (0, 1, CONNECTOR),
    (1, 2, REEB),
    (2, 3, REEB),
    (3, 1, REEB),
    (1, 4, CONNECTOR),
    (4, 6, REEB),
    (6, 7, REEB),
    (7, 4, REEB),
    (4, 5, CONNECTOR),
]
pg = mk(pos, edges, 0, 5)
h = build_hierarchy(pg)
print("bridges:", sorted(h.bridges))
print("levels:", h.levels)
print("level0 order:", h.level0_order)
for c in h.components:
    print(
        f"  comp {c.id}: lvl={c.level} edges={sorted(c.edge_ids)} "
        f"entry={c.entry_vertex} exit={c.exit_vertex} "
        f"segs={[(s.kind, s.edge_ids) for s in c.segments]}"
    )
res = enumerate_tours(pg, h)
print("counts:", res.sequence_counts, "eq16:", res.eq16_product, "tours:", len(res.tours))
for t in res.tours:
    print("  tour:", t.edge_ids, "ok:", validate_tour(pg, t, pg.start, pg.end))
fb = global_fallback_tour(pg)
print("fallback:", fb.edge_ids, validate_tour(pg, fb, pg.start, pg.end))

print("\n--- theta ---")
pos = [(0, 0), (3, 0), (1, 1), (2, 1), (1.5, 0), (1.5, -1)]
edges = [
    (0, 2, REEB), (2, 3, REEB), (3, 1, REEB),
    (0, 4, REEB), (4, 1, REEB),
    (0, 5, REEB), (5, 1, REEB),
]
pg = mk(pos, edges, 0, 1)
h = build_hierarchy(pg)
print("bridges:", sorted(h.bridges), "levels:", h.levels)
for c in h.components:
    print(f"  comp {c.id}: lvl={c.level} edges={sorted(c.edge_ids)} entry={c.entry_vertex} exit={c.exit_vertex} segs={[(s.kind, s.edge_ids) for s in c.segments]}")
res = enumerate_tours(pg, h)
print("counts:", res.sequence_counts, "eq16:", res.eq16_product, "tours:", len(res.tours), "notes:", res.notes)
for t in res.tours:
    print("  tour:", t.edge_ids, validate_tour(pg, t, pg.start, pg.end))

print("\n--- figure-eight side cycle ---")
pos = [(0, 0), (1, 0), (1.5, 1), (2, 0), (3, 0), (6, 0), (4, 1), (5, 0), (1.2, 2), (1.9, 2)]
edges = [
    (0, 1, CONNECTOR),
    (1, 2, REEB), (2, 3, REEB), (3, 1, REEB),
    (2, 8, REEB), (8, 9, REEB), (9, 2, REEB),
    (1, 4, CONNECTOR),
    (4, 6, REEB), (6, 7, REEB), (7, 4, REEB),
    (4, 5, CONNECTOR),
]
pg = mk(pos, edges, 0, 5)
h = build_hierarchy(pg)
print("bridges:", sorted(h.bridges), "levels:", h.levels)
for c in h.components:
    print(f"  comp {c.id}: lvl={c.level} edges={sorted(c.edge_ids)} entry={c.entry_vertex} exit={c.exit_vertex} segs={[(s.kind, s.edge_ids) for s in c.segments]}")
res = enumerate_tours(pg, h)
print("counts:", res.sequence_counts, "eq16:", res.eq16_product, "tours:", len(res.tours), "notes:", res.notes)
for t in res.tours:
    print("  tour:", t.edge_ids, validate_tour(pg, t, pg.start, pg.end))

print("\n--- nested demotion ---")
pos = [(0, 0), (4, 0), (4, 3), (0, 3), (3, 1.5)]
edges = [
    (0, 1, REEB),  # ab
    (1, 2, REEB),  # bc
    (2, 3, REEB),  # cd
    (3, 0, REEB),  # da
    (2, 4, REEB),  # cm
    (4, 1, REEB),  # mb
]
pg = mk(pos, edges, 1, 2)
h = build_hierarchy(pg)
print("bridges:", sorted(h.bridges), "levels:", h.levels, "basis:", [sorted(b) for b in h.basis])
for c in h.components:
    print(f"  comp {c.id}: lvl={c.level} edges={sorted(c.edge_ids)} entry={c.entry_vertex} exit={c.exit_vertex} parent={c.parent} help={sorted(c.help_vertices)} segs={[(s.kind, s.edge_ids) for s in c.segments]}")
res = enumerate_tours(pg, h)
print("counts:", res.sequence_counts, "eq16:", res.eq16_product, "tours:", len(res.tours), "notes:", res.notes)
for t in res.tours:
    print("  tour:", t.edge_ids, t.vertices, validate_tour(pg, t, pg.start, pg.end))
