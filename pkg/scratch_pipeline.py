import sys, time

sys.path.insert(0, "src")
import numpy as np

from mdcplan.config import Params
from mdcplan.cracks import build_crack_graph
from mdcplan.reeb import service_area_mask, decompose, build_reeb
from mdcplan.fusion import match_and_augment, eulerian_lower_bound
from mdcplan.hierarchy import build_hierarchy, HierarchyError
from mdcplan.search import enumerate_tours, global_fallback_tour, validate_tour, PlannerInfeasible

p = Params()
rng = np.random.default_rng(7)

cracks = [
    np.array([[4.0, 4.0], [9.0, 6.5], [14.0, 5.0]]),
    np.array([[14.0, 5.0], [18.0, 9.0]]),
    np.array([[8.0, 20.0], [12.0, 22.0], [16.0, 21.0], [20.0, 24.0]]),
    np.array([[22.0, 10.0], [25.0, 14.0]]),
]

t0 = time.time()
gc = build_crack_graph(cracks, p.service_radius, p.resolution)
print(f"crack graph: {len(gc.vertices)} vertices, {len(gc.edges)} edges")
mask = service_area_mask(gc, p.sensor_radius, p.resolution, p.length_m, p.width_m)
cells, cps = decompose(p.length_m, p.width_m, mask, sliver_area=(2 * p.service_radius) ** 2)
print(f"cells: {len(cells)}, critical points: {len(cps)}")
gw = build_reeb(cells, cps)
print(f"reeb: {len(gw.vertices)} vertices, {len(gw.edges)} edges")
pg = match_and_augment(gc, gw, p.resolution)
deg = pg.degrees()
odd = [v for v, d in deg.items() if d % 2 == 1]
print(f"fused: {len(pg.vertices)} vertices, {len(pg.edges)} edges, odd={odd}, start={pg.start}, end={pg.end}")
print("lower bound:", eulerian_lower_bound(pg))

try:
    h = build_hierarchy(pg)
    print("levels:", h.levels, "n comps:", len(h.components), "order:", h.level0_order)
    res = enumerate_tours(pg, h, max_tours=16)
    print("counts:", res.sequence_counts, "eq16:", res.eq16_product, "tours:", len(res.tours), "capped:", res.capped)
    print("notes:", res.notes)
    for t in res.tours[:3]:
        ok, why = validate_tour(pg, t, pg.start, pg.end)
        print("  tour ok:", ok, why, "len:", len(t.edge_ids))
except (HierarchyError, PlannerInfeasible) as exc:
    print("FELL BACK:", type(exc).__name__, exc)
    fb = global_fallback_tour(pg)
    print("fallback ok:", validate_tour(pg, fb, pg.start, pg.end))
print(f"total {time.time() - t0:.2f}s")
