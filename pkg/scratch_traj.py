import time

import numpy as np

from mdcplan.allocation import balanced_partition, edge_costs, select_best
from mdcplan.config import Params
from mdcplan.cracks import build_crack_graph
from mdcplan.fusion import CONNECTOR, match_and_augment
from mdcplan.geometry import RasterMask, dilate, mask_area, polyline_length
from mdcplan.hierarchy import build_hierarchy
from mdcplan.reeb import build_reeb, decompose, service_area_mask
from mdcplan.search import enumerate_tours
from mdcplan.trajectory import EXPLORE, boustrophedon, generate, validate
from mdcplan.reeb import Cell

p = Params()

# 1. spec example: 10x6 rectangle, r=1.52 -> 4 lanes, ~33.12 m
cell = Cell(0, 0, [(0, 120)] * 200, 0.05)  # 10 m x 6 m at res 0.05
sweep = boustrophedon([cell], 1.52, (0.0, 0.0))
print("rect sweep len:", polyline_length(sweep), "lanes:", sum(1 for i in range(len(sweep) - 1) if sweep[i][0] == sweep[i + 1][0]))

# 2. balanced partition toy: all ones, 10 edges, 3 robots -> max 4
part = balanced_partition([1.0] * 10, 3)
print("partition max:", part.max_cost, "cuts:", part.cuts)

# 3. full pipeline on a small crack map
cracks = [
    [(4.0, 4.0), (9.0, 7.5), (14.0, 6.0)],
    [(9.0, 19.0), (15.0, 22.0), (21.0, 20.5), (24.5, 23.5)],
    [(18.0, 9.0), (22.0, 12.5), (26.0, 11.0)],
    [(6.0, 13.0), (10.0, 15.5)],
]
t0 = time.perf_counter()
gc = build_crack_graph(cracks, p.service_radius, p.resolution)
mask = service_area_mask(gc, p.sensor_radius, p.resolution, p.length_m, p.width_m)
cells, cps = decompose(p.length_m, p.width_m, mask, (2 * p.service_radius) ** 2)
rg = build_reeb(cells, cps)
pg = match_and_augment(gc, rg, p.resolution)
hier = build_hierarchy(pg)
res = enumerate_tours(pg, hier, max_tours=64)
print(f"tours: {len(res.tours)} eq16={res.eq16_product} in {time.perf_counter()-t0:.2f}s, edges={len(pg.edges)}")

costs = edge_costs(pg, p)
for n in (1, 3, 5):
    tour, part, obj = select_best(res.tours, costs, n, alpha=p.alpha)
    plans = []
    for rid, (a, b) in enumerate(part.slices()):
        plans.append(generate(pg, tour.edge_ids[a:b], tour.vertices[a:b + 1], p, rid))
    conn_pts = []
    for e in pg.edges:
        if e.label == CONNECTOR:
            conn_pts += [pg.vertices[e.u].position, pg.vertices[e.v].position]
    rep = validate(plans, conn_pts, p.service_radius)
    cover = RasterMask.empty(p.length_m, p.width_m, p.resolution)
    for pl in plans:
        for s in pl.segments:
            if polyline_length(s.polyline) > 0:
                dilate(s.polyline, p.sensor_radius, p.resolution, p.length_m, p.width_m, out=cover)
    total_area = p.length_m * p.width_m
    comp = mask_area(cover) / total_area * 100
    print(f"N={n}: obj={obj:.1f} total_len={sum(pl.total_length_m for pl in plans):.1f} "
          f"maxt={max(pl.total_time_s for pl in plans):.1f} conflicts={rep.count} "
          f"svc_overlap={rep.service_overlap_m:.4f} completeness={comp:.2f}% "
          f"gaps={[pl.continuity_gaps() for pl in plans]}")
print("wall:", time.perf_counter() - t0)
