import time

import numpy as np

from mdcplan.allocation import edge_costs, select_best
from mdcplan.config import Params
from mdcplan.cracks import build_crack_graph
from mdcplan.fusion import CONNECTOR, match_and_augment
from mdcplan.geometry import RasterMask, dilate, distance_to_polyline, mask_area, polyline_length, sample_polyline
from mdcplan.hierarchy import HierarchyError, build_hierarchy
from mdcplan.reeb import build_reeb, decompose, service_area_mask
from mdcplan.search import PlannerInfeasible, enumerate_tours, global_fallback_tour
from mdcplan.trajectory import SERVICE, generate, validate

p = Params()


def random_cracks(rng, n_cracks):
    cracks = []
    for _ in range(n_cracks):
        pos = np.array([rng.uniform(3, p.length_m - 3), rng.uniform(3, p.width_m - 3)])
        heading = rng.uniform(0, 2 * np.pi)
        pts = [pos.copy()]
        for _ in range(rng.integers(2, 8)):
            heading += rng.uniform(-0.9, 0.9)
            step = rng.uniform(0.5, 1.5)
            nxt = pts[-1] + step * np.array([np.cos(heading), np.sin(heading)])
            nxt = np.clip(nxt, 1.0, [p.length_m - 1, p.width_m - 1])
            if np.hypot(*(nxt - pts[-1])) < 0.3:
                break
            pts.append(nxt)
        if len(pts) >= 2:
            cracks.append(np.array(pts))
    return cracks


t00 = time.perf_counter()
bad = 0
for seed in range(12):
    rng = np.random.default_rng(seed)
    cracks = random_cracks(rng, int(rng.integers(3, 9)))
    t0 = time.perf_counter()
    gc = build_crack_graph(cracks, p.service_radius, p.resolution)
    mask = service_area_mask(gc, p.sensor_radius, p.resolution, p.length_m, p.width_m)
    cells, cps = decompose(p.length_m, p.width_m, mask, (2 * p.service_radius) ** 2)
    rg = build_reeb(cells, cps)
    pg = match_and_augment(gc, rg, p.resolution)
    note = ""
    try:
        hier = build_hierarchy(pg)
        res = enumerate_tours(pg, hier, max_tours=64)
        tours = res.tours
    except (HierarchyError, PlannerInfeasible) as e:
        tours = [global_fallback_tour(pg)]
        note = f" FALLBACK({e})"
    costs = edge_costs(pg, p)
    conn_pts = [pg.vertices[e.u].position for e in pg.edges if e.label == CONNECTOR] + \
               [pg.vertices[e.v].position for e in pg.edges if e.label == CONNECTOR]
    crack_samples = np.vstack([sample_polyline(c, p.resolution) for c in cracks])
    line = f"seed {seed}: edges={len(pg.edges)} tours={len(tours)}{note}"
    for n in (1, 3, 5):
        tour, part, obj = select_best(tours, costs, n, alpha=p.alpha)
        plans = [generate(pg, tour.edge_ids[a:b], tour.vertices[a:b + 1], p, rid)
                 for rid, (a, b) in enumerate(part.slices())]
        rep = validate(plans, conn_pts, p.service_radius)
        cover = RasterMask.empty(p.length_m, p.width_m, p.resolution)
        svc = []
        for pl in plans:
            for s in pl.segments:
                if polyline_length(s.polyline) > 0:
                    dilate(s.polyline, p.sensor_radius, p.resolution, p.length_m, p.width_m, out=cover)
                if s.mode == SERVICE:
                    svc.append(s.polyline)
        comp = mask_area(cover) / (p.length_m * p.width_m) * 100
        d = np.full(len(crack_samples), np.inf)
        for s in svc:
            np.minimum(d, distance_to_polyline(crack_samples, s), out=d)
        fill = float((d <= p.service_radius + 1e-9).mean()) * 100
        gaps = sum(len(pl.continuity_gaps()) for pl in plans)
        ok = rep.count == 0 and comp >= 99.5 and fill == 100.0 and gaps == 0
        if not ok:
            bad += 1
        line += f" | N={n}: conf={rep.count} comp={comp:.2f} fill={fill:.3f} gaps={gaps}{'' if ok else ' <-- BAD'}"
    print(line + f"  ({time.perf_counter()-t0:.1f}s)")
print(f"total {time.perf_counter()-t00:.1f}s, bad={bad}")
