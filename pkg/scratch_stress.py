import sys, time

sys.path.insert(0, "src")
import numpy as np

from mdcplan.config import Params
from mdcplan.cracks import build_crack_graph
from mdcplan.reeb import service_area_mask, decompose, build_reeb
from mdcplan.fusion import match_and_augment
from mdcplan.hierarchy import build_hierarchy, HierarchyError
from mdcplan.search import enumerate_tours, global_fallback_tour, validate_tour, PlannerInfeasible

p = Params()


def random_cracks(rng, density):
    # rough stand-in for the future generator: polyline cracks until the
    # total length matches density percent of the workspace diagonal-ish
    target = density / 100.0 * 60.0
    cracks, total = [], 0.0
    while total < target:
        n = rng.integers(3, 9)
        start = rng.uniform([2, 2], [p.length_m - 2, p.width_m - 2])
        pts = [start]
        ang = rng.uniform(0, 2 * np.pi)
        for _ in range(n - 1):
            ang += rng.normal(0, 0.7)
            step = rng.uniform(0.5, 2.0)
            nxt = pts[-1] + step * np.array([np.cos(ang), np.sin(ang)])
            nxt = np.clip(nxt, [0.5, 0.5], [p.length_m - 0.5, p.width_m - 0.5])
            pts.append(nxt)
        poly = np.array(pts)
        seg = np.linalg.norm(np.diff(poly, axis=0), axis=1).sum()
        cracks.append(poly)
        total += seg
    return cracks


n_fallback = n_hier = n_comp_fb = 0
t_all = time.time()
for seed in range(30):
    rng = np.random.default_rng(seed)
    cracks = random_cracks(rng, 20 + 3 * seed)
    t0 = time.time()
    try:
        gc = build_crack_graph(cracks, p.service_radius, p.resolution)
        mask = service_area_mask(gc, p.sensor_radius, p.resolution, p.length_m, p.width_m)
        cells, cps = decompose(p.length_m, p.width_m, mask, sliver_area=(2 * p.service_radius) ** 2)
        gw = build_reeb(cells, cps)
        pg = match_and_augment(gc, gw, p.resolution)
    except Exception as exc:
        print(f"seed {seed}: FRONT-HALF FAIL {type(exc).__name__}: {exc}")
        continue
    deg = pg.degrees()
    odd = [v for v, d in deg.items() if d % 2 == 1]
    assert sorted(odd) == sorted([pg.start, pg.end]), f"seed {seed}: odd set {odd}"
    status = ""
    try:
        h = build_hierarchy(pg)
        res = enumerate_tours(pg, h, max_tours=32)
        n_hier += 1
        fb_notes = [n for n in res.notes if "unconstrained" in n]
        if fb_notes:
            n_comp_fb += 1
            status = f"comp-fallbacks={len(fb_notes)}"
        for t in res.tours:
            ok, why = validate_tour(pg, t, pg.start, pg.end)
            assert ok, f"seed {seed}: bad tour: {why}"
        print(
            f"seed {seed}: |E|={len(pg.edges)} tours={len(res.tours)} eq16={res.eq16_product} "
            f"capped={res.capped} {status} ({time.time()-t0:.2f}s)"
        )
    except (HierarchyError, PlannerInfeasible) as exc:
        n_fallback += 1
        fb = global_fallback_tour(pg)
        ok, why = validate_tour(pg, fb, pg.start, pg.end)
        assert ok, f"seed {seed}: fallback bad: {why}"
        print(f"seed {seed}: |E|={len(pg.edges)} GLOBAL FALLBACK ({type(exc).__name__}: {exc}) ok ({time.time()-t0:.2f}s)")

print(f"\nhier ok: {n_hier}/30, global fallback: {n_fallback}, with comp fallback: {n_comp_fb}, total {time.time()-t_all:.1f}s")
