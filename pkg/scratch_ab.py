"""A/B run-merge policies + top-K refinement headroom on a 6-map slice."""
import time

import mdcplan.trajectory as T
from mdcplan import Params, gen_map, greedy_plan, plan_map

P = Params()
MAPS = [("uniform", 65, 1000), ("uniform", 100, 1002), ("gaussian", 65, 1001),
        ("gaussian", 100, 1003), ("uniform", 65, 1004), ("gaussian", 100, 1000)]


def tot(plans):
    by = {"explore": 0.0, "service": 0.0, "transit": 0.0}
    for p in plans:
        for s in p.segments:
            by[s.mode] += s.length_m
    return by


for mode in ("connector", "reeb", "none"):
    T._MERGE_MODE = mode
    rows = []
    for dist, dens, seed in MAPS:
        wm = gen_map(dist, dens, seed)
        t0 = time.perf_counter()
        res = plan_map(wm, 3, P, max_tours=64)
        dt = time.perf_counter() - t0
        h = tot(res.plans)
        g = tot(greedy_plan(wm, 3, P))
        m = res.metrics
        rows.append((sum(h.values()), sum(g.values()), h, m["sensing_conflicts"],
                     m["completeness_pct"], dt))
    wins = sum(1 for r in rows if r[0] <= r[1])
    imp = sum((r[1] - r[0]) / r[1] for r in rows) / len(rows) * 100
    he = sum(r[2]["explore"] for r in rows) / len(rows)
    ht = sum(r[2]["transit"] for r in rows) / len(rows)
    bad = [(r[3], round(r[4], 2)) for r in rows if r[3] or r[4] < 99.5]
    print(f"{mode:10s} wins={wins}/6 imp={imp:+.1f}% expl={he:.0f} "
          f"trans={ht:.0f} bad={bad} t={sum(r[5] for r in rows):.0f}s")
