"""Full 20-map hcmr-vs-greedy comparison (criterion-6 corpus)."""
import time

from mdcplan import Params, gen_map, plan_map

P = Params()
wins, imps = 0, []
t0 = time.perf_counter()
for dist in ("uniform", "gaussian"):
    for dens in (65, 100):
        for seed in range(1000, 1005):
            wm = gen_map(dist, dens, seed)
            h = plan_map(wm, 3, P, planner="hcmr", max_tours=64)
            g = plan_map(wm, 3, P, planner="greedy")
            hl = sum(p.total_length_m for p in h.plans)
            gl = sum(p.total_length_m for p in g.plans)
            win = hl <= gl
            wins += win
            imps.append((gl - hl) / gl * 100)
            hm, gm = h.metrics, g.metrics
            flag = "" if win else "  LOSS"
            print(f"{dist[0].upper()}{dens} s{seed-1000}: h={hl:7.1f} g={gl:7.1f} "
                  f"imp={imps[-1]:+5.1f}% hconf={hm['sensing_conflicts']} "
                  f"hcomp={hm['completeness_pct']:.2f} gconf={gm['sensing_conflicts']}{flag}")
print(f"\nwins={wins}/20  mean_improvement={sum(imps)/len(imps):+.2f}%  "
      f"t={time.perf_counter()-t0:.0f}s")
