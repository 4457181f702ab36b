"""Command-line surface: gen-map, plan, eval, render."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .config import Params
from .io import load_map, load_plan, map_category, save_map, save_metrics, save_plan, write_eval_csv
from .mapgen import gen_map
from .planner import plan_map
from .render import render_svg


def _cmd_gen_map(args) -> int:
    wmap = gen_map(args.dist, float(args.density), args.seed)
    save_map(wmap, args.out)
    print(f"wrote {args.out} ({len(wmap.cracks)} cracks)")
    return 0


def _plan_one(map_path: Path, robots: int, planner: str, alpha: float | None,
              resolution: float | None, max_tours: int | None, out_dir: Path) -> dict:
    params = Params()
    if resolution is not None:
        params = replace(params, resolution=resolution)
    wmap = load_map(map_path)
    result = plan_map(wmap, robots, params, planner=planner, alpha=alpha,
                      max_tours=max_tours)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{map_path.stem}_{planner}_n{robots}"
    save_plan(result.plans, result.tour_edge_ids, result.objective,
              out_dir / f"{stem}.plan.json")
    metrics = dict(result.metrics)
    if result.notes:
        metrics["notes"] = result.notes
    save_metrics(metrics, out_dir / f"{stem}.metrics.json")
    render_svg(wmap, result.plans, out_dir / f"{stem}.svg")
    return result.metrics


def _cmd_plan(args) -> int:
    metrics = _plan_one(Path(args.map), args.robots, args.planner, args.alpha,
                        args.resolution, args.max_tours, Path(args.out_dir))
    print(
        f"{args.planner}: length {metrics['total_path_length_m']:.1f} m, "
        f"time {metrics['task_time_s']:.1f} s, "
        f"completeness {metrics['completeness_pct']:.2f}%, "
        f"filling {metrics['filling_coverage_pct']:.1f}%, "
        f"conflicts {metrics['sensing_conflicts']}"
    )
    return 0


def _eval_job(job) -> dict:
    map_path, robots, planner, out_dir = job
    metrics = _plan_one(map_path, robots, planner, None, None, None, out_dir)
    wmap = load_map(map_path)
    row = {"map": map_path.name, "category": map_category(wmap.meta),
           "planner": planner, "robots": robots}
    row.update({k: v for k, v in metrics.items() if k != "planner"})
    return row


def _cmd_eval(args) -> int:
    maps = sorted(Path(args.maps).glob("*.json"))
    if not maps:
        print(f"no *.json maps under {args.maps}", file=sys.stderr)
        return 1
    planners = [p.strip() for p in args.planners.split(",") if p.strip()]
    out_dir = Path(args.out).parent / "plans"
    jobs = [(m, args.robots, pl, out_dir) for m in maps for pl in planners]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_eval_job, jobs))
    else:
        rows = [_eval_job(j) for j in jobs]
    write_eval_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_render(args) -> int:
    wmap = load_map(args.map)
    plans, _, _ = load_plan(args.plan)
    render_svg(wmap, plans, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdcplan",
                                 description="multi-robot double coverage planner")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-map", help="generate a synthetic crack map")
    g.add_argument("--dist", choices=["uniform", "gaussian"], required=True)
    g.add_argument("--density", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=_cmd_gen_map)

    p = sub.add_parser("plan", help="plan trajectories for a saved map")
    p.add_argument("--map", required=True)
    p.add_argument("--robots", type=int, required=True)
    p.add_argument("--planner", choices=["hcmr", "greedy"], default="hcmr")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--resolution", type=float, default=None)
    p.add_argument("--max-tours", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=_cmd_plan)

    e = sub.add_parser("eval", help="run planners over a map directory")
    e.add_argument("--maps", required=True)
    e.add_argument("--robots", type=int, required=True)
    e.add_argument("--planners", default="hcmr,greedy")
    e.add_argument("--out", required=True)
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(fn=_cmd_eval)

    r = sub.add_parser("render", help="render a saved plan to SVG")
    r.add_argument("--plan", required=True)
    r.add_argument("--map", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(fn=_cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
