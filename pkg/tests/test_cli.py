import csv
import json

from mdcplan.cli import main


def test_gen_map_plan_eval_render_pipeline(tmp_path, capsys):
    map_dir = tmp_path / "maps"
    map_dir.mkdir()
    for seed in (1, 2):
        rc = main([
            "gen-map", "--dist", "uniform", "--density", "35",
            "--seed", str(seed), "--out", str(map_dir / f"u35_s{seed}.json"),
        ])
        assert rc == 0
    assert len(list(map_dir.glob("*.json"))) == 2

    out_dir = tmp_path / "plans"
    rc = main([
        "plan", "--map", str(map_dir / "u35_s1.json"), "--robots", "2",
        "--planner", "hcmr", "--out-dir", str(out_dir),
    ])
    assert rc == 0
    stem = "u35_s1_hcmr_n2"
    plan_path = out_dir / f"{stem}.plan.json"
    metrics_path = out_dir / f"{stem}.metrics.json"
    svg_path = out_dir / f"{stem}.svg"
    assert plan_path.exists() and metrics_path.exists() and svg_path.exists()
    printed = capsys.readouterr().out
    assert "completeness" in printed and "conflicts" in printed

    plan_doc = json.loads(plan_path.read_text())
    assert plan_doc["version"] == 1
    assert len(plan_doc["robots"]) == 2
    metrics = json.loads(metrics_path.read_text())
    assert metrics["planner"] == "hcmr"
    assert metrics["sensing_conflicts"] == 0

    rc = main([
        "plan", "--map", str(map_dir / "u35_s1.json"), "--robots", "2",
        "--planner", "greedy", "--out-dir", str(out_dir),
    ])
    assert rc == 0
    greedy = json.loads((out_dir / "u35_s1_greedy_n2.metrics.json").read_text())
    assert set(greedy) >= {"total_path_length_m", "completeness_pct"}

    csv_path = tmp_path / "eval.csv"
    rc = main([
        "eval", "--maps", str(map_dir), "--robots", "1",
        "--planners", "hcmr", "--out", str(csv_path),
    ])
    assert rc == 0
    with open(csv_path) as fh:
        rows = list(csv.DictReader(fh))
    names = [r["map"] for r in rows]
    assert names.count("mean") == 1 and names.count("std") == 1
    assert sum(1 for n in names if n.endswith(".json")) == 2

    svg_out = tmp_path / "re.svg"
    rc = main([
        "render", "--plan", str(plan_path), "--map", str(map_dir / "u35_s1.json"),
        "--out", str(svg_out),
    ])
    assert rc == 0
    assert svg_out.read_text().startswith("<svg")


def test_eval_fails_without_maps(tmp_path, capsys):
    empty = tmp_path / "none"
    empty.mkdir()
    rc = main(["eval", "--maps", str(empty), "--robots", "1",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "no *.json maps" in capsys.readouterr().err
