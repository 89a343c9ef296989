from __future__ import annotations

import csv
import json
import subprocess
import sys
from importlib import resources

import pytest

from uniplan import oracle
from uniplan.cli import main
from uniplan.metrics import MetricReport
from uniplan.task import make_task
from uniplan.taskio import read_plan, read_task, write_task


@pytest.fixture
def demo_file(tmp_path):
    path = tmp_path / "demo.task.json"
    path.write_bytes(resources.files("uniplan").joinpath("data/demo_nav.task.json").read_bytes())
    return path


def test_compile_count_prints_sizes(demo_file, tmp_path, capsys):
    out = tmp_path / "c.task.json"
    assert main(["compile", str(demo_file), "--metric", "count", "--order", "cd", "-o", str(out)]) == 0
    n = len(read_task(demo_file).actions)
    assert f"|A'| = {2 * n}" in capsys.readouterr().out
    meta = json.loads((tmp_path / "c.meta.json").read_text())
    assert (meta["W"], meta["omega_d"]) == (10**6, 1)


def test_compile_delta_paper_meta(demo_file, tmp_path):
    out = tmp_path / "d.task.json"
    assert main(["compile", str(demo_file), "--metric", "delta", "--order", "dc", "--delta-mode", "paper",
                 "-o", str(out)]) == 0
    meta = json.loads((tmp_path / "d.meta.json").read_text())
    assert meta["omega_d"] == 2_000_000 and meta["delta_mode"] == "paper"


def test_compile_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.task.json"
    bad.write_text('{\n  "propositions": ["p"],\n  "actions": [{"name": "a", "add": ["q"]}],\n'
                   '  "init": [],\n  "goal": []\n}\n')
    assert main(["compile", str(bad), "--metric", "count", "--order", "cd", "-o", str(tmp_path / "o.json")]) == 2
    assert "line 3" in capsys.readouterr().err


def test_compile_bound_violation(tmp_path):
    t = make_task(["g"], [{"name": "a", "add": ["g"], "cost": 1}, {"name": "b", "add": ["g"], "cost": 10**7}], [], ["g"])
    write_task(tmp_path / "t.task.json", t)
    assert main(["compile", str(tmp_path / "t.task.json"), "--metric", "range", "--order", "cd",
                 "-o", str(tmp_path / "o.task.json")]) == 3


def test_solve_trivial_and_unsolvable(tmp_path):
    write_task(tmp_path / "t.task.json", make_task(["g"], [], ["g"], ["g"]))
    assert main(["solve", str(tmp_path / "t.task.json"), "--plan", str(tmp_path / "t.plan")]) == 0
    assert read_plan(tmp_path / "t.plan").steps == ()
    write_task(tmp_path / "u.task.json", make_task(["g"], [], [], ["g"]))
    assert main(["solve", str(tmp_path / "u.task.json")]) == 10


def test_solve_limit(demo_file):
    assert main(["solve", str(demo_file), "--heuristic", "blind", "--max-expansions", "1"]) == 11


def test_solve_parse_error(tmp_path):
    (tmp_path / "x.task.json").write_text("{")
    assert main(["solve", str(tmp_path / "x.task.json")]) == 2


def test_solve_compiled_decodes_and_metrics_agree(demo_file, tmp_path, capsys):
    ct = tmp_path / "c.task.json"
    main(["compile", str(demo_file), "--metric", "count", "--order", "cd", "-o", str(ct)])
    capsys.readouterr()
    plan = tmp_path / "c.plan"
    assert main(["solve", str(ct), "--meta", str(tmp_path / "c.meta.json"), "--plan", str(plan)]) == 0
    out = capsys.readouterr().out
    task = read_task(demo_file)
    opt = oracle.all_cost_optimal(task)
    best_cost = sum(opt[0].cost_vector(task))
    best_count = min(MetricReport.of(p.cost_vector(task)).count for p in opt)
    assert f"decoded: cost={best_cost} count={best_count}" in out
    orig = tmp_path / "c.orig.plan"
    assert main(["metrics", str(demo_file), str(orig)]) == 0
    row = capsys.readouterr().out.strip().split(",")
    assert (int(row[0]), int(row[1])) == (best_cost, best_count)


def test_solve_decode_mismatch(demo_file, tmp_path):
    ct = tmp_path / "c.task.json"
    main(["compile", str(demo_file), "--metric", "count", "--order", "cd", "-o", str(ct)])
    meta_path = tmp_path / "c.meta.json"
    meta = json.loads(meta_path.read_text())
    meta["W"] = 10  # wrong scale on purpose
    meta_path.write_text(json.dumps(meta))
    assert main(["solve", str(ct), "--meta", str(meta_path), "--plan", str(tmp_path / "p.plan")]) == 4


def test_metrics_row(tmp_path, capsys):
    t = make_task(["a", "b"], [{"name": "x", "add": ["a"], "cost": 2}, {"name": "y", "pre": ["a"], "add": ["b"], "cost": 2}], [], ["b"])
    write_task(tmp_path / "t.task.json", t)
    (tmp_path / "p.plan").write_text("x\ny\n")
    assert main(["metrics", str(tmp_path / "t.task.json"), str(tmp_path / "p.plan")]) == 0
    assert capsys.readouterr().out == "4,1,0,0,0.0\n"
    (tmp_path / "bad.plan").write_text("y\n")
    assert main(["metrics", str(tmp_path / "t.task.json"), str(tmp_path / "bad.plan")]) == 5


def test_generate(tmp_path):
    spec = resources.files("uniplan").joinpath("data/demo_nav.spec.json")
    out = tmp_path / "n.task.json"
    assert main(["generate", "navigation", str(spec), "-o", str(out)]) == 0
    assert out.read_bytes() == resources.files("uniplan").joinpath("data/demo_nav.task.json").read_bytes()
    fin = resources.files("uniplan").joinpath("data/finance_3x3.spec.json")
    assert main(["generate", "finance", str(fin), "-o", str(tmp_path / "f.task.json")]) == 0
    (tmp_path / "bad.json").write_text('{"target": 0, "horizon": 1, "levels": [[1, 1]]}')
    assert main(["generate", "finance", str(tmp_path / "bad.json"), "-o", str(tmp_path / "x.json")]) == 2


def test_oracle_command(demo_file, capsys):
    assert main(["oracle", str(demo_file)]) == 0
    assert "complete: True" in capsys.readouterr().out


def test_bench_empty_dir(tmp_path):
    (tmp_path / "in").mkdir()
    out = tmp_path / "r.csv"
    assert main(["bench", str(tmp_path / "in"), "--out", str(out)]) == 0
    assert out.read_text().count("\n") == 1
    assert (tmp_path / "r.summary.csv").read_text() == "kind,instance,approach,metric,value\n"


def test_bench_records_bad_instance(demo_file, tmp_path):
    d = tmp_path / "in"
    d.mkdir()
    (d / "demo.task.json").write_bytes(demo_file.read_bytes())
    (d / "broken.task.json").write_text("{")
    out = tmp_path / "r.csv"
    assert main(["bench", str(d), "--approaches", "Pi,count_cd", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert {(r["instance"], r["outcome"]) for r in rows} == {("broken", "error: TaskSyntaxError"), ("demo", "solved")}
    assert main(["bench", str(d), "--approaches", "nope", "--out", str(out)]) == 2


def test_console_entry_point(demo_file):
    proc = subprocess.run([sys.executable, "-m", "uniplan.cli", "solve", str(demo_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "; cost = " in proc.stdout
