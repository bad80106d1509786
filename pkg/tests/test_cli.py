import json

import pytest

from polyguard.central import GuardPlacement
from polyguard.cli import main, read_polygon
from polyguard.corpus import L_POLYGON, RECTANGLE
from polyguard.geometry import SimplePolygon
from polyguard.triangulate import Triangulation


@pytest.fixture
def lfile(tmp_path):
    p = tmp_path / "l.txt"
    p.write_text(SimplePolygon(L_POLYGON).to_text())
    return str(p)


@pytest.fixture
def combfile(tmp_path, comb):
    p = tmp_path / "comb.txt"
    p.write_text(comb.to_text())
    return str(p)


def test_gen_random_round_trips(tmp_path):
    out = tmp_path / "r.txt"
    assert main(["gen", "random", "--seed", "3", "--n", "12", "-o", str(out)]) == 0
    assert read_polygon(str(out)).n == 12


def test_gen_tree_polygon_writes_sidecar(tmp_path):
    out = tmp_path / "t.txt"
    assert main(["gen", "tree-polygon", "--delta", "2", "--height", "2", "-o", str(out)]) == 0
    side = json.loads((tmp_path / "t.txt.json").read_text())
    assert side["tree_diameter"] == 4
    assert read_polygon(str(out)).n > 0


def test_json_polygon_input(tmp_path):
    p = tmp_path / "r.json"
    p.write_text(json.dumps(SimplePolygon(RECTANGLE).to_dict()))
    assert read_polygon(str(p)) == SimplePolygon(RECTANGLE)


def test_triangulate_round_trips(tmp_path, lfile):
    out = tmp_path / "t.json"
    assert main(["triangulate", lfile, "-o", str(out)]) == 0
    assert len(Triangulation.from_dict(json.loads(out.read_text())).triangles) == 4


def test_guard_central_then_verify(tmp_path, combfile):
    g = tmp_path / "g.json"
    svg = tmp_path / "g.svg"
    assert main(["guard-central", combfile, "-o", str(g), "--svg", str(svg)]) == 0
    assert len(GuardPlacement.from_dict(json.loads(g.read_text()))) >= 1
    assert svg.read_text().startswith("<svg")
    assert main(["verify", "--polygon", combfile, "--guards", str(g), "--samples", "500"]) == 0


def test_verify_failure_exit_code(tmp_path, combfile, comb, capsys):
    g = tmp_path / "bad.json"
    bad = GuardPlacement()
    bad.add(comb.vertices[0], "manual", 0)
    g.write_text(json.dumps(bad.to_dict()))
    assert main(["verify", "--polygon", combfile, "--guards", str(g), "--samples", "500"]) == 2
    assert "FAILED" in capsys.readouterr().out


def test_medial_axis_command(tmp_path, lfile):
    out = tmp_path / "m.json"
    assert main(["medial-axis", lfile, "-o", str(out), "--svg", str(tmp_path / "m.svg")]) == 0
    assert json.loads(out.read_text())["diameter"] >= 2


@pytest.mark.parametrize("algo", ["bfs", "dfs", "race", "medial"])
def test_sim_run(tmp_path, lfile, algo, capsys):
    trace = tmp_path / "t.jsonl"
    code = main(["sim", "run", "--algo", algo, "--polygon", lfile, "--start", "1", "--trace", str(trace), "--reduce"])
    assert code == 0
    lines = [json.loads(x) for x in trace.read_text().splitlines()]
    summary = lines[-1]["summary"]
    for key in ("rounds", "guards_settled", "guards_after_reduction", "territory_tree_diameter", "medial_diameter", "n"):
        assert key in summary
    assert "wall_time" not in summary
    assert len(lines) - 1 >= summary["rounds"]
    printed = json.loads(capsys.readouterr().out)
    assert all(printed["verdicts"].values())


def test_sim_budget_exhausted(combfile):
    assert main(["sim", "run", "--algo", "bfs", "--polygon", combfile, "--agents", "2"]) == 3


def test_bad_input(tmp_path):
    p = tmp_path / "bow.txt"
    p.write_text("4\n0 0\n2 2\n2 0\n0 2\n")
    assert main(["triangulate", str(p)]) == 4
    assert main(["triangulate", str(tmp_path / "missing.txt")]) == 4
    assert main(["sim", "run", "--algo", "bfs", "--polygon", str(p)]) == 4


def test_agents_out_of_range(lfile):
    assert main(["sim", "run", "--algo", "bfs", "--polygon", lfile, "--agents", "99"]) == 4


def test_render(tmp_path, lfile):
    out = tmp_path / "r.svg"
    assert main(["render", lfile, "--triangulation", "--medial", "-o", str(out)]) == 0
    assert out.read_text().count('class="medial"') >= 1


def test_bench_csv(capsys):
    assert main(["bench", "--count", "2", "--n-min", "6", "--n-max", "10", "--algo", "bfs", "dfs"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "n,algorithm,d,D,rounds,guards,ok"
    assert len(rows) == 5
    assert all(r.endswith(",1") for r in rows[1:])
