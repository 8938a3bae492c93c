"""The command-line surface: outputs, determinism, exit codes."""

import json

import pytest

from snowflake_groups.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dist(capsys):
    code, out, _ = run_cli(capsys, "dist", "--L", "6", "--a-power", "36")
    assert code == 0 and out.strip() == "16"
    code, out, _ = run_cli(capsys, "dist", "--L", "10", "--h", "12", "0")
    assert code == 0 and out.strip() == "8"


def test_dist_json(capsys):
    code, out, _ = run_cli(capsys, "--format", "json", "dist", "--L", "6", "--a-power", "36")
    assert code == 0
    assert json.loads(out) == {"L": 6, "a_power": 36, "dist": 16}


def test_expr_and_word(capsys):
    code, out, _ = run_cli(capsys, "expr", "--L", "10", "--m", "36")
    assert code == 0 and out.strip() == "digits [-4, 4] length 16"
    code, out, _ = run_cli(capsys, "word", "--L", "6", "--a-power", "6")
    assert code == 0 and out.strip() == "s a s^-1 t a t^-1"
    code, out, _ = run_cli(capsys, "word", "--L", "6", "--h", "0", "1")
    assert code == 0 and out.strip() == "s a s^-1"


def test_snowflake_and_verify(capsys):
    code, out, _ = run_cli(capsys, "snowflake", "--L", "6", "--n", "1", "--flavor", "s")
    assert code == 0 and out.strip() == "s a s^-1 t a t^-1"
    code, out, _ = run_cli(capsys, "verify-loop", "--L", "6", "--n", "1")
    assert code == 0 and out.strip() == "geodesic: true"


def test_verify_loop_failure_exit_code(capsys):
    code, out, err = run_cli(
        capsys, "verify-loop", "--L", "6", "--word", "a^12 a^-12"
    )
    assert code == 1
    assert "geodesic: false" in out
    assert "counterexample" in err


def test_table_csv(capsys):
    code, out, _ = run_cli(capsys, "table", "--L", "10", "--m-max", "10")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,dist,ratio"
    assert lines[1].startswith("1,1,1")
    assert lines[10].startswith("10,6,")


def test_mn(capsys):
    code, out, _ = run_cli(capsys, "mn", "--L", "10", "--n-max", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split()[:4] == ["0", "4", "4", "4"]
    assert lines[1].split()[:4] == ["1", "36", "16", "16"]


def test_ball_jsonl(capsys):
    code, out, _ = run_cli(capsys, "ball", "--L", "6", "--radius", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 7
    assert json.loads(lines[0]) == {"normal_form": "1", "distance": 0}


def test_enfilade(capsys):
    code, out, _ = run_cli(capsys, "enfilade", "--L", "6", "--word", "s a^5 s^-1", "--R", "4")
    assert code == 0
    data = json.loads(out)
    assert data["depth"] == 0 and data["end"] == "a^5"
    assert data["exponents"] == [5]


def test_fill_snowflake(capsys):
    code, out, _ = run_cli(capsys, "fill", "snowflake", "--L", "6", "--p", "2")
    assert code == 0
    data = json.loads(out)
    assert data["area"] == 40
    assert data["mesh"] <= 16


def test_fill_polygon_file(tmp_path, capsys):
    payload = {
        "kind": "bigon",
        "corners": [[0, 0], [12, 1]],
        "flavors": ["a", "a"],
        "exponents": [12, -12],
        "D": 3,
        "subdivision": [6, 6],
    }
    path = tmp_path / "bigon.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run_cli(capsys, "fill", "bigon", "--L", "6", "--input", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["trivial"] is True
    assert data["area"] <= 2
    assert data["subdivisions"] == [[-6, -6]]


def test_central_from_file(tmp_path, capsys):
    tree = {
        "nodes": [
            {"id": "a", "arcs": [10]},
            {"id": "b", "arcs": [2]},
            {"id": "c", "arcs": [10]},
        ],
        "edges": [["a", "b", 0], ["b", "c", 0]],
    }
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(tree))
    code, out, _ = run_cli(capsys, "central", "--L", "6", "--input", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "vertex" and data["node"] == "b"
    assert data["f"] == [-1, 1]


def test_central_snowflake(capsys):
    code, out, _ = run_cli(capsys, "central", "--L", "6", "--p", "3")
    assert code == 0
    data = json.loads(out)
    assert data["node"] == "center"


def test_area_budget(capsys):
    code, out, _ = run_cli(
        capsys, "area-budget", "--central", "10", "--enfilade", "3", "--branching", "4", "--shells", "5"
    )
    assert code == 0 and out.strip() == "1006"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["dist", "--L", "6"])  # neither --a-power nor --h
    assert info.value.code == 2


def test_value_error_becomes_exit_2(capsys):
    code, _, err = run_cli(capsys, "dist", "--L", "5", "--a-power", "1")
    assert code == 2
    assert "even" in err


def test_determinism(capsys):
    outs = set()
    for _ in range(2):
        _, out, _ = run_cli(capsys, "--format", "json", "mn", "--L", "6", "--n-max", "5")
        outs.add(out)
    assert len(outs) == 1


def test_console_script_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "snowflake_groups.cli", "dist", "--L", "6", "--a-power", "11"],
        capture_output=True,
        text=True,
        env={"PYTHONPATH": "src", "PATH": "/usr/bin:/bin"},
        cwd=".",
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "9"
