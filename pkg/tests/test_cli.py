import csv
import io
import json

import pytest

from conftest import direct_solution
from tmbounds import cli, extremal
from tmbounds.bounds import BOUNDS_COLUMNS
from tmbounds.numerics import ConvergenceError


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = cli.main(list(argv) + ["--out", str(out)])
    return code, (out.read_bytes() if out.exists() else b"")


def test_constants_n4(tmp_path):
    code, data = run(tmp_path, "constants", "--n", "4")
    assert code == 0
    doc = json.loads(data)
    assert doc["upper_tm"] == 76 and doc["schema_version"] == 1


def test_constants_csv_and_n2(tmp_path):
    code, data = run(tmp_path, "constants", "--n", "2", "--format", "csv", "--alpha-ratio", "0.5")
    assert code == 0
    lines = data.decode().split("\n")
    assert b"\r" not in data
    assert lines[0].split(",") == BOUNDS_COLUMNS
    row = dict(zip(BOUNDS_COLUMNS, lines[1].split(",")))
    assert float(row["upper_tm"]) == 37 and float(row["thmB_factor"]) == pytest.approx(1.0)


@pytest.mark.parametrize("argv", [["constants", "--n", "2", "--beta", "3"],
                                  ["extremal", "--n", "1"],
                                  ["table", "--betas", ""],
                                  ["table", "--n-range", "x..y"],
                                  ["constants"],
                                  ["verify", "--chain", "nonsense"]])
def test_domain_and_config_errors(tmp_path, argv):
    code, _ = run(tmp_path, *argv)
    assert code == 2


def test_byte_identical_reruns(tmp_path):
    a = run(tmp_path, "table", "--n-range", "2..5", "--betas", "0,1", "--alpha-ratios", "0.9",
            "--format", "csv", name="a")
    b = run(tmp_path, "table", "--n-range", "2..5", "--betas", "0,1", "--alpha-ratios", "0.9",
            "--format", "csv", "--workers", "3", name="b")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
    c = run(tmp_path, "constants", "--n", "3", "--beta", "1", name="c")
    d = run(tmp_path, "constants", "--n", "3", "--beta", "1", name="d")
    assert c == d


def test_table_rows(tmp_path):
    code, data = run(tmp_path, "table", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(data.decode())))
    assert [int(r["n"]) for r in rows] == [2, 3, 4, 5, 6]
    upper = [float(r["upper_tm"]) for r in rows]
    assert upper == sorted(upper)


def test_table_partial_failure(tmp_path):
    code, data = run(tmp_path, "table", "--n-range", "2..3", "--betas", "0,2.5", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(data.decode())))
    # rows ordered (2,0) (2,2.5) (3,0) (3,2.5); beta >= n fails only for n = 2
    status = [r["status"] for r in rows]
    assert status[0] == "ok" and status[1].startswith("domain error") and status[2:] == ["ok", "ok"]
    code, _ = run(tmp_path, "table", "--n-range", "2", "--betas", "5")
    assert code == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# constants run\nn = 4\nbeta=1\nformat = csv\n")
    code, data = run(tmp_path, "constants", "--config", str(cfg))
    assert code == 0 and data.startswith(b"n,beta")
    row = data.decode().split("\n")[1].split(",")
    assert float(row[1]) == 1.0
    # flags override the file
    code, data = run(tmp_path, "constants", "--config", str(cfg), "--beta", "2", "--format", "json")
    assert code == 0 and json.loads(data)["beta"] == 2.0
    cfg.write_text("colour = blue\n")
    assert run(tmp_path, "constants", "--n", "2", "--config", str(cfg))[0] == 2
    cfg.write_text("format = xml\n")
    assert run(tmp_path, "constants", "--n", "2", "--config", str(cfg))[0] == 2


def test_verify_inequalities(tmp_path):
    code, data = run(tmp_path, "verify", "--chain", "inequalities", "--samples", "500")
    assert code == 0
    doc = json.loads(data)
    assert doc["all_hold"] and doc["summary"]["as_printed_counterexample"]["lhs"] == 4.0


@pytest.mark.parametrize("chain", ["split-sub", "split-crit"])
def test_verify_split(tmp_path, chain):
    code, data = run(tmp_path, "verify", "--chain", chain, "--n", "2")
    assert code == 0 and json.loads(data)["all_hold"]


def _solution_file(tmp_path, sol, **changes):
    doc = {**sol.to_json(), **changes}
    path = tmp_path / "sol.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_verify_with_solution_file(tmp_path):
    sol = direct_solution(2, 1.0)
    path = _solution_file(tmp_path, sol)
    code, data = run(tmp_path, "verify", "--chain", "singular", "--n", "2", "--beta", "1",
                     "--solution", path)
    assert code == 0
    doc = json.loads(data)
    assert doc["summary"]["delta_margin"] == pytest.approx(0.0023202, abs=1e-7)
    code, _ = run(tmp_path, "verify", "--chain", "lemmas", "--solution", path)
    assert code == 0


def test_verify_failure_exit_4(tmp_path, capsys):
    sol = direct_solution(2)
    path = _solution_file(tmp_path, sol, S_value=sol.S_value * 1.01)
    code, data = run(tmp_path, "verify", "--chain", "lemmas", "--solution", path)
    assert code == 4
    assert "multiplier_identity" in capsys.readouterr().err
    assert not json.loads(data)["all_hold"]


def test_extremal_nonconvergence_exit_3(tmp_path, monkeypatch):
    best = direct_solution(2)

    def fail(*a, **k):
        raise ConvergenceError("stalled", best=best)

    monkeypatch.setattr(extremal, "solve_extremal", fail)
    code, data = run(tmp_path, "extremal", "--n", "2")
    assert code == 3
    assert json.loads(data)["S_value"] == best.S_value


def test_extremal_direct_json(tmp_path):
    code, data = run(tmp_path, "extremal", "--n", "2", "--method", "direct", "--cells", "200")
    assert code == 0
    doc = json.loads(data)
    assert doc["schema_version"] == 1 and doc["method"] == "direct"
    assert 4.3 < doc["S_value"] < 4.45
