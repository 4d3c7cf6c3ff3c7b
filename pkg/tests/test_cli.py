import csv
import io
import json

import pytest

from rauzylab import perm
from rauzylab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_diagram_dot(capsys):
    code, out, _ = run(capsys, "diagram", "--perm", "1234|4321", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    lines = [l for l in out.splitlines() if "->" in l]
    sources = [l.split("->")[0].strip() for l in lines]
    assert all(sources.count(s) == 2 for s in sources)


def test_diagram_m2(capsys):
    code, out, _ = run(capsys, "diagram", "--perm", "12|21", "--format", "json")
    d = json.loads(out)
    assert code == 0 and len(d["vertices"]) == 1 and len(d["edges"]) == 2


def test_diagram_reducible(capsys):
    code, out, err = run(capsys, "diagram", "--perm", "1234|1234")
    assert code == 2 and err.startswith("error:") and out == ""


def test_cn(capsys):
    code, out, _ = run(capsys, "cn", "--n", "1")
    d = json.loads(out)
    assert code == 0 and d["det_C"] == 1
    assert d["C"] == [["1", "1", "1", "1"], ["2", "8", "6", "1"], ["2", "6", "5", "0"], ["2", "5", "4", "2"]]
    assert len(d["word"]) == 12


def test_limit_widths_shrink(capsys):
    _, out20, _ = run(capsys, "limit", "--n", "20")
    _, out40, _ = run(capsys, "limit", "--n", "40")
    w20, w40 = json.loads(out20)["widths"], json.loads(out40)["widths"]
    assert all(b < a for a, b in zip(w20, w40))
    assert all("/" in lo for lo, _ in json.loads(out40)["intervals"])


def test_asymptotics_csv(capsys):
    code, out, _ = run(capsys, "asymptotics", "--max-n", "30")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 30
    vals = [float(r["n3_lam4h4"]) for r in rows[4:]]
    assert max(vals) < 2 * sorted(vals)[len(vals) // 2]


def test_cap(capsys, monkeypatch):
    code, _, err = run(capsys, "asymptotics", "--max-n", "500")
    assert code == 2 and "cap" in err
    monkeypatch.setenv("RAUZYLAB_MAXN", "10")
    code, _, _ = run(capsys, "cn", "--n", "11")
    assert code == 2


def test_trajectory_json_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "trajectory", "--max-n", "40", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["n0"] <= 10
    path = tmp_path / "traj.csv"
    code, _, _ = run(capsys, "trajectory", "--max-n", "40", "--samples", "50", "-o", str(path))
    rows = list(csv.DictReader(path.open()))
    assert code == 0 and len(rows) == 50
    assert set(rows[0]) == {"t", "bound", "activeN", "window_s", "window_t"}


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--n", "10", "--steps", "10000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["steps"] for r in rows] == ["10", "100", "1000", "10000"]
    assert float(rows[-1]["discrepancy"]) < float(rows[0]["discrepancy"])


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "1")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--suite", "hilbert", "--seed", "7")
    _, b, _ = run(capsys, "verify", "--suite", "hilbert", "--seed", "7")
    assert a == b


def test_verify_fault_injection(capsys):
    code, out, err = run(capsys, "verify", "--suite", "oracle", "--inject-fault", "op_a")
    assert code == 3 and not json.loads(out)["passed"] and err.startswith("error:")
    assert "op_a" not in perm._FAULTS


def test_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "nope")
    assert code == 2


def test_bad_arguments(capsys):
    assert run(capsys, "cn")[0] == 2
