import csv
import io
import json

import numpy as np
import pytest

from bcasc import cli, matrixfile
from bcasc.codes import SphericalCode

from conftest import basis


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "4", "--m", "16")
    d = json.loads(out)
    assert code == 0
    assert round(d["composite"], 4) == 0.4472 and d["regime"] == "WelchRegime"


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "2", "--m", "8", "--csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert code == 0
    assert round(float(rows["composite"]), 4) == 0.75 and rows["regime"] == "LargeM"


def test_bounds_needs_m_above_n(capsys):
    code, _, err = run(capsys, "bounds", "--n", "3", "--m", "3")
    assert code == 2 and "usage" in err


def test_bad_flags_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["bounds", "--n", "zero", "--m", "3"])
    assert exc.value.code == 2


def test_optimize_two_vectors(capsys, tmp_path):
    out_file = tmp_path / "a.bcasc.json"
    code, out, _ = run(capsys, "optimize", "--n", "2", "--m", "2", "--runs", "1", "--seed", "7", "--out", str(out_file))
    d = json.loads(out)
    assert code == 0 and d["best"] < 1e-6
    back, meta = matrixfile.read(out_file)
    assert meta["rng_seed"] == 7 and meta["coherence"] == d["best"]
    assert back.n == 2 and back.m == 2


def test_optimize_is_deterministic(capsys, tmp_path):
    args = ["optimize", "--n", "3", "--m", "5", "--runs", "2", "--seed", "3", "--i-max", "300", "--nu-max", "16"]
    a, b = tmp_path / "a.bcasc.json", tmp_path / "b.bcasc.json"
    run(capsys, *args, "--out", str(a))
    run(capsys, *args, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_optimize_report_and_modes(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, out, _ = run(
        capsys, "optimize", "--n", "3", "--m", "4", "--runs", "2", "--mode", "ksum", "--k", "5",
        "--i-max", "200", "--nu-max", "8", "--no-accel", "--report", str(rep),
    )
    d = json.loads(out)
    assert code == 0 and d["mode"] == "ksum(K=5)" and len(d["runs"]) == 2
    assert d["best"] <= d["mean"] <= d["worst"]
    assert json.loads(rep.read_text())["config"]["accel"]["enabled"] is False


def test_optimize_real_field(capsys):
    code, out, _ = run(capsys, "optimize", "--n", "3", "--m", "4", "--field", "real", "--runs", "1", "--i-max", "200", "--nu-max", "8")
    assert code == 0 and json.loads(out)["mode"] == "real"


def test_optimize_usage_errors(capsys):
    assert run(capsys, "optimize", "--n", "3", "--m", "4", "--alpha-init", "1.5")[0] == 2
    assert run(capsys, "optimize", "--n", "3", "--m", "4", "--field", "real", "--mode", "integral")[0] == 2


def test_optimize_all_runs_failed(capsys, monkeypatch):
    import bcasc.optimizer as opt

    coincident = SphericalCode(np.array([[1, 0, 1], [0, 1, 0]], dtype=complex))
    monkeypatch.setattr(opt, "random_seed_code", lambda *a: coincident)
    code, _, err = run(capsys, "optimize", "--n", "2", "--m", "3", "--runs", "2", "--mode", "plain", "--workers", "1")
    assert code == 1 and "all runs failed" in err


def test_analyze_basis(capsys, tmp_path):
    path = tmp_path / "b.bcasc.json"
    matrixfile.write(path, basis(3))
    code, out, _ = run(capsys, "analyze", str(path))
    d = json.loads(out)
    assert code == 0
    assert d["coherence"]["value"] == 0
    assert d["diagnostics"]["tight_residual"] == 0
    code, out, _ = run(capsys, "analyze", str(path), "--csv")
    assert code == 0 and out.startswith("key,value")


def test_analyze_rejects_bad_norm(capsys, tmp_path):
    path = tmp_path / "bad.bcasc.json"
    doc = json.loads(matrixfile.serialize(basis(2)))
    doc["columns"][1] = [[0.0, 0.0], [0.5, 0.0]]
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and "unit-norm violation at column 1" in err


def test_analyze_missing_file(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "none.json"))[0] == 2


def test_reproduce_unknown_target(capsys):
    assert run(capsys, "reproduce", "--target", "table9")[0] == 2


def test_reproduce_job_grids():
    ref = cli.load_reference()
    assert len(cli.repro_jobs("table2", "full", ref)) == 14
    fig4 = cli.repro_jobs("fig4", "quick", ref)
    assert {(j.n, j.m) for j in fig4} == {(2, 8), (4, 16)}
    assert sorted(j.k for j in fig4 if j.n == 2 and j.method == "ksum") == list(range(1, 25))
    assert [j.published for j in fig4 if j.n == 2 and j.k == 1] == [1.0]
    assert len(cli.repro_jobs("fig2", "quick", ref)) == 30
    assert len(cli.repro_jobs("table3", "full", ref)) == 8


def test_reproduce_table1_quick_marks_budget(capsys, tmp_path, monkeypatch):
    # only the header and the skipped row matter here; keep the real runs tiny
    monkeypatch.setitem(cli.BUDGETS, "quick", dict(nu_max=4, i_max=20, runs=1))
    out = tmp_path / "t1.csv"
    code, _, _ = run(capsys, "reproduce", "--target", "table1", "--budget", "quick", "--out", str(out))
    rows = list(csv.DictReader(out.open()))
    assert code == 0
    assert list(rows[0]) == cli.REPRO_COLUMNS
    big = [r for r in rows if (r["n"], r["m"]) == ("4", "64")]
    assert big[0]["budget_limited"] == "true" and big[0]["coherence"] == ""
    assert big[0]["paper_coherence"] == "0.6869"
    small = [r for r in rows if r["budget_limited"] == "false"]
    assert len(small) == 3
    for r in small:
        assert float(r["coherence"]) >= float(r["bound"]) - 1e-9
        assert float(r["gap_to_paper"]) == pytest.approx(float(r["coherence"]) - float(r["paper_coherence"]))
