import csv
import io
import json
import subprocess
import sys

import pytest

from ia_dof.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--K", "3", "--N", "2", "--M", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["ub"] == "3/2" and rep["T"] == 3
    assert rep["marker"] == "□"


def test_bound_nonuniform(capsys):
    code, out, _ = run(capsys, "bound", "--K", "3", "--N", "2", "--tx", "2,1,1", "--rx", "2,1,1")
    assert code == 0 and json.loads(out)["marker"] is None


def test_table_csv_and_text(capsys):
    code, out, _ = run(capsys, "table")
    rows = _rows(out)
    assert code == 0 and len(rows) == 8 * 7
    assert rows[0]["marker"] == "□" and rows[0]["build"].startswith("ia_dof-")
    code, out, _ = run(capsys, "table", "--format", "text")
    assert "×" in out and "■" in out


def test_gen_writes_dump(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--K", "4", "--N", "2", "--M", "2", "--seed", "3",
                       "--out", str(tmp_path / "ch"))
    assert code == 0
    assert (tmp_path / "ch.bin").stat().st_size == 8 * 2 * 4 * 3 * 4
    assert json.loads(out)["seed"] == 3


def test_scheme_rows(capsys):
    code, out, _ = run(capsys, "scheme", "--K", "4", "--N", "2", "--M", "2",
                       "--trials", "50", "--seed", "7")
    rows = _rows(out)
    assert code == 0 and len(rows) == 50
    assert out.endswith("\r\n")
    assert all(r["decodable"] == "true" for r in rows)
    assert [int(r["trial"]) for r in rows] == list(range(50))


def test_scheme_failure_exit_code(capsys):
    # odd user count with the two-slot variant cannot be decoded
    code, _, err = run(capsys, "scheme", "--K", "3", "--N", "2", "--M", "1",
                       "--variant", "odd_M_two_slot", "--trials", "2")
    assert code == 1 and err.startswith("FAIL")


def test_dump_then_verify(capsys, tmp_path):
    stem = tmp_path / "run"
    code, _, _ = run(capsys, "scheme", "--K", "5", "--N", "2", "--M", "2", "--trials", "1",
                     "--dump", str(stem))
    assert code == 0
    code, out, _ = run(capsys, "verify", "--channel", str(tmp_path / "run.channel"),
                       "--scheme-file", str(tmp_path / "run.scheme.json"),
                       "--gnuplot", str(tmp_path / "rate.dat"))
    rep = json.loads(out)
    assert code == 0 and all(rep["decodable"])
    assert rep["slope"] == pytest.approx(5.0, rel=0.05)
    assert len((tmp_path / "rate.dat").read_text().splitlines()) == 18


def test_sweep_and_table1(capsys):
    code, out, _ = run(capsys, "sweep", "--Ks", "3,4", "--Ns", "1,2", "--Ms", "2",
                       "--schemes", "auto,TDM", "--trials", "2")
    assert code == 0 and len(_rows(out)) == 2 * 2 * 2 * 2
    code, out, _ = run(capsys, "table1", "--Ks", "4", "--Ms", "2", "--Ns", "2", "--trials", "2")
    rows = _rows(out)
    assert code == 0 and {r["status"] for r in rows} == {"PASS"}


def test_infeasible(capsys):
    code, out, _ = run(capsys, "infeasible", "--K", "5", "--M", "2", "--trials", "5")
    rep = json.loads(out)
    assert code == 0 and rep["min_cross_angle"] > 1e-3 and len(rep["per_trial"]) == 5


def test_invalid_config_exit_code(capsys, tmp_path):
    assert run(capsys, "bound", "--K", "3", "--N", "3")[0] == 2
    assert run(capsys, "scheme", "--K", "6", "--N", "3", "--trials", "1")[0] == 2
    assert run(capsys, "scheme", "--snr-lo", "10")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nope": 1}))
    assert run(capsys, "bound", "--config", str(bad))[0] == 2
    assert run(capsys, "verify")[0] == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"K": 5, "N": 3, "M": 2}))
    out = json.loads(run(capsys, "bound", "--config", str(cfg))[1])
    assert out["K"] == 5 and out["N"] == 3
    out = json.loads(run(capsys, "bound", "--config", str(cfg), "--K", "6")[1])
    assert out["K"] == 6


def test_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("IA_DOF_SEED", "42")
    assert json.loads(run(capsys, "gen", "--K", "3", "--N", "1", "--M", "1")[1])["seed"] == 42
    assert json.loads(run(capsys, "gen", "--K", "3", "--N", "1", "--M", "1",
                          "--seed", "1")[1])["seed"] == 1
    monkeypatch.setenv("IA_DOF_SEED", "x")
    assert run(capsys, "gen")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ia_dof", "bound", "--K", "4", "--N", "1",
                           "--M", "1"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["ub"] == "8/3"
