import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from noninertial.cli import main
from noninertial.sweep import SweepConfig, load_state, rows_to_csv, run_sweep


def _cli(*args, env=None):
    full_env = dict(os.environ)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "noninertial.cli", *args],
                          capture_output=True, text=True, env=full_env)


def test_sweep_csv_columns_and_format(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--r-count", "3", "--r-max", "1", "--measures",
                 "negativity,purity", "--output", str(out)]) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["r", "omega", "K", "tail", "trace_deficit", "negativity", "purity"]
    assert rows[1][:3] == ["0", "", "0"]
    assert rows[2][0] == "0.5"


def test_sweep_r_zero_gives_inertial_values():
    rows = run_sweep(SweepConfig(r_count=1, r_min=0.0, r_max=0.0,
                                 measures=["negativity", "l1_coherence"]))
    assert rows[0]["negativity"] == 0.5
    assert rows[0]["l1_coherence"] == 1.0


def test_omega_grid_and_json(tmp_path):
    out = tmp_path / "s.json"
    assert main(["sweep", "--omega-grid", "0.5,1", "--format", "json", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"config", "rows", "versions", "seed"}
    assert doc["rows"][1]["omega"] == 1.0
    assert doc["rows"][1]["r"] == pytest.approx(0.04324084828357137)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"state": "ghz3", "r_count": 2, "measures": ["l1_coherence"]}))
    out = tmp_path / "s.csv"
    assert main(["sweep", "--config", str(cfg), "--r-count", "3", "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert main(["sweep", "--config", str(bad)]) == 1


def test_jobs_do_not_change_output():
    cfg = SweepConfig(r_count=4, measures=["negativity"])
    serial = rows_to_csv(run_sweep(cfg), cfg.measures)
    cfg.jobs = 2
    assert rows_to_csv(run_sweep(cfg), cfg.measures) == serial


def test_custom_matrix_file(tmp_path):
    path = tmp_path / "rho.npy"
    np.save(path, np.eye(4) / 4)
    assert load_state(str(path)).dims == (2, 2)
    bad = tmp_path / "bad.npy"
    np.save(bad, np.eye(3))
    with pytest.raises(ValueError):
        load_state(str(bad))


@pytest.mark.parametrize("args", [
    ["sweep", "--r-max", "3"], ["sweep", "--epsilon", "1e-3"], ["sweep", "--r-count", "0"],
    ["sweep", "--state", "nope"], ["sweep", "--measures", "nope"], ["sweep", "--bogus"],
    ["sweep", "--output", "/nonexistent/dir/x.csv"], ["frobnicate"]])
def test_usage_errors_exit_one(args):
    with pytest.raises(SystemExit) as exc:
        code = main(args)
        raise SystemExit(code)
    assert exc.value.code == 1


def test_budget_exit_three():
    assert main(["ahn", "--r-grid", "2.5"]) == 3


def test_output_dir_environment(tmp_path):
    res = _cli("sweep", "--r-count", "2", env={"NONINERTIAL_OUTPUT_DIR": str(tmp_path)})
    assert res.returncode == 0
    assert (tmp_path / "sweep.csv").exists()
    assert res.stdout == ""


def test_verify_fault_injection_exit_code():
    res = _cli("verify", "--samples", "5", "--inject-fault", "0")
    assert res.returncode == 2
    assert "failed: cptp" in res.stdout


def test_verify_json_summary(tmp_path):
    out = tmp_path / "v.json"
    res = _cli("verify", "--samples", "5", "--output", str(out))
    assert res.returncode == 0, res.stdout
    doc = json.loads(out.read_text())
    hs = [r for r in doc["reports"] if r["property"] == "contraction[hilbert-schmidt]"]
    assert hs and hs[0]["assertable"] is False
    assert doc["failed"] == []


def test_oracle_and_info(capsys):
    assert main(["oracle", "--accelerated", "0,1", "--r", "0.3,0.7", "--samples", "3"]) == 0
    assert main(["info"]) == 0
    out = capsys.readouterr().out
    assert "bell-phi-plus" in out and "negativity" in out


def test_ahn_table(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["ahn", "--r-grid", "0,0.881374", "--output", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert rows[2]["verdict"] == "not trace preserving"
    assert float(rows[2]["ahn_trace"]) == pytest.approx(1.25, abs=1e-6)
