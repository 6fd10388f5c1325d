import json
import os
import subprocess
import sys

import pytest

from awlab import cli

RUN = [sys.executable, "-m", "awlab.cli"]


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(RUN + args, capture_output=True, text=True,
                          env=env)


def test_verify_pass_exit_zero(tmp_path):
    out = tmp_path / "rep.json"
    r = run_cli(["verify", "aw3", "--q", "0.7", "--N", "3",
                 "--out", str(out)])
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert doc["meta"]["q"] == 0.7
    assert all(c["pass"] for c in doc["checks"])
    assert any(c["check_id"] == "aw3_relations" for c in doc["checks"])


def test_invalid_q_exit_two():
    r = run_cli(["verify", "aw3", "--q", "1.2"])
    assert r.returncode == 2
    assert "q must satisfy" in r.stderr


def test_corrupt_flag_exit_one(tmp_path):
    out = tmp_path / "rep.json"
    r = run_cli(["verify", "rank2", "--corrupt", "--out", str(out)])
    assert r.returncode == 1
    doc = json.loads(out.read_text())
    failing = [c["check_id"] for c in doc["checks"] if not c["pass"]]
    assert failing  # the failing checks are named in the report
    assert any(c.startswith("rank2_rel") for c in failing)


def test_warning_checks_never_flip_exit_code(tmp_path):
    out = tmp_path / "rep.json"
    r = run_cli(["verify", "aw3", "--out", str(out)])
    assert r.returncode == 0
    doc = json.loads(out.read_text())
    warnings = [c for c in doc["checks"] if c["warning"]]
    assert warnings
    # warning-class entries carry pass=true even above tolerance
    assert all(c["pass"] for c in warnings)
    assert any(c["residual"] > c["tolerance"] for c in warnings)


def test_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(["verify", "uq", "--out", str(a)]).returncode == 0
    assert run_cli(["verify", "uq", "--out", str(b)]).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfgf = tmp_path / "run.cfg"
    cfgf.write_text("q = 0.5\nN = 2\n# comment line\nalpha0 = 0.4\n")
    out = tmp_path / "rep.json"
    r = run_cli(["verify", "aw3", "--config", str(cfgf), "--q", "0.8",
                 "--out", str(out)])
    assert r.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["q"] == 0.8  # flag wins
    assert doc["meta"]["N"] == 2    # config applies


def test_unknown_config_key_rejected(tmp_path):
    cfgf = tmp_path / "run.cfg"
    cfgf.write_text("qq = 0.5\n")
    r = run_cli(["verify", "aw3", "--config", str(cfgf)])
    assert r.returncode == 2
    assert "unknown key" in r.stderr


def test_env_precision_override(tmp_path):
    out = tmp_path / "rep.json"
    r = run_cli(["verify", "aw3", "--N", "2", "--out", str(out)],
                env_extra={"AWLAB_PRECISION": "extended"})
    assert r.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["precision"] == "extended"


def test_tables_qracah(tmp_path):
    base = tmp_path / "t"
    r = run_cli(["tables", "qracah", "--N", "3", "--out", str(base)])
    assert r.returncode == 0
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0].startswith("#")
    first_row = lines[2].split(",")
    assert first_row[0] == "0"
    assert all(float(v) == 1.0 for v in first_row[1:])
    doc = json.loads((tmp_path / "t.json").read_text())
    assert len(doc["values"]) == 4
    assert all(row[0] == 1.0 for row in doc["values"])


def test_tables_stencil(tmp_path):
    base = tmp_path / "s"
    r = run_cli(["tables", "stencil", "--N1", "2", "--N2", "2",
                 "--out", str(base)])
    assert r.returncode == 0
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert len(lines) == 2 + 9  # comment + header + one line per state
    assert len(lines[2].split(",")) == 2 + 9


def test_tables_bivariate_roundtrip(tmp_path):
    base = tmp_path / "b"
    r = run_cli(["tables", "bivariate", "--N1", "2", "--N2", "2",
                 "--out", str(base)])
    assert r.returncode == 0
    text1 = (tmp_path / "b.json").read_text()
    doc = json.loads(text1)
    # 17-significant-digit floats round-trip exactly through json
    from awlab.report import dump_json
    entries = doc["entries"]
    for e in entries[:5]:
        assert float(format(e["value"], ".17g")) == e["value"]
    assert len(entries) == 81


def test_sweep_deterministic_and_aggregated(tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text("q = 0.6, 0.7\nN = 2, 3\n")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r1 = run_cli(["sweep", "--grid", str(grid), "--out", str(a)])
    r2 = run_cli(["sweep", "--grid", str(grid), "--out", str(b)])
    assert r1.returncode == 0 and r2.returncode == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["meta"]["points"] == 4
    assert len(doc["runs"]) == 4
    assert "aw3_relations" in doc["aggregate"]


def test_sweep_invalid_point_marked(tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text("q = 0.7, 1.5\n")
    out = tmp_path / "a.json"
    r = run_cli(["sweep", "--grid", str(grid), "--out", str(out)])
    assert r.returncode == 1
    doc = json.loads(out.read_text())
    errs = [run for run in doc["runs"] if "error" in run]
    oks = [run for run in doc["runs"] if "checks" in run]
    assert len(errs) == 1 and len(oks) == 1


def test_dump_json_float_format():
    from awlab.report import dump_json
    s = dump_json({"x": 0.1, "flag": True, "none": None})
    assert s == '{"x":0.10000000000000001,"flag":true,"none":null}'
