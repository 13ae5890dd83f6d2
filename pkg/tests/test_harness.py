import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from speclag.errors import ConfigError
from speclag.families import lawlor_r
from speclag.harness import (
    build_family,
    dump_report,
    export_pointcloud,
    parse_config,
    run_checks,
    sample_plan,
)


def cfg(**overrides):
    base = {"family": {"kind": "lawlor", "a": [1, 1], "psi": [0, 0]}, "samples": {"seed": 0, "sigma_count": 20, "s_count": 11}}
    base.update(overrides)
    return json.dumps(base)


def test_parse_valid_with_defaults():
    c = parse_config(json.dumps({"family": {"kind": "lawlor", "a": [1, 1], "psi": [0, 0]}, "samples": {"seed": 1}}))
    assert c.samples["s_range"] == [-2.0, 2.0]
    assert c.samples["s_count"] == 41 and c.samples["sigma_count"] == 200
    assert c.tolerances["lagrangian"] == 1e-9
    assert "lagrangian_fs" in c.checks


@pytest.mark.parametrize(
    "family,path",
    [
        ({"kind": "lawlor", "a": [1, -1]}, "family.a[1]"),
        ({"kind": "exponential", "lambda": [1, -0.5], "C": 1}, "family.lambda[1]"),
        ({"kind": "exponential", "lambda": [1, 1], "C": 0}, "family.C"),
        ({"kind": "lawlor", "a": [1, 1], "psi": [0]}, "family.psi"),
        ({"kind": "torus"}, "family.kind"),
        ({"kind": "lawlor", "a": [1, 1], "b": 2}, "family.b"),
    ],
)
def test_parse_rejections(family, path):
    with pytest.raises(ConfigError) as exc:
        parse_config(cfg(family=family))
    assert exc.value.path == path
    assert path in str(exc.value)


def test_parse_other_errors():
    with pytest.raises(ConfigError, match="samples.seed"):
        parse_config(json.dumps({"family": {"kind": "lawlor", "a": [1, 1]}}))
    with pytest.raises(ConfigError, match="invalid JSON"):
        parse_config("{not json")
    with pytest.raises(ConfigError, match="extra"):
        parse_config(cfg(extra=1))
    with pytest.raises(ConfigError, match=r"checks\[0\]"):
        parse_config(cfg(checks=["nope"]))
    with pytest.raises(ConfigError, match="tolerances.lagrangian"):
        parse_config(cfg(tolerances={"lagrangian": -1}))


def test_run_checks_pass_and_deterministic():
    c = parse_config(cfg())
    a, b = run_checks(c), run_checks(parse_config(cfg()))
    assert a["overall_pass"]
    a.pop("wall_time"), b.pop("wall_time")
    assert dump_report(a) == dump_report(b)


def test_run_checks_reproducible_from_echoed_config():
    first = run_checks(parse_config(cfg(family={"kind": "lawlor", "a": [1, 1.5], "psi": [0.1, 0.0]})))
    again = run_checks(parse_config(json.dumps(first["config"])))
    assert first["checks"] == again["checks"]
    assert not first["overall_pass"]


def test_meancurv_n3_recorded_other_checks_run():
    c = parse_config(cfg(family={"kind": "lawlor", "a": [1, 1, 1]}, checks=["lagrangian_st", "meancurv", "lagrangian_fs"]))
    rep = run_checks(c)
    by_name = {r["check"]: r for r in rep["checks"]}
    assert "n = 2" in by_name["meancurv"]["error"]
    assert by_name["lagrangian_st"]["pass"] and by_name["lagrangian_fs"]["pass"]
    assert not rep["overall_pass"]


def test_mixed_signature_points():
    pts = [[np.sqrt(2 + 5 * t * t), t] for t in (-0.5, 0.0, 0.5)]
    c = parse_config(cfg(family={"kind": "exponential", "lambda": [1, -5], "C": 2}, samples={"seed": 0, "points": pts}, checks=["lagrangian_fs", "angle", "det_identity"]))
    rep = run_checks(c)
    assert rep["overall_pass"], rep["checks"]


def test_sampling_error_recorded():
    c = parse_config(cfg(family={"kind": "exponential", "lambda": [1, -5], "C": 2}))
    rep = run_checks(c)
    assert all("error" in r for r in rep["checks"])
    assert not rep["overall_pass"]


def test_export_pointcloud(tmp_path):
    c = parse_config(cfg(samples={"seed": 3, "sigma_count": 10, "s_count": 10}))
    fam = build_family(c.family)
    path = tmp_path / "cloud.csv"
    export_pointcloud(fam, sample_plan(c, fam), path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x1", "x2", "s", "re_z1", "im_z1", "re_z2", "im_z2"]
    data = np.array(rows[1:], dtype=float)
    assert data.shape == (100, 7)
    z = data[:, 3::2] + 1j * data[:, 4::2]
    assert np.allclose(np.abs(z), np.abs(data[:, :2]) * lawlor_r(fam.a, data[:, 2:3]), rtol=1e-12, atol=0)
    again = tmp_path / "again.csv"
    export_pointcloud(fam, sample_plan(c, fam), again)
    assert path.read_bytes() == again.read_bytes()


def test_export_unwritable(tmp_path):
    c = parse_config(cfg())
    fam = build_family(c.family)
    with pytest.raises(OSError):
        export_pointcloud(fam, sample_plan(c, fam), tmp_path / "missing" / "x.csv")


# -- command line --------------------------------------------------------------


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "speclag", *args], capture_output=True, text=True)


def write(tmp_path, text, name="c.json"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_cli_verify_exit_codes(tmp_path):
    good = write(tmp_path, cfg())
    out = tmp_path / "r.json"
    proc = run_cli("verify", "--config", good, "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["overall_pass"]

    failing = write(tmp_path, cfg(family={"kind": "lawlor", "a": [1, 2]}), "f.json")
    assert run_cli("verify", "--config", failing).returncode == 1

    bad = write(tmp_path, cfg(family={"kind": "lawlor", "a": [1, -1]}), "b.json")
    proc = run_cli("verify", "--config", bad)
    assert proc.returncode == 2 and "a[1]" in proc.stderr
    assert run_cli("verify").returncode == 2
    assert run_cli("verify", "--config", str(tmp_path / "nope.json")).returncode == 2


def test_cli_overrides(tmp_path):
    path = write(tmp_path, cfg(family={"kind": "lawlor", "a": [1, 1.001]}))
    assert run_cli("verify", "--config", path).returncode == 1
    proc = run_cli("verify", "--config", path, "--tol", "lagrangian=1", "--tol", "condition=1", "--seed", "7")
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["config"]["samples"]["seed"] == 7 and rep["config"]["tolerances"]["lagrangian"] == 1
    assert run_cli("verify", "--config", path, "--tol", "bogus=1").returncode == 2


def test_cli_sweep():
    proc = run_cli("sweep", "--n", "2", "--grid", "1,1;1,1.5;1,2;2,2", "--sigma-count", "30")
    assert proc.returncode == 0, proc.stderr
    rows = json.loads(proc.stdout)["rows"]
    assert [r["fs_class"] for r in rows] == ["pass", "fail", "fail", "pass"]
    assert run_cli("sweep", "--n", "3", "--grid", "1,1").returncode == 2


def test_cli_angle(tmp_path):
    proc = run_cli("angle", "--config", write(tmp_path, cfg()))
    assert proc.returncode == 0
    trace = json.loads(proc.stdout)
    assert len(trace["theta"]) == 20 * 11
    assert abs(np.cos(trace["fitted_phase"])) < 1e-8


def test_cli_meancurv(tmp_path):
    path = write(tmp_path, cfg(meancurv={"metric": "flat"}))
    proc = run_cli("meancurv", "--config", path, "--levels", "16,32,64")
    assert proc.returncode == 0, proc.stdout
    levels = json.loads(proc.stdout)["levels"]
    assert len(levels) == 3 and levels[0]["observed_order"] is None
    path = write(tmp_path, cfg(family={"kind": "lawlor", "a": [1, 1, 1]}), "n3.json")
    assert run_cli("meancurv", "--config", path, "--levels", "16,32,64").returncode == 1


def test_cli_sample(tmp_path):
    path = write(tmp_path, cfg(samples={"seed": 1, "sigma_count": 10, "s_count": 10}))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("sample", "--config", path, "--csv", str(a)).returncode == 0
    assert run_cli("sample", "--config", path, "--csv", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 101
