"""CLI subcommands: config handling, outputs, determinism, exit codes."""

from __future__ import annotations

import json
import math

import pytest

from cubicbif import parse_config
from cubicbif.cli import main
from cubicbif.errors import ConfigError

from conftest import SQRT3


def field_config(**numerics) -> dict:
    num = {"h": 2.0 ** -6, "t_run": 1000.0, "t_eval": 125.0}
    num.update(numerics)
    return {
        "field": {
            "c": {"constant": 2.0,
                  "harmonics": [{"amp": 0.5, "freq": SQRT3, "kind": "sin"}]},
            "b": {"constant": 2.1,
                  "harmonics": [{"amp": 0.3, "freq": 1.0, "kind": "cos"}]},
            "ratio_s": 2.6,
        },
        "numerics": num,
    }


def autonomous_config() -> dict:
    return {
        "field": {"c": {"constant": 1.0}, "b": {"constant": 0.0},
                  "a": {"constant": -1.0}},
        "numerics": {"h": 2.0 ** -6, "t_run": 2000.0, "t_eval": 64.0,
                     "target_width": 1e-4},
    }


def pop_config() -> dict:
    return {
        "population": {
            "r": 1.0,
            "k": {"constant": 2.0,
                  "harmonics": [{"amp": 0.5, "freq": SQRT3, "kind": "sin"}]},
            "b": {"constant": 2.1,
                  "harmonics": [{"amp": 0.3, "freq": 1.0, "kind": "cos"}]},
            "s": 2.6, "x0": 0.9, "eps": 0.1, "horizon": 2000.0,
        },
        "numerics": {"t_run": 1000.0, "t_eval": 125.0},
    }


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_roundtrip_identity(tmp_path):
    for data in (field_config(), pop_config()):
        cfg = parse_config(data)
        again = parse_config(json.loads(cfg.dumps()))
        assert again == cfg
        assert again.dumps() == cfg.dumps()


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        parse_config({"numerics": {}})
    with pytest.raises(ConfigError):
        parse_config({"field": {"c": 1.0, "b": 0.0, "a": -1.0},
                      "population": {"k": 1.0, "b": 1.0, "s": 1.0}})
    with pytest.raises(ConfigError):
        parse_config({"field": {"c": 1.0, "b": 0.0}})  # no a / ratio_s
    with pytest.raises(ConfigError):
        parse_config({"field": {"c": 1.0, "b": 0.0, "a": -1.0},
                      "numerics": {"bogus": 1.0}})


def test_cli_bad_config_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["classify", "-c", str(path)]) == 2


def test_cli_classify(tmp_path, capsys):
    rc = main(["classify", "-c", write(tmp_path, field_config())])
    out = capsys.readouterr().out
    assert rc == 0
    assert "Case1_below" in out
    assert "frequencies" in out


def test_cli_scan_single_row_and_determinism(tmp_path):
    cfg = write(tmp_path, field_config())
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["scan", "-c", cfg, "--from", "0.1", "--to", "0.2",
                 "--steps", "1", "--out", str(out1)]) == 0
    rows = (out1 / "scan.csv").read_text().splitlines()
    assert len(rows) == 2  # header + one row
    assert rows[1].startswith("0.1,3,")
    assert (out1 / "scan.svg").exists()
    assert main(["scan", "-c", cfg, "--from", "0.1", "--to", "0.2",
                 "--steps", "1", "--out", str(out2)]) == 0
    assert (out1 / "scan.csv").read_bytes() == (out2 / "scan.csv").read_bytes()
    assert (out1 / "scan.svg").read_bytes() == (out2 / "scan.svg").read_bytes()


def test_cli_scan_mostly_failing_rows_exit_4(tmp_path):
    data = field_config()
    data["field"]["a"] = {"constant": 1.0}  # violates a < 0
    del data["field"]["ratio_s"]
    cfg = write(tmp_path, data)
    rc = main(["scan", "-c", cfg, "--from", "0.1", "--to", "0.2",
               "--steps", "2", "--out", str(tmp_path / "o")])
    assert rc == 4


def test_cli_bisect_autonomous(tmp_path, capsys):
    cfg = write(tmp_path, autonomous_config())
    rc = main(["bisect", "-c", cfg, "--eps-a", "0.1", "--eps-b", "0.2",
               "--out", str(tmp_path)])
    assert rc == 0
    body = (tmp_path / "bisect.csv").read_text().splitlines()[1].split(",")
    assert abs(float(body[3]) - 4.0 / 27.0) < 2e-3
    report = json.loads((tmp_path / "bisect.json").read_text())
    assert report["witness_lo"]["count"] == 3
    assert report["witness_hi"]["count"] == 1
    assert report["witness_lo"]["m0"] is not None
    assert main(["bisect", "-c", cfg, "--eps-a", "0.01", "--eps-b", "0.05",
                 "--out", str(tmp_path)]) == 3  # same predicate at both ends


def test_cli_bisect_flip(tmp_path, capsys):
    data = {
        "field": {"c": {"constant": 2.6},
                  "b": {"constant": 2.1,
                        "harmonics": [{"amp": 0.3, "freq": 1.0, "kind": "cos"}]},
                  "ratio_s": 2.6},
        "numerics": {"h": 2.0 ** -6, "t_run": 2000.0, "t_eval": 125.0,
                     "target_width": 1e-3},
    }
    cfg = write(tmp_path, data)
    rc = main(["bisect", "-c", cfg, "--flip", "--eps-a", "3.0", "--eps-b", "3.5",
               "--target-width", "1e-3", "--out", str(tmp_path)])
    assert rc == 0
    row = (tmp_path / "bisect.csv").read_text().splitlines()[1].split(",")
    assert row[0] == "constant_branch_lyapunov_sign"
    assert abs(float(row[3]) - 6.76 / 2.1) < 5e-3


def test_cli_lyap(tmp_path, capsys):
    data = {
        "field": {"c": {"constant": 2.6},
                  "b": {"constant": 2.1,
                        "harmonics": [{"amp": 0.3, "freq": 1.0, "kind": "cos"}]},
                  "ratio_s": 2.6},
        "numerics": {"h": 2.0 ** -6, "t_run": 1000.0, "t_eval": 125.0},
    }
    cfg = write(tmp_path, data)
    rc = main(["lyap", "-c", cfg, "--eps", "3.0", "--branch", "upper",
               "--tw", "200,20", "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "lyap.csv").read_text().splitlines()
    assert lines[0] == "T,tau,gamma_lo,gamma_hi"
    T, tau, lo, hi = (float(v) for v in lines[1].split(","))
    assert (T, tau) == (200.0, 20.0)
    assert lo <= hi < 0.0  # attractive below the flip


def test_cli_simulate(tmp_path, capsys):
    cfg = write(tmp_path, field_config())
    rc = main(["simulate", "-c", cfg, "--eps", "0.1", "--x0", "0.9",
               "--x0", "0", "--horizon", "50", "--out", str(tmp_path)])
    assert rc == 0
    table = (tmp_path / "simulate.csv").read_text().splitlines()
    assert len(table) == 3
    # x0 = 0 with eps > 0 declines immediately (crosses zero)
    row0 = table[2].split(",")
    assert row0[1] == "0" and row0[5] != ""
    traj = (tmp_path / "traj_eps0.1_x00.9.csv").read_text().splitlines()
    assert traj[0] == "t,x"
    assert len(traj) == 52


def test_cli_simulate_stays_on_constant_branch(tmp_path):
    data = {"field": {"c": {"constant": 1.0}, "b": {"constant": 0.0},
                      "a": {"constant": -1.0}},
            "numerics": {"h": 2.0 ** -6}}
    cfg = write(tmp_path, data)
    assert main(["simulate", "-c", cfg, "--eps", "0", "--x0", "1.0",
                 "--horizon", "100", "--out", str(tmp_path)]) == 0
    final = float((tmp_path / "simulate.csv").read_text()
                  .splitlines()[1].split(",")[3])
    assert final == 1.0  # x0 on the branch stays on it


def test_cli_population(tmp_path, capsys):
    cfg = write(tmp_path, pop_config())
    rc = main(["population", "-c", cfg, "--eps", "0.1", "--eps", "0.15",
               "--x0", "0.9", "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "population.csv").read_text().splitlines()
    assert lines[0] == "eps,x0,outcome,extinction_time,attained_level"
    assert lines[1].split(",")[2] == "survival"
    assert lines[2].split(",")[2] == "extinction"


def test_cli_population_needs_population_config(tmp_path):
    cfg = write(tmp_path, field_config())
    assert main(["population", "-c", cfg]) == 2


def test_cli_population_critical(tmp_path, capsys):
    cfg = write(tmp_path, pop_config())
    rc = main(["population", "-c", cfg, "--critical", "0.1", "0.15",
               "--x0", "0.9", "--out", str(tmp_path)])
    assert rc == 0
    row = (tmp_path / "critical.csv").read_text().splitlines()[1].split(",")
    assert 0.1 < float(row[3]) < 0.15


def test_cli_numeric_overrides(tmp_path, capsys):
    cfg = write(tmp_path, field_config())
    rc = main(["classify", "-c", cfg, "--h", "0.25", "--t-run", "500"])
    assert rc == 0


def test_fifteen_digit_formatting():
    from cubicbif.cli import fmt

    assert fmt(1.0 / 3.0) == "0.333333333333333"
    assert fmt(float("nan")) == ""
    assert fmt(None) == ""
    assert fmt(2.0) == "2"
