import json
import os
import subprocess
import sys

import pytest

BASE = ["python3", "-m", "htsim.cli"]


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    res = subprocess.run(BASE + args, capture_output=True, text=True, env=env)
    assert res.returncode == 0, res.stderr
    return res.stdout


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def test_run_flags_deterministic_across_workers(tmp_path):
    common = ["run-flags", "--model", "d4", "--L", "6", "--gamma-x", "8",
              "--gamma-z", "20", "--t-final", "4", "--trajectories", "6",
              "--seed", "3"]
    run_cli(common + ["--out", str(tmp_path / "a"), "--workers", "1"])
    run_cli(common + ["--out", str(tmp_path / "b"), "--workers", "2"])
    run_cli(common + ["--out", str(tmp_path / "c"), "--workers", "1"],
            env_extra={"HTSIM_WORKERS": "3"})
    a = read_bytes(tmp_path / "a" / "series.csv")
    assert a == read_bytes(tmp_path / "b" / "series.csv")
    assert a == read_bytes(tmp_path / "c" / "series.csv")


def test_manifest_cites_config_hash(tmp_path):
    out = tmp_path / "m"
    run_cli(["meanfield", "--grid-steps", "6", "--t-final", "50",
             "--out", str(out)])
    man = json.load(open(out / "manifest.json"))
    assert man["config_hash"]
    assert any(p.endswith("meanfield.csv") for p in man["outputs"])
    assert os.path.exists(out / "meanfield.csv")


def test_config_file_with_flag_override(tmp_path):
    conf = tmp_path / "conf.json"
    json.dump({"gamma_x": 8.0, "gamma_z": 20.0, "t_final": 3.0,
               "trajectories": 4, "L": 6, "model": "d4", "seed": 1},
              open(conf, "w"))
    out1 = tmp_path / "o1"
    run_cli(["run-flags", "--config", str(conf), "--out", str(out1)])
    out2 = tmp_path / "o2"
    run_cli(["run-flags", "--config", str(conf), "--seed", "2",
             "--out", str(out2)])
    assert os.path.exists(out1 / "series.csv")
    m1 = json.load(open(out1 / "manifest.json"))
    m2 = json.load(open(out2 / "manifest.json"))
    assert m1["config"]["gamma_x"] == 8.0
    assert m1["config"]["seed"] == 1 and m2["config"]["seed"] == 2


def test_geometry_dump(tmp_path):
    run_cli(["geometry-dump", "--L", "3", "--colors", "1",
             "--out", str(tmp_path)])
    data = json.load(open(tmp_path / "geometry_L3_c1.json"))
    assert data["n_edges"] == 9


def test_clusters_subcommand_small(tmp_path):
    out = tmp_path / "cl"
    run_cli(["clusters", "--L-list", "6", "9", "--gamma-x", "35",
             "--gamma-z", "500", "--t-final", "1", "--trajectories", "4",
             "--seed", "2", "--out", str(out)])
    from htsim.metrics import read_csv
    header, rows = read_csv(out / "clusters.csv")
    assert header[0] == "L" and len(rows) == 2
    assert os.path.exists(out / "fit.json")


def test_transition_subcommand_small(tmp_path):
    out = tmp_path / "t"
    run_cli(["transition", "--model", "toric", "--gx-list", "2",
             "--L-list", "6", "--threshold", "0.65", "--trajectories", "5",
             "--horizon", "400", "--eta", "1", "--out", str(out)])
    from htsim.metrics import read_csv
    header, rows = read_csv(out / "tau.csv")
    assert header[:2] == ["gx", "L"]
    assert len(rows) == 1
