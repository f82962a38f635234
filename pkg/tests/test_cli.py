import json
import subprocess
import sys
from pathlib import Path

import pytest

from slsim.cli import build_parser, main, read_config, resolve

FIXTURE = Path(__file__).parent / "data" / "fixture60.txt"
BA = "synthetic:ba,n=200,m=4"


def test_run_writes_one_row_per_step(tmp_path):
    assert main(["run", "--graph", BA, "--seed", "1", "--steps", "20", "--out-dir", str(tmp_path)]) == 0
    lines = (tmp_path / "metrics.csv").read_text().splitlines()
    assert lines[0] == "t,mean_b,mean_d,mean_u,frac_S,frac_I,frac_R"
    assert len(lines) == 21
    assert len((tmp_path / "snapshot.csv").read_text().splitlines()) == 201
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["seed"] == 1 and manifest["config"]["steps"] == 20
    assert manifest["graph"]["source"].startswith("synthetic:ba,n=200,m=4")


def test_run_byte_identical(tmp_path):
    args = ["run", "--graph", BA, "--seed", "1", "--steps", "20"]
    main(args + ["--out-dir", str(tmp_path / "a")])
    main(args + ["--out-dir", str(tmp_path / "b")])
    for name in ("metrics.csv", "snapshot.csv", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_missing_graph(tmp_path, capsys):
    assert main(["run", "--graph", "missing.txt", "--out-dir", str(tmp_path)]) != 0
    err = capsys.readouterr().err
    assert "missing.txt" in err and "parse" in err


def test_run_with_evidence_file(tmp_path):
    ev = tmp_path / "ev.txt"
    ev.write_text("# pv=2 pn=0 cv=1 cn=0\nPV\nCV\nPV\n")
    out = tmp_path / "out"
    assert main(["run", "--graph", str(FIXTURE), "--evidence", str(ev), "--steps", "3", "--out-dir", str(out)]) == 0
    assert json.loads((out / "manifest.json").read_text())["evidence"] == str(ev)


def test_bad_config_value_names_stage(tmp_path, capsys):
    assert main(["run", "--graph", BA, "--gamma", "2", "--out-dir", str(tmp_path)]) != 0
    assert "config" in capsys.readouterr().err


def test_sweep_preset_cell_count(tmp_path):
    args = ["sweep", "--preset", "tc-under-cv", "--desk-scale", "--graph", "synthetic:ba,n=30,m=2",
            "--steps", "3", "--replications", "2", "--out-dir", str(tmp_path)]
    assert main(args) == 0
    lines = (tmp_path / "tc-under-cv.csv").read_text().splitlines()
    assert len(lines) == 36
    manifest = json.loads((tmp_path / "tc-under-cv.manifest.json").read_text())
    assert manifest["spec"]["replications"] == 2
    assert len(manifest["cells"]) == 35


def test_sweep_parallel_identical(tmp_path):
    common = ["sweep", "--preset", "valuable-sweep", "--graph", "synthetic:ba,n=30,m=2",
              "--steps", "3", "--replications", "2"]
    main(common + ["--parallel", "1", "--out-dir", str(tmp_path / "p1")])
    main(common + ["--parallel", "4", "--out-dir", str(tmp_path / "p4")])
    assert (tmp_path / "p1" / "valuable-sweep.csv").read_bytes() == (tmp_path / "p4" / "valuable-sweep.csv").read_bytes()


def test_sweep_unknown_preset_lists_names(tmp_path, capsys):
    assert main(["sweep", "--preset", "bogus", "--out-dir", str(tmp_path)]) != 0
    err = capsys.readouterr().err
    for name in ("valuable-sweep", "noisy-sweep", "tc-under-pv", "tc-under-cv"):
        assert name in err


def test_sweep_creates_output_dir(tmp_path):
    out = tmp_path / "deep" / "nested"
    args = ["sweep", "--preset", "noisy-sweep", "--graph", "synthetic:ba,n=20,m=2",
            "--steps", "2", "--replications", "1", "--out-dir", str(out)]
    assert main(args) == 0
    assert (out / "noisy-sweep.csv").is_file()


def test_sweep_uncreatable_output_dir(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    args = ["sweep", "--preset", "noisy-sweep", "--graph", "synthetic:ba,n=20,m=2",
            "--steps", "2", "--replications", "1", "--out-dir", str(blocker / "sub")]
    assert main(args) != 0
    assert "write" in capsys.readouterr().err


def test_sweep_from_config_file(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("axis1 = n_pv:0,3000\naxis2 = gamma:0.0:0.1:0.05\nreplications = 2\nsteps = 3\n")
    out = tmp_path / "out"
    assert main(["sweep", "--config", str(cfg), "--graph", "synthetic:ba,n=20,m=2", "--out-dir", str(out)]) == 0
    assert len((out / "custom.csv").read_text().splitlines()) == 1 + 2 * 3


def test_stats_triangle(tmp_path, capsys):
    path = tmp_path / "tri.txt"
    path.write_text("0 1\n1 2\n2 0\n")
    assert main(["stats", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"n": 3, "edge_count": 3, "avg_degree": 2.0, "avg_clustering": 1.0, "connected": True}


def test_stats_empty_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert main(["stats", str(path)]) != 0


class TestConfigFile:
    def test_unknown_key(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("gamma = 0.1\ngamma_typo = 3\n")
        with pytest.raises(ValueError, match="gamma_typo"):
            read_config(p)

    def test_comments_and_types(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("# defaults\nsteps = 12  # horizon\ntc_mu = 0.75\noriginator_strategy = highest-degree\n")
        assert read_config(p) == {"steps": 12, "tc_mu": 0.75, "originator_strategy": "highest-degree"}

    @pytest.mark.parametrize(
        "key, flag, file_value, flag_value",
        [("gamma", "--gamma", "0.2", "0.3"), ("steps", "--steps", "7", "9"),
         ("n_cv", "--n-cv", "10", "20"), ("seed", "--seed", "4", "5"),
         ("originator_count", "--originators", "3", "11")],
    )
    def test_precedence(self, tmp_path, key, flag, file_value, flag_value):
        p = tmp_path / "c.cfg"
        p.write_text(f"{key} = {file_value}\n")
        parser = build_parser()
        only_file = resolve(parser.parse_args(["run", "--config", str(p)]))
        both = resolve(parser.parse_args(["run", "--config", str(p), flag, flag_value]))
        neither = resolve(parser.parse_args(["run"]))
        cast = type(only_file[key])
        assert only_file[key] == cast(file_value)
        assert both[key] == cast(flag_value)
        assert key not in neither


def test_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("SLSIM_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["run", "--graph", "synthetic:ba,n=20,m=2", "--steps", "2"]) == 0
    assert (tmp_path / "env" / "metrics.csv").is_file()


def test_console_script_module_entry(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "slsim.cli", "stats", str(FIXTURE)], capture_output=True, text=True, check=True
    )
    assert json.loads(proc.stdout)["n"] == 60
