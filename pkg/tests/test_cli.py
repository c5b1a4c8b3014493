import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from spinforge import formats
from spinforge.cli import main


def run(*args):
    return main([str(a) for a in args])


def test_synth_w10(tmp_path, capsys):
    out = tmp_path / "s.json"
    table = tmp_path / "s.csv"
    assert run("synth", "--state", "w", "--n", 10, "--j1", 1, "--out", out, "--emit", table) == 0
    s = formats.read_schedule(out)
    ratios = s.couplings / s.couplings[0]
    assert s.n == 10 and np.all((ratios > 0.6065) & (ratios < 2.7183))
    text = capsys.readouterr().out
    assert "coupling bounds: pass" in text
    assert "predicted probabilities: " in text
    assert "np.float64" not in text
    assert text.splitlines()[2].split(",")[1] == "1.0"
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == 10 and float(rows[0]["J_k"]) == 1.0


def test_synth_gaussian_and_verify(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run("synth", "--state", "gaussian", "--n", 10, "--sigma", 1, "--out", out) == 0
    emit = tmp_path / "p.csv"
    trace = tmp_path / "trace.csv"
    assert run("verify", "--schedule", out, "--target", "gaussian", "--sigma", 1,
               "--emit", emit, "--trace", trace, "--samples", 3) == 0
    text = capsys.readouterr().out
    assert "verdict: pass" in text
    rows = list(csv.DictReader(emit.open()))
    assert len(rows) == 20
    for r in rows:
        assert abs(float(r["probability"]) - float(r["target"])) < 1e-10
    trace_rows = list(csv.reader(trace.open()))
    assert trace_rows[0][:2] == ["time", "p1"] and len(trace_rows) == 1 + 1 + 10 * 3


def test_verify_w10_fidelity(tmp_path, capsys):
    out = tmp_path / "w.json"
    run("synth", "--state", "w", "--n", 10, "--out", out)
    capsys.readouterr()
    assert run("verify", "--schedule", out, "--target", "w") == 0
    lines = capsys.readouterr().out.splitlines()
    dev = float(lines[0].split(":")[1])
    fid = float(lines[1].split(":")[1].split()[0])
    assert dev <= 1e-9 and fid >= 1 - 1e-9


def test_verify_wrong_target_fails(tmp_path, capsys):
    out = tmp_path / "w.json"
    run("synth", "--state", "w", "--n", 6, "--out", out)
    assert run("verify", "--schedule", out, "--target", "gaussian", "--sigma", 1) == 1


def test_synth_from_file(tmp_path):
    prof = tmp_path / "p.csv"
    prof.write_text("0.1,0.2,0.3,0.4\n")
    out = tmp_path / "s.json"
    assert run("synth", "--state", "file", "--profile", prof, "--out", out) == 0
    assert formats.read_schedule(out).n == 2


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("synth", "--state", "gaussian", "--n", 10, "--out", tmp_path / "x.json")
    assert exc.value.code == 2
    assert not (tmp_path / "x.json").exists()
    with pytest.raises(SystemExit):
        run("synth", "--state", "file", "--out", tmp_path / "x.json")


def test_bad_profile_exits_nonzero(tmp_path, capsys):
    prof = tmp_path / "p.csv"
    prof.write_text("0.5,-0.5,0.5,0.5")
    out = tmp_path / "s.json"
    assert run("synth", "--state", "file", "--profile", prof, "--out", out) == 1
    assert "negative" in capsys.readouterr().err
    assert not out.exists()


def test_corrupted_schedule(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("verify", "--schedule", bad) == 1
    assert "not valid JSON" in capsys.readouterr().err


def test_sweep_w10(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    assert run("sweep", "--state", "w", "--n", 10, "--eps-max", 0.04, "--steps", 100,
               "--fidelity", 0.99, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "eps_scaled,fidelity" and len(lines) == 102
    footer = dict(kv.split("=") for kv in lines[-1].split(",")[1:])
    assert 0.005 <= float(footer["eps_scaled"]) <= 0.015
    assert "threshold" in capsys.readouterr().out


def test_sweep_single_step(capsys):
    assert run("sweep", "--state", "w", "--n", 4, "--steps", 1) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "eps_scaled,fidelity" and len(lines) == 3
    eps, fid = map(float, lines[1].split(","))
    assert eps == 0.0 and fid > 1 - 1e-12
    assert lines[2].endswith("unbounded=true")


def test_sweep_is_deterministic(capsys):
    run("sweep", "--state", "gaussian", "--n", 6, "--sigma", 1, "--steps", 20)
    a = capsys.readouterr().out
    run("sweep", "--state", "gaussian", "--n", 6, "--sigma", 1, "--steps", 20)
    assert a == capsys.readouterr().out


def test_scaling(tmp_path, capsys):
    out = tmp_path / "scaling.csv"
    assert run("scaling", "--state", "w", "--n", "10,20", "--steps", 60, "--out", out) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["N"] for r in rows] == ["10", "20"]
    ratio = float(rows[0]["eps_star"]) / float(rows[1]["eps_star"])
    assert 1.5 < ratio < 2.5
    capsys.readouterr()
    assert run("scaling", "--state", "w", "--n", "12") == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 2  # header + one row


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "spinforge.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "synth" in proc.stdout
