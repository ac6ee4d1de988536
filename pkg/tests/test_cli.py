import json
import subprocess
import sys

import pytest

from qadams.cli import run
from qadams.couples import moore_couple


def test_sphere_ascii(capsys):
    assert run(["chart", "integral-sphere", "--prime", "2", "--max-stem", "13", "--format", "ascii"]) == 0
    out, err = capsys.readouterr()
    assert err.startswith("# qadams ")
    rows = {line.split("|")[0].strip(): line.split("|")[1].split() for line in out.splitlines() if "|" in line}
    assert rows["0"][0] == "Z"
    assert all(rows[str(s)][0] == "." for s in range(1, 15))
    assert rows["1"][1] == "o" and rows["3"][3] == "o"


def test_bp_modes_byte_identical(capsys):
    assert run(["chart", "bp", "--prime", "2", "--max-t", "10", "--mode", "mv"]) == 0
    a = capsys.readouterr().out
    assert run(["chart", "bp", "--prime", "2", "--max-t", "10", "--mode", "closed-form"]) == 0
    b = capsys.readouterr().out
    assert a == b and json.loads(a)["prime"] == 2


def test_verify_moore(capsys):
    assert run(["verify", "moore", "--prime", "3", "--k", "4"]) == 0
    assert run(["verify", "moore", "--prime", "3", "--k", "4", "--tamper"]) == 1


def test_verify_toda_and_einfty(capsys):
    assert run(["verify", "toda", "--prime", "2", "--max-n", "6"]) == 0
    assert "ok" in capsys.readouterr().out
    assert run(["verify", "einfty-bp", "--prime", "2", "--max-t", "8"]) == 0


def test_usage_errors(capsys):
    assert run(["chart", "bp", "--prime", "2", "--bogus"]) == 2
    assert run(["chart", "bp", "--prime", "2"]) == 2
    assert run(["chart", "ext-a", "--prime", "3", "--max-t", "4"]) == 2
    assert run(["oracle", "cobar", "--prime", "2", "--max-t", "30"]) == 2


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("QA_THREADS", "zero")
    assert run(["verify", "moore", "--prime", "2", "--k", "2"]) == 2
    monkeypatch.setenv("QA_THREADS", "3")
    assert run(["verify", "moore", "--prime", "2", "--k", "2"]) == 0
    assert "threads=3" in capsys.readouterr().err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.conf"
    cfg.write_text("# window\nprime = 2\nmax_t = 6\nformat = ascii\n")
    assert run(["--config", str(cfg), "oracle", "cobar", "--max-t", "5"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# Ext_A cobar")
    cfg.write_text("colour = blue\n")
    assert run(["--config", str(cfg), "oracle", "cobar", "--prime", "2", "--max-t", "4"]) == 2


def test_couples_ext_from_file(tmp_path, capsys):
    f = tmp_path / "moore.json"
    f.write_text(moore_couple(2, 2).rep.to_json())
    out = tmp_path / "chart.json"
    assert run(["couples", "ext", "--input", str(f), "--max-s", "2", "--max-t", "2", "--out", str(out)]) == 0
    ch = json.loads(out.read_text())
    assert ch["window"]["max_s"] == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert run(["couples", "ext", "--input", str(tmp_path / "bad.json"), "--max-s", "1", "--max-t", "1"]) == 2


def test_svg_output(capsys):
    assert run(["chart", "ext-a", "--prime", "2", "--max-t", "8", "--format", "svg"]) == 0
    assert "<svg" in capsys.readouterr().out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qadams", "verify", "moore", "--prime", "5", "--k", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "ok" in r.stdout
