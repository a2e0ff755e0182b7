import json
from pathlib import Path

import pytest

from mahler.cli.main import main

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def _no_bare_floats(text):
    # every non-integer number must be a string (ball or exact), never a JSON float
    def walk(x):
        if isinstance(x, float):
            raise AssertionError(f"bare float {x}")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(text))


def test_solve_m(tmp_path):
    out = tmp_path / "m.json"
    assert main(["solve", "--system", str(SYSTEMS / "m.json"), "--order", "64", "--out", str(out)]) == 0
    text = out.read_text()
    _no_bare_floats(text)
    man = json.loads(Path(str(out) + ".manifest.json").read_text())
    assert man["argv"][0] == "solve" and man["outputs"]


def test_exit_codes(tmp_path, capsys):
    assert main(["solve", "--bogus"]) == 2
    assert main(["solve", "--system", str(tmp_path / "missing.json"), "--order", "8"]) == 2
    # the M system without a seed is ambiguous: a library error, code 3
    bad = tmp_path / "noseed.json"
    data = json.loads((SYSTEMS / "m.json").read_text())
    data.pop("f0", None)
    bad.write_text(json.dumps(data))
    assert main(["solve", "--system", str(bad), "--order", "8"]) == 3


def test_measure_json(tmp_path):
    out = tmp_path / "ia1.json"
    assert main(["measure", "--theorem", "ia1", "--n", "3", "--k", "0", "--d", "4", "--delta", "2", "--report", str(out)]) == 0
    data = json.loads(out.read_text())["result"]
    _no_bare_floats(out.read_text())
    assert data["outer"] == "7/6" and data["dW_exp"] == "1/6"


def test_probe_and_replay(tmp_path, capsys):
    out = tmp_path / "probe.json"
    assert main(["probe", "--point", "1/2", "--deg", "1", "--height", "10", "--report", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["exact_vanishing"] == ["2*X1 - 1"]
    capsys.readouterr()
    assert main(["--replay", str(out) + ".manifest.json"]) == 0
    assert "identical" in capsys.readouterr().out


def test_multiplicity_cli(tmp_path):
    out = tmp_path / "mult.json"
    args = ["multiplicity", "--series", str(SYSTEMS / "z_and_m.json"), "--order", "16", "--report", str(out)]
    assert main(args) == 0
    assert json.loads(out.read_text())["result"]["T0"] == 3


def test_examples_cli(tmp_path):
    assert main(["examples", "--which", "cantor", "--outdir", str(tmp_path)]) == 0
    assert any(tmp_path.iterdir())
