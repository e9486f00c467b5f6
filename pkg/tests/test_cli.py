import json
import subprocess
import sys

from prismkit.cli import main, run


def _run(argv, tmp_path=None, payload=None):
    if payload is not None:
        f = tmp_path / "in.json"
        f.write_text(json.dumps(payload))
        argv = argv + ["--in", str(f)]
    return run(argv)


def test_ext_example():
    code, rep = run(["ext", "--group", "2", "--coeff", "2"])
    assert code == 0 and rep["H1"] == [2] and rep["schema"] == "1"


def test_ext_bad_group():
    code, _ = run(["ext", "--group", "2,x"])
    assert code == 2


def test_bad_json_is_input_error():
    code, rep = run(["qlog", "--p", "2", "--x", "not-json"])
    assert code == 2 and rep["error"] == "input"


def test_usage_error():
    code, _ = run(["delta", "nonsense"])
    assert code == 2


def test_precision_exit():
    code, _ = run(["envelope", "--p", "2", "--certify", "999"])
    assert code == 3


def test_witt_polys():
    code, rep = run(["witt", "polys", "--p", "2", "--len", "2"])
    assert code == 0
    assert rep["polys"]["S"][1] == "-x0*y0 + x1 + y1"


def test_dm_check_pass_and_violation(tmp_path):
    code, rep = _run(["dm", "check", "--p", "3"], tmp_path, {"phi": [[3]]})
    assert code == 0 and rep["pass"]
    code, rep = _run(["dm", "check", "--p", "3"], tmp_path, {"phi": [[9]]})
    assert code == 1 and not rep["pass"]


def test_dm_standard():
    code, rep = run(["dm", "standard", "--p", "2", "--kind", "mu_filtered"])
    assert code == 0


def test_suite_deterministic(capsys):
    argv = ["suite", "ext", "dm", "--p", "2", "--seed", "7"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    rep = json.loads(first)
    assert rep["summary"]["failed"] == 0


def test_seed_env(monkeypatch):
    monkeypatch.setenv("PRISMKIT_SEED", "11")
    _, rep = run(["suite", "ext", "--p", "3"])
    assert rep["config"]["seed"] == 11


def test_human_output(capsys):
    assert main(["ext", "--group", "4", "--coeff", "2", "--human"]) == 0
    assert "H1" in capsys.readouterr().out


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "prismkit.cli", "ext", "--group", "3", "--coeff", "9"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["H1"] == [3]
