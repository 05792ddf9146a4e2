import json
import subprocess
import sys

import pytest

from lieexp.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_text(capsys):
    code, out, _ = run(capsys, "roots", "--type", "E8")
    assert code == EXIT_OK
    assert "positive roots 120" in out
    assert "a8  Heisenberg  nice" in out


def test_roots_json(capsys):
    code, out, _ = run(capsys, "roots", "--type", "D5", "--format", "json")
    data = json.loads(out)
    assert len(data["positive_roots"]) == 20
    assert data["highest_roots"] == ["a1+2a2+2a3+a4+a5"]


def test_expand_latex(capsys):
    code, out, _ = run(capsys, "expand", "--type", "D4", "--rep", "min", "--enum", "a1,a3,a4,a2", "--format", "latex",
                       "--flatten")
    assert code == EXIT_OK
    assert "\\Omega_4" in out and "\\gamma_4" in out


def test_expand_audit(capsys):
    code, out, _ = run(capsys, "expand", "--type", "E7", "--rep", "ntm", "--audit")
    assert code == EXIT_OK and json.loads(out)["ok"] is True


def test_expand_top_bourbaki(capsys):
    code, out, _ = run(capsys, "expand", "--type", "E8", "--rep", "ntm", "--top")
    assert code == EXIT_OK
    assert json.loads(out)["theorem"] == "F"


def test_fourier_and_choices(capsys):
    code, out, _ = run(capsys, "fourier", "--type", "D5", "--alpha", "a5", "--phi", "a5:1,a1+2a2+2a3+a4+a5:1",
                       "--choices")
    assert code == EXIT_OK
    pairs = {tuple(x["pair"]) for x in json.loads(out)}
    assert ("a1", "a3") in pairs
    code, out, _ = run(capsys, "fourier", "--type", "D5", "--alpha", "a5", "--phi", "a5:1,a1+2a2+2a3+a4+a5:1",
                       "--pair", "a2,a4")
    assert code == EXIT_OK
    assert json.loads(out)["meta"]["pair"] == "a2,a4"


def test_theorem_d_and_heisenberg(capsys):
    assert run(capsys, "theorem-d", "--type", "E8", "--alpha", "a8", "--format", "text")[0] == EXIT_OK
    assert run(capsys, "heisenberg", "--type", "E6", "--alpha", "a2")[0] == EXIT_OK
    code, _, err = run(capsys, "heisenberg", "--type", "E6", "--alpha", "a1")
    assert code == EXIT_USAGE and "not a Heisenberg root" in err


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--type", "D5", "--support", "a4:1,a5:1")
    assert out.strip() == "ntm  2A1  dim 16  partition 31^7"
    code, out, _ = run(capsys, "orbit", "--type", "D5", "--support", "", "--format", "json")
    assert json.loads(out)["class"] == "zero"


def test_hasse(capsys):
    code, out, _ = run(capsys, "hasse", "--type", "D5")
    assert code == EXIT_OK and out.count("->") == 19
    code, out, _ = run(capsys, "hasse", "--type", "D3", "--format", "text")
    assert code == EXIT_OK and out.startswith("D3 is handled as A3")
    assert run(capsys, "hasse", "--type", "E6")[0] == EXIT_USAGE


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "table1", "--types", "A1..A3,D4")
    assert code == EXIT_OK
    assert out.strip().endswith("passed")
    assert run(capsys, "verify", "--suite", "nope")[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["roots", "--type", "B3"],
    ["fourier", "--type", "D5", "--alpha", "a9", "--phi", "a1:1"],
    ["fourier", "--type", "D5", "--alpha", "a1", "--phi", "a2:1"],
    ["expand", "--type", "D4", "--rep", "ntm", "--enum", "a1,a3,a4,a2"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err.startswith("lieexp: error:")


@pytest.mark.parametrize("argv", [["expand", "--type", "D4"], ["frobnicate"], ["roots"]])
def test_argparse_errors_exit_with_usage_code(capsys, argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_verify_failure_exit_code(capsys, monkeypatch):
    from lieexp import verify

    monkeypatch.setitem(verify.SUITES, "table1", lambda types: [verify.Case("x", False, "forced")])
    assert run(capsys, "verify", "--suite", "table1")[0] == EXIT_FAIL


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"format": "latex", "no_labels": True}))
    code, out, _ = run(capsys, "expand", "--type", "D4", "--rep", "min", "--config", str(cfg))
    assert code == EXIT_OK and out.startswith("\\begin{align*}") and "underbrace" not in out
    code, out, _ = run(capsys, "expand", "--type", "D4", "--rep", "min", "--config", str(cfg), "--format", "json")
    assert json.loads(out)["theorem"] == "B"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "expand", "--type", "D4", "--rep", "min", "--config", str(cfg))[0] == EXIT_USAGE


def test_output_file(tmp_path, capsys):
    target = tmp_path / "o.tex"
    assert run(capsys, "expand", "--type", "E6", "--rep", "min", "--format", "latex", "-o", str(target))[0] == EXIT_OK
    assert target.read_text().startswith("\\begin{align*}")


def test_console_script_deterministic():
    argv = ["lieexp", "expand", "--type", "E6", "--rep", "ntm", "--format", "json"]
    a = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    b = subprocess.run([sys.executable, "-m", "lieexp.cli"] + argv[1:], capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["type"] == "E6"
