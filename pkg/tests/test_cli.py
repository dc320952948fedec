import json
import subprocess
import sys
from pathlib import Path

import pytest

from lieconf.cli import RunConfig, main, run

FIXTURES = Path(__file__).parent / "fixtures"
M_FILE = str(FIXTURES / "M.lie")


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_classify_example(capsys):
    code, rep = call_json(capsys, "classify", "--input", M_FILE)
    assert code == 0
    assert rep["schema_version"] == 1
    assert rep["solvable"] and not rep["nilpotent"]
    assert rep["derived_length"] == 2
    assert rep["stabilized_ideal_rank"] == 1


def test_series_example(capsys):
    code, rep = call_json(capsys, "series")
    assert code == 0
    assert rep["derived_series"] == [["e", "u", "n"], ["n"], []]
    assert rep["stabilized_ideal"] == ["n"]


def test_decompose_with_generator(capsys):
    code, rep = call_json(capsys, "decompose", "--input", M_FILE, "--generator", "u + D*n")
    assert code == 0
    rep = rep["decomposition"]
    assert rep["weights"] == ["0", "1"]
    assert rep["U"] == ["e", "u"] and rep["N"] == ["n"]
    assert not rep["covers_without_modification"] and rep["covers"]


def test_decompose_vertex_example(capsys):
    code, rep = call_json(capsys, "decompose")
    assert code == 0
    rep = rep["decomposition"]
    assert rep["ok"] and rep["N"] == ["n"]


@pytest.mark.parametrize("seed, result", [(0, "u")])
def test_modify(capsys, seed, result):
    code, rep = call_json(capsys, "modify", "--generator", "u + D*n", "--seed", str(seed))
    assert code == 0
    assert rep["modification"]["result"] == result
    assert rep["modification"]["nilpotent_subalgebra"]


def test_check_example(capsys):
    code, rep = call_json(capsys, "check", "--truncation", "4")
    assert code == 0
    assert rep["axioms"]["conformal"]["ok"]


def test_text_output(capsys):
    code, out, _ = call(capsys, "classify")
    assert code == 0
    assert "solvable" in out


def test_example_command_round_trips(capsys, tmp_path):
    code, out, _ = call(capsys, "example", "vertex-M", "--truncation", "5")
    assert code == 0
    path = tmp_path / "V.lie"
    path.write_text(out)
    code, rep = call_json(capsys, "series", "--input", str(path))
    assert code == 0 and rep["stabilized_ideal"] == ["n"]


def write(tmp_path, text):
    p = tmp_path / "a.lie"
    p.write_text(text)
    return str(p)


def test_exit_code_parse_error(capsys, tmp_path):
    code, _, err = call(capsys, "classify", "--input", write(tmp_path, "algebra A\ngenerator x\nbracket x y = x\n"))
    assert code == 1
    assert "line 3" in err


def test_exit_code_missing_file(capsys, tmp_path):
    code, _, _ = call(capsys, "classify", "--input", str(tmp_path / "missing.lie"))
    assert code == 1


def test_exit_code_bad_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["classify", "--cap", "zero"])
    assert info.value.code == 1


def test_exit_code_axioms(capsys, tmp_path):
    bad = write(tmp_path, "algebra B\ngenerator x\ngenerator y\nbracket x x = y\nbracket x y = 0\nbracket y y = 0\n")
    code, _, err = call(capsys, "check", "--input", bad)
    assert code == 2
    assert "axioms unverified" in err or "axioms unverified" in _


def test_exit_code_budget(capsys):
    code, _, _ = call(capsys, "decompose", "--budget", "1")
    assert code == 3


def test_exit_code_scope(capsys, tmp_path):
    vir = write(tmp_path, "algebra Vir\ngenerator v\nbracket v v = (D + 2*L)*v\n")
    for cmd in ("modify", "decompose"):
        code, _, err = call(capsys, cmd, "--input", vir, "--generator", "v")
        assert code == 4, cmd


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="classify", degree_cap=0)
    code, rep = run(RunConfig(command="modify"))
    assert code == 1 and "--element" in rep["error"]["message"]
    code, rep = run(RunConfig(command="classify"))
    assert code == 0 and rep["command"] == "classify"


def test_console_script_is_deterministic():
    argv = [sys.executable, "-m", "lieconf", "modify", "--generator", "u + D*n", "--seed", "2", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    assert first == second
    assert json.loads(first)["modification"]["result"] == "u - 6*n"
