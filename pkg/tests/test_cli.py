import json

import pytest

from cubicgauss import experiments
from cubicgauss.cli import main, run_command
from cubicgauss.gauss import kummer_sum_Sp


def test_symbol_example(capsys):
    code, env = run_command(["symbol", "--a", "2", "--b", "1+3w"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "ω²"
    assert env.results["exponent"] == 2


def test_sp_example(capsys):
    code, env = run_command(["sp", "--p", "7"])
    assert code == 0
    out = capsys.readouterr().out.strip()
    assert float(out) == pytest.approx(4.74094, abs=5e-6)
    assert env.results["S_p"] == kummer_sum_Sp(7)


def test_split_and_gauss(capsys, tmp_path):
    assert main(["split", "--p", "13"]) == 0
    assert capsys.readouterr().out.split() == ["4+3w", "1-3w"]
    cache = tmp_path / "c.csv"
    c1, e1 = run_command(["--cache", str(cache), "gauss", "--c", "1+3w", "--method", "cache"])
    c2, e2 = run_command(["gauss", "--c", "1+3w", "--method", "prime"])
    assert c1 == c2 == 0
    assert abs(e1.results["value"] - e2.results["value"]) < 1e-12


def test_selftest():
    assert main(["selftest"]) == 0


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["sp"]) == 2
    assert main(["nosuch"]) == 2
    assert main(["symbol", "--a", "2", "--b", "2+3w"]) == 2  # b not primary
    assert main(["sp", "--p", "11"]) == 2
    assert main(["kummer", "--X", "3"]) == 2


def test_numeric_failure_exit_one(capsys):
    assert main(["sieve-norm", "--A", "32", "--B", "32", "--iters", "2", "--tol", "1e-15"]) == 1
    assert "numeric failure" in capsys.readouterr().err


def test_thin_adapter_kummer(tmp_path):
    code, env = run_command(["--out", str(tmp_path / "k.csv"), "--format", "csv",
                             "kummer", "--X", "500"])
    assert code == 0
    lib = experiments.kummer_histogram(500)
    assert env.results["observed"] == lib.observed
    assert (tmp_path / "k.csv").read_text().splitlines()[0] == "p,theta,cos,interval"


def test_thin_adapter_patterson(tmp_path):
    code, env = run_command(["--out", str(tmp_path / "p.json"), "patterson", "--X", "1000"])
    assert code == 0
    lib = experiments.patterson_sum(1000)
    assert env.results["observed"] == lib.observed
    d = json.loads((tmp_path / "p.json").read_text())
    assert set(d["results"]) >= {"observed", "predicted", "ratio"}


@pytest.mark.parametrize("argv", [
    ["powersum", "--k", "3", "--X", "1000"],
    ["type1", "--U", "100"],
    ["sieve-form", "--A", "16", "--B", "16"],
    ["sieve-norm", "--A", "16", "--B", "16"],
    ["sharpness", "--N", "16", "32"],
    ["corrected-sieve", "--A", "32", "--B", "32"],
    ["poisson-check", "--kind", "radial", "--M", "100"],
    ["comb-check", "--Nmax", "1000"],
])
def test_commands_run(argv):
    code, env = run_command(argv)
    assert code == 0 and env is not None
