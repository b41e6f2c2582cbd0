import csv
import json
import subprocess
import sys

import pytest

from openchain.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from openchain.config import parse_config, parse_tol
from openchain.errors import InputError
from openchain.kernels import GeneralBoundary, TriangularBoundary

L2 = {
    "eta": [1, 0], "L": 2, "xi": [[0.1, 0], [-0.2, 0.05]],
    "right": {"triangular": [[1, 0], [0.4, 0.1], [0.3, 0]]},
    "left": {"triangular": [[0.7, 0], [-0.3, 0], [0.5, 0]]},
    "N_range": [0, 2], "seed": 5, "solver": {"starts": 100},
}


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(path)


def run(*argv):
    return main([str(a) for a in argv])


# ---------------------------------------------------------------------------
# configuration

def test_parse_config_roundtrip():
    cfg = parse_config(L2, env={})
    assert cfg.L == 2 and cfg.N_values == (0, 1, 2) and cfg.seed == 5
    assert cfg.right == TriangularBoundary(1, 0.4 + 0.1j, 0.3)
    assert cfg.xi[1] == -0.2 + 0.05j


@pytest.mark.parametrize("bad", [
    {"L": 0}, {"L": 2, "xi": [0]}, {"right": {"general": [1, 2]}}, {"right": {"general": [1, 0, 0, 0],
                                                                              "triangular": [1, 0, 0]}},
    {"right": {"diagonal": [1]}}, {"N": 1, "N_range": [0, 1]}, {"N_range": [2, 1]}, {"seed": -1},
    {"seed": 2**64}, {"tolerances": {"ybe": 0}}, {"solver": {"restarts": 3}}, {"bogus": 1}, {"eta": [1, 2, 3]},
])
def test_parse_config_rejects(bad):
    with pytest.raises(InputError):
        parse_config(bad, env={})


def test_env_seed_override():
    assert parse_config({"seed": 1}, env={"OPENCHAIN_SEED": "42"}).seed == 42
    with pytest.raises(InputError):
        parse_config({}, env={"OPENCHAIN_SEED": "x"})


def test_parse_tol():
    assert parse_tol(["ybe=1e-10", "eigenpair=2e-8"]) == {"ybe": 1e-10, "eigenpair": 2e-8}
    for bad in (["ybe"], ["ybe=abc"], ["ybe=-1"]):
        with pytest.raises(InputError):
            parse_tol(bad)


# ---------------------------------------------------------------------------
# exit codes

def test_check_subset_passes(tmp_path):
    out = tmp_path / "r.json"
    assert run("check", "--suite", "ybe,reflection", "--out", out) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["summary"]["all_ok"] and data["summary"]["total"] > 0


def test_check_malformed_config(tmp_path):
    assert run("check", "--config", write(tmp_path, "bad.json", "{not json")) == EXIT_INPUT
    assert run("check", "--config", write(tmp_path, "bad2.json", {"L": -3})) == EXIT_INPUT
    assert run("check", "--config", str(tmp_path / "missing.json")) == EXIT_INPUT


def test_check_bad_arguments():
    assert run("check", "--suite", "nonsense") == EXIT_INPUT
    assert run("check", "--tol", "unknown_check=1e-3", "--suite", "ybe") == EXIT_INPUT
    assert run("frobnicate") == EXIT_INPUT
    assert run("check", "--seed", "notanint") == EXIT_INPUT


def test_check_corrupt_fixture(tmp_path):
    cfg = write(tmp_path, "c.json", {"lengths": [2], "draws": 1, "fixtures": ["corrupt_K"]})
    assert run("check", "--config", cfg, "--suite", "reflection", "--out", tmp_path / "o.json") == EXIT_FAIL


def test_triangularize_cases(tmp_path):
    good = write(tmp_path, "g.json", {"right": {"general": [1, 2, 3, 1]}, "left": {"general": [0.5, 0, 0, 0]}})
    out = tmp_path / "t.json"
    assert run("triangularize", "--config", good, "--out", out) == EXIT_OK
    assert json.loads(out.read_text())["triangularizable"]
    diag = write(tmp_path, "d.json", {"right": {"general": [1, 0.5, 0, 0]}, "left": {"general": [2, 0.1, 0, 0]}})
    assert run("triangularize", "--config", diag, "--out", out) == EXIT_OK
    assert json.loads(out.read_text())["M"] == [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
    bad = write(tmp_path, "b.json", {"right": {"general": [1, 0, 1, 0]}, "left": {"general": [1, 0, 0, 1]}})
    assert run("triangularize", "--config", bad, "--out", out) == EXIT_FAIL
    assert json.loads(out.read_text())["constraint_value"] == [1, 0]


def test_solve_outputs_and_determinism(tmp_path):
    cfg = write(tmp_path, "s.json", L2)
    outs = []
    for k in range(2):
        out = tmp_path / f"s{k}.json"
        assert run("solve", "--config", cfg, "--out", out) == EXIT_OK
        outs.append((out.read_bytes(), (tmp_path / f"s{k}.csv").read_bytes()))
    assert outs[0] == outs[1]
    data = json.loads(outs[0][0])
    per_n = {n: sum(s["N"] == n for s in data["states"]) for n in (0, 1, 2)}
    assert all(v >= 1 for v in per_n.values()), per_n
    rows = list(csv.reader(outs[0][1].decode().splitlines()))
    assert rows[0] == ["state_id", "N", "probe_re", "probe_im", "lambda_re", "lambda_im", "residual"]
    assert any(r[1] == "0" for r in rows[1:])
    assert 0 < data["spectrum_coverage"] <= 1


def test_solve_cbar_sweep_keeps_roots(tmp_path):
    roots = []
    for cb in (0.0, 0.9, -2.0):
        data = dict(L2, N=1, left={"triangular": [[0.7, 0], [-0.3, 0], [cb, 0]]})
        data.pop("N_range")
        out = tmp_path / f"c{cb}.json"
        assert run("solve", "--config", write(tmp_path, f"c{cb}.in.json", data), "--out", out) == EXIT_OK
        roots.append([s["roots"] for s in json.loads(out.read_text())["states"]])
    assert roots[0] == roots[1] == roots[2]


def test_solve_requires_N(tmp_path):
    data = dict(L2)
    data.pop("N_range")
    assert run("solve", "--config", write(tmp_path, "n.json", data)) == EXIT_INPUT


def test_spectrum_and_hamiltonian(tmp_path, capsys):
    cfg = write(tmp_path, "h.json", {"L": 2, "right": {"general": [1, 0.2, 0.1, 0.3]},
                                     "left": {"general": [0.8, 0.1, 0.2, 0.6]}, "u": [[0.3, 0.1]]})
    assert run("spectrum", "--config", cfg) == EXIT_OK
    spec = json.loads(capsys.readouterr().out)
    assert len(spec["spectra"][0]["eigenvalues"]) == 4
    assert run("hamiltonian", "--config", cfg) == EXIT_OK
    ham = json.loads(capsys.readouterr().out)
    assert len(ham["matrix"]) == 4 and "transfer_derivative_residual" in ham


def test_env_seed_in_subprocess(tmp_path):
    data = {k: v for k, v in L2.items() if k != "N_range"}
    cfg = write(tmp_path, "e.json", {**data, "N": 0})
    env = {"OPENCHAIN_SEED": "3", "PATH": ""}
    proc = subprocess.run([sys.executable, "-m", "openchain", "solve", "--config", cfg], capture_output=True,
                          text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout.split("state_id,")[0])["seed"] == 3


def test_version(capsys):
    assert run("--version") == EXIT_OK
