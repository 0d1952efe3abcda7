"""Console entry point: exit codes, output formats, determinism."""

import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from bures.cli import ACTION_REFERENCES, main
from bures.quadrature import FIELD_NAMES, QuadratureSpec, invariant_table, table_csv
from bures.state_space import COORD_NAMES, ZETA1_MAX, ZETA2_MAX

INTERIOR = ["0.7", "1.2", "0.3", "0.5", "0.4", "0.6", "0.5", "0.3"]


def _read_csv(path):
    raw = path.read_bytes().decode("utf-8")
    assert raw.endswith("\r\n")
    lines = raw[:-2].split("\r\n")
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def test_no_arguments_is_usage_error(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for name in ("validate", "point", "table", "action", "codazzi", "ab-scan"):
        assert name in out


def test_point_interior_json(capsys):
    assert main(["point", *INTERIOR]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["coordinates"] == {n: float(v) for n, v in zip(COORD_NAMES, INTERIOR)}
    g = np.array(doc["g"])
    assert g.shape == (8, 8)
    assert np.isfinite(g).all()
    assert np.array(doc["g_inv"]).shape == (8, 8)
    assert doc["sqrt_det"] > 0.0
    assert doc["scalar_curvature"] == pytest.approx(
        doc["scalar_curvature_closed_form"], rel=1e-5)
    assert doc["codazzi_residual"] > 1e-4
    assert set(doc["invariants"]) == {"bures", "sd", "asd"}
    for row in doc["invariants"].values():
        assert all(np.isfinite(list(row.values())))
    sv = np.array(doc["singular_values"])
    assert sv.shape == (28, 8)  # one spectrum per frame pair
    assert np.all(sv >= 0.0)


def test_point_exit_codes():
    degenerate = ["0.7", "1.2", "0.3", "0.5", "0.4", "0.6", "1e-5", "1e-5"]
    assert main(["point", *degenerate]) == 3
    out_of_domain = ["0.7", "4.0", "0.3", "0.5", "0.4", "0.6", "0.5", "0.3"]
    assert main(["point", *out_of_domain]) == 3
    assert main(["point", "0.1", "0.2"]) == 2  # wrong arity
    assert main(["point", *INTERIOR[:7], "not-a-number"]) == 2


def test_table_deterministic_and_matches_library(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    args = ["table", "--method", "mc", "--samples", "16", "--seed", "5"]
    assert main([*args, "--out", str(first)]) == 0
    assert main([*args, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    spec = QuadratureSpec(method="mc", n_samples=16, seed=5)
    assert first.read_bytes().decode("utf-8") == table_csv(invariant_table(spec))


def test_table_bad_arguments(tmp_path):
    assert main(["table", "--method", "simpson"]) == 2
    assert main(["table", "--samples", "0"]) == 2
    assert main(["table", "--method", "lattice", "--nodes", "1"]) == 2


def test_action_rows(tmp_path):
    out = tmp_path / "action.csv"
    assert main(["action", "--samples", "32", "--seed", "7", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header == ["field", "value", "stderr", "reference",
                      "n_evaluated", "n_rejected"]
    assert [r[0] for r in rows] == ["bures", "sd", "asd"]
    values = [float(r[1]) for r in rows]
    assert values[0] == pytest.approx(values[1] + values[2], rel=1e-10)
    assert [float(r[3]) for r in rows] == list(ACTION_REFERENCES)
    assert all(int(r[4]) == 32 for r in rows)


def test_codazzi_rows(tmp_path):
    out = tmp_path / "codazzi.csv"
    assert main(["codazzi", "--samples", "6", "--seed", "3", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header == ["index", *COORD_NAMES, "residual"]
    assert [int(r[0]) for r in rows] == list(range(6))
    residuals = [float(r[-1]) for r in rows]
    assert all(np.isfinite(residuals))
    assert min(residuals) > 1e-4  # genuinely non-Codazzi away from degeneracy


def test_ab_scan_grid(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["ab-scan", "--grid", "4", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header == ["zeta1", "zeta2", "A", "B"]
    assert len(rows) == 16
    first = [float(x) for x in rows[0]]
    assert first == [0.0, 0.0, 0.0, 0.0]  # pure-state corner
    last = [float(x) for x in rows[-1]]
    assert last[0] == pytest.approx(ZETA1_MAX)
    assert last[1] == pytest.approx(ZETA2_MAX)
    assert abs(last[2]) < 1e-12 and abs(last[3]) < 1e-12  # fully mixed corner
    assert main(["ab-scan", "--grid", "1"]) == 2


def test_console_script_installed():
    exe = shutil.which("bures")
    assert exe is not None
    proc = subprocess.run([exe, "ab-scan", "--grid", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("zeta1,zeta2,A,B")
    module = subprocess.run([sys.executable, "-m", "bures.cli", "--help"],
                            capture_output=True, text=True)
    assert module.returncode == 0
