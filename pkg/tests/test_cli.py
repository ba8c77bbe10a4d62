import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nkcp3 import catalog
from nkcp3.cli import MESH_HEADER, build_report, dump_report, load_report, main, parse_grid
from nkcp3.config import TOL
from nkcp3.suites import Check

ZERO_SPEC = """\
# both curves with vanishing curvature
[f]
kappa = 0
[gamma]
kappa1 = 0
kappa2 = 0
kappa3 = 0
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_lie(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lie")
    doc = load_report(out)
    assert code == 0
    assert list(doc) == ["version", "command", "records", "suite", "summary", "timing"]
    assert list(doc["records"][0]) == ["name", "anchor", "residual", "tolerance", "pass"]
    assert all(r["pass"] == (r["residual"] <= r["tolerance"]) for r in doc["records"])
    assert doc["summary"]["failed"] == 0


def test_verify_override_is_echoed(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lie", "--tol", "second_order=1e-6")
    doc = load_report(out)
    assert code == 0
    assert doc["command"]["tolerances"]["second_order"] == 1e-6
    assert "second_order=1e-6" in doc["command"]["argv"]


def test_verify_failure_exit_status(capsys):
    code, out, err = run(capsys, "verify", "--suite", "structure", "--tol", "second_order=1e-30")
    assert code == 1
    assert load_report(out)["summary"]["failed"] > 0
    assert "FAIL" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--suite", "bogus"),
        ("verify", "--tol", "nonsense=1"),
        ("verify", "--tol", "second_order"),
        ("classify", "--family", "f7"),
        ("generate", "orbit", "--grid", "3y3"),
        ("frobnicate",),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_classify_sphere(capsys):
    code, out, _ = run(capsys, "classify", "--family", "sphere", "--grid", "5")
    doc = load_report(out)
    assert code == 0
    assert doc["classification"]["type"] == "Type2"
    assert abs(doc["classification"]["params"]["sin_alpha"]) < 1e-8
    assert doc["predicates"]["totally_umbilical"]["value"]


def test_classify_clifford_parameters(capsys):
    code, out, _ = run(capsys, "classify", "--family", "f1", "--mu", "0", "--nu", "0", "--grid", "4")
    preds = load_report(out)["predicates"]
    assert code == 0
    assert preds["parallel"]["value"] and preds["minimal"]["value"] and preds["flat"]["value"]


def test_classify_f3_needs_mu(capsys):
    code, _, err = run(capsys, "classify", "--family", "f3", "--mu", "0")
    assert code == 2
    assert "F3 requires mu != 0" in err


def test_classify_csv(capsys):
    code, out, _ = run(capsys, "classify", "--family", "rp2", "--c", "0.3", "--grid", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "name,anchor,residual,tolerance,pass"


def test_generate_codazzi_zero(tmp_path, capsys):
    spec = tmp_path / "zero.ini"
    spec.write_text(ZERO_SPEC)
    out = tmp_path / "mesh.csv"
    code, _, err = run(capsys, "generate", "codazzi", str(spec), "--grid", "5x4", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",") == MESH_HEADER
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    assert rows.shape == (20, 13)
    z = rows[:, 2:10:2] + 1j * rows[:, 3:10:2]
    np.testing.assert_allclose(np.linalg.norm(z, axis=1), 1, atol=1e-9)
    assert np.abs(rows[:, 11]).max() < 1e-7
    holds = err.splitlines()[-1]
    assert "flat" in holds and "parallel" in holds


def test_generate_orbit_matches_family(tmp_path, capsys):
    out = tmp_path / "orbit.csv"
    code, _, _ = run(capsys, "generate", "orbit", "--nu", "0.3", "--rho", "0.2", "--sigma", "0.5",
                     "--grid", "4x3", "--out", str(out))
    assert code == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    imm = catalog.family_immersion(catalog.FamilyParams("F4", {"nu": 0.3, "rho": 0.2, "sigma": 0.5}))
    z = imm(rows[:, 0], rows[:, 1])
    np.testing.assert_allclose(rows[:, 2:10:2] + 1j * rows[:, 3:10:2], z, atol=1e-9)


def test_generate_legendre(capsys):
    code, out, _ = run(capsys, "generate", "legendre", "--space", "s7", "--kappas", "0,1,0", "--grid", "40")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].endswith("constraint_drift") and len(lines) == 41
    drift = np.array([float(line.rsplit(",", 1)[1]) for line in lines[1:]])
    assert drift.max() <= 1e-9


@pytest.mark.parametrize(
    "text, line",
    [
        ("[f]\nkappa = 0\n[gamma]\nkappa1 = abc\n", 4),
        ("[f]\nkappa 0\n", 2),
        ("[f]\nkappa = poly: 1, x\n", 2),
        ("[gamma]\n\npoint = 1, 0, 0\n", 3),
        ("[gamma]   # S^7 curve\nkappa1 = 0\nkappa3 = oops\n", 3),
    ],
)
def test_spec_errors_name_lines(tmp_path, capsys, text, line):
    spec = tmp_path / "bad.ini"
    spec.write_text(text)
    code, _, err = run(capsys, "generate", "codazzi", str(spec))
    assert code == 2
    assert f"bad.ini:{line}:" in err


def test_deterministic_modulo_timing(capsys):
    docs = []
    for _ in range(2):
        _, out, _ = run(capsys, "verify", "--suite", "structure")
        doc = load_report(out)
        doc.pop("timing")
        docs.append(json.dumps(doc))
    assert docs[0] == docs[1]


def test_seed_env(monkeypatch, capsys):
    _, a, _ = run(capsys, "verify", "--suite", "structure")
    monkeypatch.setenv("NKCP3_SEED", "7")
    _, b, _ = run(capsys, "verify", "--suite", "structure")
    ra = [r["residual"] for r in load_report(a)["records"]]
    rb = [r["residual"] for r in load_report(b)["records"]]
    assert ra != rb


names = st.text(st.characters(blacklist_categories=("Cs",)), max_size=20)
floats = st.floats(0, 1e3, allow_nan=False)


@given(st.lists(st.builds(Check, names, names, floats, floats), max_size=6))
def test_report_roundtrip(checks):
    doc = build_report(["verify"], TOL, checks, {"suite": "x"}, 1.5)
    assert load_report(dump_report(doc)) == doc
    assert all(r["pass"] == (r["residual"] <= r["tolerance"]) for r in doc["records"])


@pytest.mark.parametrize("text, expected", [("8", (8, 8)), ("3x5", (3, 5)), (" 2 X 7 ", (2, 7))])
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nkcp3", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
