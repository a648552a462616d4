import csv
import io
import json
from fractions import Fraction

import pytest

from ncsurf.cli import ConfigError, fmt_number, main, parse_config

SPHERE_CFG = "type=builtin\nbuiltin=sphere-family\nalpha_sq=1\nR_sq=6\nepsilon=1\n"


@pytest.fixture
def sphere_cfg(tmp_path):
    path = tmp_path / "sphere.cfg"
    path.write_text(SPHERE_CFG)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_sphere_config():
    cfg = parse_config(SPHERE_CFG)
    assert cfg.type == "builtin" and cfg.builtin == "sphere-family"
    assert cfg.params == {"alpha_sq": 1, "R_sq": 6, "epsilon": 1}
    assert cfg.profile().params["R_sq"] == 6


def test_parse_polynomial_config():
    cfg = parse_config("coeffs=0,1")
    assert cfg.type == "polynomial" and cfg.coeffs == (0, 1)
    cfg = parse_config("# a comment\ntype=polynomial\ncoeffs=1/2, -0.25 ,3  # trailing\nepsilon=1/3\n")
    assert cfg.coeffs == (Fraction(1, 2), Fraction(-1, 4), 3)
    assert cfg.params["epsilon"] == Fraction(1, 3)


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("builtin=sphere-family\nalpha_sq=1\nR_sq=6\n", None, "'epsilon'"),
        ("coeffs=0,1\ncolour=red\n", 2, "unknown key"),
        ("coeffs=0,1\nepsilon=1\nepsilon=2\n", 3, "duplicate key"),
        ("coeffs=0,1\nepsilon=one\n", 2, "malformed number"),
        ("coeffs=0,,1\n", 1, "comma-separated"),
        ("builtin=paraboloid\ncoeffs=0,1\nepsilon=1\n", 1, "exactly one"),
        ("epsilon=1\n", None, "exactly one"),
        ("builtin=cube\nepsilon=1\n", 1, "unknown builtin"),
        ("type=polynomial\nbuiltin=paraboloid\nepsilon=1\n", 1, "does not match"),
        ("coeffs=0,1\njust words\n", 2, "key=value"),
        ("builtin=paraboloid\nepsilon=1\nkernel=literal\n", 3, "q-sphere"),
    ],
)
def test_config_errors(text, line, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert fragment in str(info.value)
    assert info.value.line == line


def test_number_formatting():
    assert fmt_number(0.1) == "0.10000000000000001"
    assert fmt_number(3) == "3"
    assert fmt_number(float("nan")) == "null"


def test_verify_harmonic_json(capsys):
    code, out, _ = run(capsys, "verify", "harmonic", "--nmax", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "pass"
    assert all(set(r) >= {"check", "params", "status", "max_deviation"} for r in doc["reports"])
    assert {r["check"] for r in doc["reports"]} >= {"laplacian", "norm", "anticommutator", "gram-diagonal"}


def test_reports_are_deterministic(capsys):
    first = run(capsys, "verify", "harmonic", "--nmax", "1")[1]
    second = run(capsys, "verify", "harmonic", "--nmax", "1", "--jobs", "2")[1]
    assert first == second


def test_spectrum_crystal_csv(capsys, sphere_cfg):
    code, out, _ = run(capsys, "spectrum", "crystal", "--config", sphere_cfg, "--k", "10")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["index", "eigenvalue", "predicted"]
    assert len(rows) == 22
    assert float(rows[-1][1]) == pytest.approx(10 * 5 ** 0.5, abs=1e-10)


def test_spectrum_crystal_from_config_spin(capsys, sphere_cfg):
    code, out, _ = run(capsys, "spectrum", "crystal", "--config", sphere_cfg)
    assert code == 0 and len(out.strip().splitlines()) == 6


def test_hyperboloid_modes_reports_failure(capsys):
    code, out, _ = run(capsys, "hyperboloid", "modes", "--m", "0", "--lambda", "0.7", "--N", "100000")
    doc = json.loads(out)
    fit = doc["reports"][0]
    assert fit["check"] == "mode-exponent"
    assert fit["extra"]["a"]["re"] == pytest.approx(2.3, abs=0.01)
    # a failing record must surface as exit code 1
    assert code == 1 and doc["status"] == "fail"


def test_complex_lambda_parsing(capsys):
    code, out, _ = run(capsys, "hyperboloid", "modes", "--lambda", "0.7+0.2i", "--N", "20000")
    assert json.loads(out)["reports"][0]["check"] == "mode-tail"


def test_project_and_map(capsys):
    assert run(capsys, "project", "stereo")[0] == 0
    assert run(capsys, "map", "hom", "--k", "3")[0] == 0


def test_rep_build_and_profile_show(capsys, sphere_cfg, tmp_path):
    out_path = tmp_path / "rep.csv"
    code, _, _ = run(capsys, "rep", "build", "--config", sphere_cfg, "--format", "csv", "--out", str(out_path))
    assert code == 0
    rows = out_path.read_text().splitlines()
    assert rows[0] == "m,x0,hop_re,hop_im" and len(rows) == 6
    code, out, _ = run(capsys, "profile", "show", "--config", sphere_cfg, "--N", "11")
    assert code == 0 and out.splitlines()[0] == "u,rho" and len(out.splitlines()) == 12


def test_verify_algebra_on_config(capsys, tmp_path):
    path = tmp_path / "p.cfg"
    path.write_text("coeffs=1,0,-1\n")
    code, out, _ = run(capsys, "verify", "algebra", "--config", str(path), "--N", "30", "--nmax", "5")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_verify_product_and_wigner(capsys):
    assert run(capsys, "verify", "product", "--k", "2", "--nmax", "1")[0] == 0
    assert run(capsys, "verify", "wigner-op", "--k", "5/2", "--nmax", "2")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["verify"],
        ["verify", "nothing"],
        ["spectrum", "crystal", "--k", "x"],
        ["hyperboloid", "modes", "--lambda", "1+"],
        ["rep", "build"],
        ["rep", "build", "--config", "/nonexistent.cfg"],
        ["verify", "harmonic", "--nmax", "-1"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bad_config_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("builtin=sphere-family\nalpha_sq=1\nR_sq=6\n")
    code, _, err = run(capsys, "rep", "build", "--config", str(path))
    assert code == 2 and "epsilon" in err
