"""Command-line interface: spec files, exit codes, reports, determinism."""

import json

import numpy as np
import pytest

from diskmod import SpecFileError, base_curvature, HARDY
from diskmod.cli import canonical_problem_text, main, parse_problem

SPEC_A = """\
[moduleA]
base = hardy
theta1 = poly:[1]
theta2 = poly:[0,1]
"""

SPEC_ISO = SPEC_A + """
[moduleB]
base = hardy
theta1 = poly:[2,1]
theta2 = poly:[0,2,1]
"""

SPEC_CROSS = SPEC_A + """
[moduleB]
base = bergman
theta1 = poly:[1]
theta2 = poly:[0,1]
"""

SPEC_WEIGHTS = """\
[moduleA]
base = bergman(alpha=1)
theta1 = poly:[1]
theta2 = poly:[0,1]

[moduleB]
base = bergman(alpha=2)
theta1 = poly:[1]
theta2 = poly:[0,1]
"""

SPEC_FAIL = """\
[moduleA]
base = hardy
theta1 = poly:[0,1]
theta2 = poly:[0,0,1]
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# --- spec-file parsing ----------------------------------------------------


def test_parse_problem_defaults():
    prob = parse_problem(SPEC_A)
    assert prob.module_b is None
    assert prob.grid.r_max == 0.8 and prob.grid.n_r == 24 and prob.grid.n_theta == 48
    assert prob.tol == 1e-6 and prob.oracle_degree == 120


def test_parse_problem_full_sections():
    text = SPEC_ISO + """
[grid]
r_max = 0.7
n_r = 10
n_theta = 20

[tolerances]
tol = 1e-7
target_gap = 1e-8
fd_step = 5e-4
oracle_degree = 90
"""
    prob = parse_problem(text)
    assert prob.grid.n_r == 10
    assert prob.tol == 1e-7
    assert prob.target_gap == 1e-8
    assert prob.fd_step == 5e-4
    assert prob.oracle_degree == 90


def test_parse_round_trips_on_canonical_form():
    for text in (SPEC_A, SPEC_ISO, SPEC_CROSS, SPEC_WEIGHTS):
        prob = parse_problem(text)
        canon = canonical_problem_text(prob)
        assert parse_problem(canon) == prob
        assert canonical_problem_text(parse_problem(canon)) == canon


def test_parse_rejects_unknown_key():
    with pytest.raises(SpecFileError) as info:
        parse_problem(SPEC_A + "thetaX = poly:[1]\n")
    assert "thetaX" in str(info.value)
    assert info.value.line == 5


def test_parse_rejects_unknown_section():
    with pytest.raises(SpecFileError):
        parse_problem(SPEC_A + "\n[extras]\nfoo = 1\n")


def test_parse_rejects_missing_module():
    with pytest.raises(SpecFileError):
        parse_problem("[grid]\nr_max = 0.5\n")


def test_parse_reports_line_and_column_of_bad_literal():
    with pytest.raises(SpecFileError) as info:
        parse_problem("[moduleA]\nbase = hardy\ntheta1 = poly:[1..5]\ntheta2 = poly:[0,1]\n")
    assert info.value.line == 3
    assert "1..5" in str(info.value)


# --- subcommands ----------------------------------------------------------


def test_corona_command_certifies(tmp_path, capsys):
    path = write(tmp_path, "a.spec", SPEC_A)
    out = str(tmp_path / "report.json")
    assert main(["corona", path, "--out", out]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["corona"]["moduleA"]["epsilon"] >= 1e-6
    text = capsys.readouterr().out
    assert "epsilon" in text


def test_corona_command_honors_target_gap(tmp_path, capsys):
    text = SPEC_A + "\n[tolerances]\ntarget_gap = 0.5\n"
    path = write(tmp_path, "a.spec", text)
    out = str(tmp_path / "report.json")
    assert main(["corona", path, "--out", out]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["corona"]["moduleA"]["epsilon"] >= 0.5


def test_corona_command_failure_witness(tmp_path, capsys):
    path = write(tmp_path, "fail.spec", SPEC_FAIL)
    assert main(["corona", path]) == 2
    assert "FAILED" in capsys.readouterr().out


def test_corona_command_parse_error(tmp_path, capsys):
    path = write(tmp_path, "bad.spec", "[moduleA]\nbase = hardy\ntheta1 = poly:[oops]\ntheta2 = poly:[1]\n")
    with pytest.raises(SystemExit) as info:
        main(["corona", path])
    assert info.value.code == 1
    assert "oops" in capsys.readouterr().err


def test_missing_file_exits_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["corona", "/nonexistent/f.spec"])
    assert info.value.code == 1


def test_curvature_command_constant_pair_matches_base(tmp_path):
    text = """\
[moduleA]
base = hardy
theta1 = poly:[1]
theta2 = poly:[1]
"""
    path = write(tmp_path, "c.spec", text)
    out = str(tmp_path / "field.csv")
    assert main(["curvature", path, "--out", out]) == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    for re, im, val in rows:
        assert val == pytest.approx(base_curvature(HARDY, complex(re, im)), rel=1e-12)
    assert (tmp_path / "field.gp").exists()


def test_curvature_command_value_near_origin(tmp_path):
    path = write(tmp_path, "a.spec", SPEC_A)
    out = str(tmp_path / "field.csv")
    assert main(["curvature", path, "--out", out]) == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    radii = np.hypot(rows[:, 0], rows[:, 1])
    nearest = rows[np.argmin(radii)]
    assert nearest[2] == pytest.approx(-2.0, abs=1e-2)


def test_curvature_command_certification_failure(tmp_path):
    path = write(tmp_path, "fail.spec", SPEC_FAIL)
    assert main(["curvature", path, "--out", str(tmp_path / "x.csv")]) == 2


def test_decide_isomorphic_exit_zero(tmp_path):
    path = write(tmp_path, "iso.spec", SPEC_ISO)
    assert main(["decide", path, "--out", str(tmp_path / "r.json")]) == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["verdict"]["outcome"] == "Isomorphic"
    assert report["verdict"]["max_deviation"] <= 1e-9


def test_decide_cross_base_exit_three(tmp_path):
    path = write(tmp_path, "cross.spec", SPEC_CROSS)
    assert main(["decide", path, "--out", str(tmp_path / "r.json")]) == 3
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["verdict"]["detail"] == "Theorem 4.7"


def test_decide_weight_mismatch_exit_three(tmp_path):
    path = write(tmp_path, "w.spec", SPEC_WEIGHTS)
    assert main(["decide", path, "--out", str(tmp_path / "r.json")]) == 3
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["verdict"]["detail"] == "Theorem 4.5"


def test_decide_needs_two_modules(tmp_path, capsys):
    path = write(tmp_path, "a.spec", SPEC_A)
    assert main(["decide", path]) == 1


def test_decide_inconclusive_exit_four(tmp_path):
    text = SPEC_A + """
[moduleB]
base = hardy
theta1 = poly:[1]
theta2 = poly:[0,1.000002]
"""
    path = write(tmp_path, "inc.spec", text)
    assert main(["decide", path, "--out", str(tmp_path / "r.json")]) == 4


def test_verify_command_all_green(tmp_path, capsys):
    path = write(tmp_path, "a.spec", SPEC_A)
    assert main(["verify", path, "--out", str(tmp_path / "v.json")]) == 0
    report = json.loads((tmp_path / "v.json").read_text())
    checks = report["oracle"]["moduleA"]
    assert all(entry["ok"] for entry in checks.values())
    assert checks["dim_ker"]["values"] == [1, 1, 1, 1, 1]


def test_verify_uncertified_stops_before_oracle(tmp_path, capsys):
    path = write(tmp_path, "fail.spec", SPEC_FAIL)
    assert main(["verify", path]) == 2
    assert "verify" not in capsys.readouterr().out.replace("corona", "")


def test_grid_override_flag(tmp_path):
    path = write(tmp_path, "a.spec", SPEC_A)
    out = str(tmp_path / "f.csv")
    assert main(["curvature", path, "--grid", "0.5,3,4", "--out", out]) == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    assert rows.shape == (12, 3)


def test_deterministic_reports(tmp_path):
    path = write(tmp_path, "iso.spec", SPEC_ISO)
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["decide", path, "--out", str(out1)]) == 0
    assert main(["decide", path, "--out", str(out2)]) == 0
    r1 = json.loads(out1.read_text())
    r2 = json.loads(out2.read_text())
    r1.pop("timing")
    r2.pop("timing")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
