"""Exit-code contract, file artifacts and determinism of the CLI."""

import io
import json
import os
import subprocess
import sys

import pytest

from liesym import names
from liesym.cli import (
    CSV_HEADER,
    EXIT_CHECK,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_POLE,
    EXIT_USAGE,
    main,
)


def run_cli(*argv):
    buf = io.StringIO()
    try:
        code = main(list(argv), stdout=buf)
    except SystemExit as exc:
        code = exc.code
    return code, buf.getvalue()


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


PERTURBED = {
    "vars": ["x"],
    "basis": [["1"], ["x"], ["x^2"]],
    "times": ["t1", "t2"],
    "coeffs": [["1", "2"], ["1/2", "1"], ["-1/3", "-1/6"]],
}


def test_list_covers_every_entry():
    code, out = run_cli("list")
    assert code == EXIT_OK
    for n in names():
        assert n in out
    assert " ode " in out and " pde " in out


def test_show_prints_basis_tensor_and_families():
    code, out = run_cli("show", "riccati")
    assert code == EXIT_OK
    assert "coeffs: @eta(t), 0, 1" in out
    assert "StructureTensor(r=3, c121=1, c132=2, c233=1)" in out
    assert "drift_rescaling" in out


def test_check_algebra_status_lines():
    code, out = run_cli("check-algebra", "--catalog", "riccati")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "closed, r=3, jacobi=0, center=0"
    code, out = run_cli("check-algebra", "--catalog", "painleve_ince")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "closed, r=8, jacobi=0, center=0"


def test_check_algebra_error_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    assert run_cli("check-algebra", "--input", str(bad))[0] == EXIT_PARSE
    notclosed = write_json(tmp_path / "nc.json", {
        "vars": ["x"], "basis": [["1"], ["x^2"]], "coeffs": ["1", "1"]})
    assert run_cli("check-algebra", "--input", notclosed)[0] == EXIT_CHECK
    assert run_cli("check-algebra", "--catalog", "nope")[0] == EXIT_USAGE
    assert run_cli("check-algebra")[0] == EXIT_USAGE


def test_check_algebra_accepts_opaque_coefficients(tmp_path):
    doc = {"vars": ["x"], "basis": [["1"], ["x"]],
           "coeffs": ["@mu(t)", "1 - t"]}
    code, out = run_cli("check-algebra", "--input",
                        write_json(tmp_path / "sys.json", doc))
    assert code == EXIT_OK
    assert "closed, r=2" in out


def test_symmetrize_triple_system(tmp_path):
    out_csv = tmp_path / "s.csv"
    code, out = run_cli("symmetrize", "--catalog", "dbh",
                        "--f-init", "0,1,0,0", "--out", str(out_csv))
    assert code == EXIT_OK
    assert "PASS" in out
    lines = out_csv.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "t,f0,f1,f2,f3,err_est"
    assert len(lines) == 2 + 1001
    gp = out_csv.with_suffix(".csv.gp")
    assert gp.exists() and "s.csv" in gp.read_text()


def test_symmetrize_linear_coefficient_regime(tmp_path):
    code, out = run_cli("symmetrize", "--catalog", "riccati",
                        "--param", "eta=t", "--f-init", "1,0,0,0",
                        "--out", str(tmp_path / "r.csv"))
    assert code == EXIT_OK and "PASS" in out


def test_symmetrize_usage_errors(tmp_path):
    assert run_cli("symmetrize", "--catalog", "riccati",
                   "--step", "0")[0] == EXIT_USAGE
    assert run_cli("symmetrize", "--catalog", "riccati",
                   "--f-init", "1,0")[0] == EXIT_USAGE
    pde_doc = write_json(tmp_path / "p.json", PERTURBED)
    assert run_cli("symmetrize", "--input", pde_doc)[0] == EXIT_USAGE


def test_symmetrize_gauge_override(tmp_path):
    code, out = run_cli("symmetrize", "--catalog", "dbh", "--b0", "2",
                        "--f-init", "1,1,1,1", "--out",
                        str(tmp_path / "g.csv"))
    assert code == EXIT_OK and "PASS" in out


def test_verify_family_and_file(tmp_path):
    assert run_cli("verify", "--catalog", "dbh",
                   "--family", "b0_zero")[0] == EXIT_OK
    cand = write_json(tmp_path / "c.json",
                      {"time": "t", "f": ["1", "t", "0", "1"]})
    code, out = run_cli("verify", "--catalog", "riccati",
                        "--param", "eta=t", "--candidate", cand)
    assert code == EXIT_OK and "exact=True" in out


def test_verify_flags_a_non_symmetry(tmp_path):
    cand = write_json(tmp_path / "c.json",
                      {"time": "t", "f": ["0", "1", "0", "0"]})
    code, out = run_cli("verify", "--catalog", "riccati",
                        "--param", "eta=t", "--candidate", cand)
    assert code == EXIT_CHECK and "FAIL" in out


def test_verify_usage(tmp_path):
    assert run_cli("verify", "--catalog", "dbh")[0] == EXIT_USAGE
    assert run_cli("verify", "--catalog", "dbh",
                   "--family", "nope")[0] == EXIT_USAGE


def test_verify_pde_family():
    assert run_cli("verify", "--catalog", "partial_riccati",
                   "--family", "proportional_direction")[0] == EXIT_OK


def test_integrate_writes_trajectory(tmp_path):
    out_csv = tmp_path / "i.csv"
    code, out = run_cli("integrate", "--catalog", "riccati",
                        "--param", "eta=t", "--x0", "0",
                        "--out", str(out_csv))
    assert code == EXIT_OK
    lines = out_csv.read_text().splitlines()
    assert lines[1] == "t,x,err_est"


def test_integrate_pole_exit(tmp_path):
    code, _ = run_cli("integrate", "--catalog", "riccati",
                      "--param", "eta=1", "--x0", "0",
                      "--t-span", "0:2", "--out", str(tmp_path / "p.csv"))
    assert code == EXIT_POLE


def test_pde_flat_default(tmp_path):
    rep = tmp_path / "r.json"
    code, out = run_cli("pde", "--catalog", "partial_riccati",
                        "--x0", "0.2", "--out", str(tmp_path / "p.csv"),
                        "--report", str(rep))
    assert code == EXIT_OK
    doc = json.loads(rep.read_text())
    assert doc["integrable"] is True
    assert doc["endpoint_gap"] <= 1e-6
    assert doc["curvature"]["exact"] is True
    assert doc["built_curvature"]["max_abs"] == 0.0


def test_pde_perturbed_reports_and_fails(tmp_path):
    src = write_json(tmp_path / "pert.json", PERTURBED)
    rep = tmp_path / "r.json"
    code, out = run_cli("pde", "--input", src, "--x0", "0.2",
                        "--out", str(tmp_path / "p.csv"),
                        "--report", str(rep))
    assert code == EXIT_CHECK
    doc = json.loads(rep.read_text())  # report emitted despite failure
    assert doc["integrable"] is False
    assert doc["endpoint_gap"] >= 1e-3
    assert doc["built_curvature"] is None
    assert doc["exit"] == EXIT_CHECK


def test_pde_refuses_single_time(tmp_path):
    doc = {"vars": ["x"], "basis": [["1"], ["x"], ["x^2"]],
           "times": ["t1"], "coeffs": [["1"], ["0"], ["1"]]}
    src = write_json(tmp_path / "one.json", doc)
    code, _ = run_cli("pde", "--input", src)
    assert code == EXIT_USAGE


def test_pde_custom_path_versus_chord(tmp_path):
    path = write_json(tmp_path / "path.json",
                      {"waypoints": [[0, 0], [1, 0], [1, 1]], "steps": 100})
    rep = tmp_path / "r.json"
    code, _ = run_cli("pde", "--catalog", "partial_riccati", "--x0", "0.2",
                      "--path", path, "--out", str(tmp_path / "p.csv"),
                      "--report", str(rep))
    assert code == EXIT_OK
    assert json.loads(rep.read_text())["endpoint_gap"] <= 1e-6


def test_unknown_subcommand_is_usage():
    assert run_cli("bogus")[0] == EXIT_USAGE


def _run_suite(cwd):
    env = dict(os.environ, LIESYM_SEED="42")
    outputs = []
    cmds = [
        ["list"],
        ["check-algebra", "--catalog", "kummer_schwarz"],
        ["symmetrize", "--catalog", "dbh", "--f-init", "0,1,0,0",
         "--out", "s.csv"],
        ["pde", "--catalog", "partial_riccati", "--x0", "0.2",
         "--out", "p.csv", "--report", "p.json"],
    ]
    for cmd in cmds:
        proc = subprocess.run([sys.executable, "-m", "liesym"] + cmd,
                              cwd=cwd, env=env, capture_output=True)
        assert proc.returncode == 0, (cmd, proc.stderr)
        outputs.append(proc.stdout)
    for fname in ("s.csv", "s.csv.gp", "p.csv", "p.json"):
        outputs.append((cwd / fname).read_bytes())
    return outputs


def test_seeded_runs_are_byte_identical(tmp_path):
    run_a = tmp_path / "a"
    run_b = tmp_path / "b"
    run_a.mkdir()
    run_b.mkdir()
    assert _run_suite(run_a) == _run_suite(run_b)
