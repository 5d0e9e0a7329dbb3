import json
from pathlib import Path
from typing import Any, List

import pytest
from typer.testing import CliRunner

from confalg.errors import EXIT_CHECK_FAILED, EXIT_USAGE
from confalg.main import app, run_command
from confalg.spec_file import parse_spec

runner = CliRunner()

#: Keeps logs and progress bars out of the captured output, so JSON reports parse
QUIET = ["--log-level", "ERROR"]

def invoke(args: List[str]) -> Any:
    """
    Runs the CLI, expecting success, and returns the JSON report it printed
    """
    result = runner.invoke(app, [*QUIET, *args, "--report", "json", "--no-timing"], catch_exceptions=False)
    if result.exit_code != 0:
        raise Exception(result.output)
    return json.loads(result.output)

def test_example_final():
    report = invoke(["example", "final", "--alpha", "1/2"])
    assert report["verdict"] == "pass"
    assert report["command"] == ["example", "final", "--alpha", "1/2"]
    assert "[e1_l e2]" in report["displays"]["poisson conformal"]
    assert "Delta(e2*)" in report["displays"]["coboundary coproducts"]
    assert "timing" not in report

def test_example_polyx():
    report = invoke(["example", "polyx", "--q", "0", "--degree", "1"])
    assert [c["name"] for c in report["checks"]] == ["polyx", "poisson-conformal", "poisson-conformal-bi", "polyx-display"]
    assert report["notes"] == []

@pytest.mark.parametrize("kind", ["poisson-conformal", "poisson-conformal-bi", "lie-co-conformal"])
def test_check_zero(specs: Path, kind: str):
    report = invoke(["check", str(specs / "zero.json"), "--kind", kind])
    assert report["checks"][0]["verdict"] == "pass"

def test_check_fin(specs: Path):
    report = invoke(["check", str(specs / "final_zinbiel.json"), "--kind", "derivation", "--op", "succ"])
    assert report["verdict"] == "pass"

def test_construct_chain(specs: Path, tmp_path: Path):
    """
    Zinbiel algebra with a derivation → pre-PGD-algebra → pre-Poisson conformal algebra → canonical r-matrix,
    then the r-matrix is checked
    """
    pre_pgd, pre_poisson, double = tmp_path / "pre_pgd.json", tmp_path / "pre_poisson.json", tmp_path / "double.json"
    invoke(["construct", "zinbiel-derivation", str(specs / "final_zinbiel.json"), "-o", str(pre_pgd)])
    invoke(["construct", "pre-poisson-conformal", str(pre_pgd), "-o", str(pre_poisson)])
    assert parse_spec(pre_poisson).require_conf().rank == 3
    invoke(["construct", "canonical-solution", str(pre_poisson), "-o", str(double)])
    spec = parse_spec(double)
    assert spec.require_conf().rank == 6
    assert spec.require_rmatrix()[(0, 3)] == 1
    report = invoke(["ybe", str(double)])
    assert report["verdict"] == "pass"
    assert [c["name"] for c in report["checks"]] == ["pcybe", "coboundary", "r-matrix-o-operator"]

def test_deform_limit(specs: Path):
    report = invoke(["deform", "limit", str(specs / "current_deformation.json")])
    assert report["verdict"] == "pass"
    assert report["displays"]["semi-classical limit"]["[e1_l e2]"] == "e2"

def test_deform_limit_too_short(specs: Path):
    result = runner.invoke(app, [*QUIET, "deform", "limit", str(specs / "current_deformation.json"), "--order", "2"])
    assert result.exit_code == EXIT_USAGE

def test_failing_check(tmp_path: Path):
    """
    `[b λ b] = (∂ + 3λ)b` is not a Lie conformal algebra, so the command reports a failure
    """
    spec = tmp_path / "weight3.json"
    spec.write_text(json.dumps({"conf": {"rank": 1, "ops": {"bracket": [[1, 1, 1, "d + 3*l"]]}}}))
    result = runner.invoke(app, [*QUIET, "check", str(spec), "--kind", "lie-conformal", "--report", "json"])
    assert result.exit_code == EXIT_CHECK_FAILED
    report = json.loads(result.output)
    assert report["verdict"] == "fail"
    assert report["checks"][0]["witnesses"][0]["identity"] == "skew-symmetry"

@pytest.mark.parametrize("text", ["{", "{}", '{"conf": {"rank": 1, "ops": {"bracket": [[1, 1, 1, "1/0"]]}}}'])
def test_malformed_file(tmp_path: Path, text: str):
    spec = tmp_path / "bad.json"
    spec.write_text(text)
    result = runner.invoke(app, [*QUIET, "check", str(spec), "--kind", "lie-conformal"])
    assert result.exit_code == EXIT_USAGE

def test_missing_operation(specs: Path):
    result = runner.invoke(app, [*QUIET, "check", str(specs / "virasoro.json"), "--kind", "poisson-conformal"])
    assert result.exit_code == EXIT_USAGE

def test_unknown_kind(specs: Path):
    result = runner.invoke(app, [*QUIET, "check", str(specs / "zero.json"), "--kind", "octonion"])
    assert result.exit_code == EXIT_USAGE
    assert run_command([*QUIET, "check", str(specs / "zero.json"), "--kind", "octonion"]) == EXIT_USAGE

def test_unknown_pipeline(specs: Path, tmp_path: Path):
    out = tmp_path / "out.json"
    result = runner.invoke(app, [*QUIET, "construct", "octonion", str(specs / "zero.json"), "-o", str(out)])
    assert result.exit_code == EXIT_USAGE
    assert not out.exists()

def test_json_is_deterministic():
    args = ["example", "polyx", "--q", "sym", "--degree", "1"]
    first = runner.invoke(app, [*QUIET, *args, "--report", "json", "--no-timing"], catch_exceptions=False)
    second = runner.invoke(app, [*QUIET, *args, "--report", "json", "--no-timing"], catch_exceptions=False)
    assert first.exit_code == second.exit_code
    assert first.output == second.output

def test_text_report(specs: Path):
    result = runner.invoke(app, [*QUIET, "check", str(specs / "virasoro.json"), "--kind", "lie-conformal"], catch_exceptions=False)
    if result.exit_code != 0:
        raise Exception(result.output)
    assert "lie-conformal: pass" in result.output

def test_run_command(specs: Path):
    assert run_command([*QUIET, "check", str(specs / "zero.json"), "--kind", "poisson-conformal", "--no-timing"]) == 0
