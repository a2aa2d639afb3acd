"""
Tests for the command-line surface: exit codes, JSON/CSV output and argument helpers.
"""

import argparse
import json
import logging

import pytest
from dotenv import load_dotenv

from yangian_boundary.cli import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    main,
    occupations_from_arg,
    parse_complex,
    spec_from_args,
)
from yangian_boundary.errors import ParseError
from yangian_boundary.grading import parse_algebra

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    logger.info(f"{' '.join(argv)} -> {code}")
    return code, out, err


def test_verify_ybe_passes(capsys):
    code, out, err = run_cli(capsys, "verify", "ybe", "--algebra", "so:3")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["passed"] is True
    assert report["identity"] == "yang-baxter"
    assert "PASS" in err


def test_verify_ybe_mutated_fails(capsys):
    code, out, err = run_cli(capsys, "verify", "ybe", "--algebra", "sp:2", "--mutate")
    assert code == EXIT_FAIL
    assert json.loads(out)["witness"] is not None
    assert "witness" in err


def test_verify_reflection_compact_and_json(capsys):
    code, _, _ = run_cli(capsys, "verify", "reflection", "--algebra", "so:4", "--k", "D1:c=1/2")
    assert code == EXIT_OK
    boundary = json.dumps({"family": "D2", "params": {"c1": "1/2"}})
    code, out, _ = run_cli(capsys, "verify", "reflection", "--algebra", "so:3", "--k", boundary)
    assert code == EXIT_OK
    assert json.loads(out)["details"]["family"] == "D2"


def test_verify_boundary_file(capsys, tmp_path):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"algebra": "so:4", "family": "D4", "params": {"c2": "1/2", "c3": "1/3"}}))
    code, _, _ = run_cli(capsys, "verify", "reflection", "--algebra", "so:4", "--k", f"@{path}")
    assert code == EXIT_OK


def test_boundary_algebra_mismatch(capsys):
    boundary = json.dumps({"algebra": "so:5", "family": "I"})
    code, _, err = run_cli(capsys, "verify", "reflection", "--algebra", "so:4", "--k", boundary)
    assert code == EXIT_USAGE
    assert "error" in err


def test_bad_algebra_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "verify", "ybe", "--algebra", "gl:3")
    assert code == EXIT_USAGE


def test_missing_subcommand(capsys):
    assert main([]) == EXIT_USAGE


def test_catalog_list(capsys):
    code, out, _ = run_cli(capsys, "catalog", "list", "--algebra", "so:4", "--verify")
    assert code == EXIT_OK
    payload = json.loads(out)["payload"]
    assert "D4" in payload["families"]
    assert all(payload["d4_degenerations"].values())
    assert all(s["reflection"] == "pass" for s in payload["solutions"])


def test_spectrum_by_rank(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--series", "so", "--k", "1", "--sites", "2")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["algebra"] == "so:3"
    assert report["payload"]["dimension"] == 9


def test_spectrum_csv(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--algebra", "so:3", "--sites", "1", "--lambda", "0.3+0.1i", "--csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].startswith("state")
    assert len(lines) == 4


def test_bethe_vacuum(capsys):
    code, out, _ = run_cli(capsys, "bethe", "solve", "--algebra", "so:5", "--sites", "2", "--M", "0")
    assert code == EXIT_OK
    states = json.loads(out)["payload"]["states"]
    assert len(states) == 1
    assert states[0]["energy"] == 0.0


def test_thermo_kernels(capsys):
    code, out, _ = run_cli(capsys, "thermo", "kernels", "--algebra", "so:5", "--omega", "0")
    assert code == EXIT_OK
    assert json.loads(out)["payload"]["kernel"] == [[2.0, -2.0], [-2.0, 4.0]]


def test_thermo_grid_csv(capsys):
    code, out, _ = run_cli(capsys, "thermo", "kernels", "--series", "sp", "--n", "4", "--csv",
                           "--omega-start", "0.1", "--omega-stop", "0.5", "--omega-step", "0.1")
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 6


def test_scatter_bulk(capsys):
    code, out, _ = run_cli(capsys, "scatter", "bulk", "--series", "so", "--n", "6", "--lambda", "0.4")
    assert code == EXIT_OK
    assert json.loads(out)["payload"]["modulus"] == pytest.approx(1.0)


def test_scatter_boundary(capsys):
    code, out, _ = run_cli(capsys, "scatter", "boundary", "--series", "so", "--n", "6", "--family", "D1",
                           "--xi", "xi=1.5", "--lambda", "0.4")
    assert code == EXIT_OK
    assert json.loads(out)["payload"]["boundary"]["xi_prime"] == {"xi": 1.5}


def test_scatter_boundary_inadmissible(capsys):
    code, _, _ = run_cli(capsys, "scatter", "boundary", "--series", "so", "--n", "5", "--family", "D1",
                         "--xi", "xi=1")
    assert code == EXIT_USAGE


def test_selftest_quick(capsys):
    code, out, _ = run_cli(capsys, "selftest", "--quick")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["kind"] == "selftest"
    assert report["checks"]


def test_invalid_run_options(capsys):
    code, _, _ = run_cli(capsys, "verify", "ybe", "--algebra", "so:3", "--tol", "-1")
    assert code == EXIT_USAGE


def test_parse_complex():
    assert parse_complex("0.3+0.1i") == 0.3 + 0.1j
    assert parse_complex("2") == 2
    with pytest.raises(ParseError):
        parse_complex("abc")


def test_spec_from_rank():
    args = argparse.Namespace(algebra=None, series="so", n=None, k=2, even=True)
    assert spec_from_args(args).descriptor == "so:4"
    args = argparse.Namespace(algebra=None, series="sp", n=None, k=2, even=False)
    assert spec_from_args(args).descriptor == "sp:4"
    with pytest.raises(UsageError):
        spec_from_args(argparse.Namespace(algebra=None, series=None))


def test_occupations_from_arg():
    spec = parse_algebra("so:5")
    assert occupations_from_arg(spec, "2,1") == {"1": 2, "2": 1}
    assert occupations_from_arg(spec, '{"2": 1}') == {"2": 1}
    with pytest.raises(UsageError):
        occupations_from_arg(spec, "1,1,1")


def test_unbalanced_boundary_parameter(capsys):
    code, _, err = run_cli(capsys, "verify", "reflection", "--algebra", "so:4", "--k", "D1:c=(1")
    assert code == EXIT_USAGE
    assert "error" in err
