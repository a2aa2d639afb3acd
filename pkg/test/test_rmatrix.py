"""
Tests for the R matrix normalizations, Yang-Baxter and crossing-unitarity verifiers.
"""

import logging

import numpy as np
import pytest
from dotenv import load_dotenv

from yangian_boundary.grading import build_P_Q, parse_algebra
from yangian_boundary.rmatrix import (
    Normalization,
    check_normalizations,
    r_matrix,
    r_numeric,
    verify_crossing_unitarity,
    verify_ybe,
)

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


@pytest.mark.parametrize("text", ["so:3", "sp:2", "so:4", "osp:1:2"])
def test_yang_baxter(text):
    report = verify_ybe(parse_algebra(text))
    logger.info(f"YBE {text}: {report.status} in {report.timing.elapsed_ms} ms")
    assert report.passed
    assert report.witness is None


@pytest.mark.slow
def test_yang_baxter_osp42():
    assert verify_ybe(parse_algebra("osp:4:2")).passed


def test_yang_baxter_mutated_fails_with_witness():
    """Flipping the sign of Q must break the identity."""
    report = verify_ybe(parse_algebra("so:3"), mutate=True)
    assert not report.passed
    assert report.status == "fail"
    assert report.witness is not None
    assert report.witness.row >= 1 and report.witness.col >= 1
    assert report.details["mutated"] is True


@pytest.mark.parametrize("text", ["so:3", "sp:2", "so:4", "sp:4", "osp:1:2"])
def test_crossing_unitarity(text):
    report = verify_crossing_unitarity(parse_algebra(text))
    logger.info(f"Crossing-unitarity {text}: {report.details}")
    assert report.passed


@pytest.mark.parametrize("text", ["so:3", "sp:2", "osp:2:2"])
def test_normalizations_agree(text):
    assert check_normalizations(parse_algebra(text))


def test_physical_r_at_zero_so3():
    """R(0) = -kappa P = -P/2 for so(3)."""
    spec = parse_algebra("so:3")
    p, _ = build_P_Q(spec)
    r0 = r_matrix(spec, Normalization.PHYSICAL).matrix.to_numpy(0.0)
    assert np.allclose(r0, -0.5 * p.to_numpy())
    assert np.allclose(r_numeric(spec, 0.0), r0)


@pytest.mark.parametrize("text", ["so:3", "sp:4", "so:5"])
def test_numeric_unitarity(text):
    """R(l) R(-l) = (l^2 + 1)(l^2 + kappa^2) I."""
    spec = parse_algebra(text)
    lam = 0.37
    kap = float(spec.kappa)
    product = r_numeric(spec, lam) @ r_numeric(spec, -lam)
    expected = (lam ** 2 + 1) * (lam ** 2 + kap ** 2) * np.eye(spec.dim ** 2)
    assert np.allclose(product, expected)


def test_report_json_is_stable():
    spec = parse_algebra("sp:2")
    a = verify_ybe(spec).to_json(stable=True)
    b = verify_ybe(spec).to_json(stable=True)
    assert a == b
    assert '"schema": "yangian-boundary/1"' in a
