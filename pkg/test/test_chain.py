"""
Tests for the open-chain transfer matrix, its symmetries and the dense spectrum.
"""

import logging

import numpy as np
import pytest
from dotenv import load_dotenv

from yangian_boundary.boundary import Family, make_k
from yangian_boundary.chain import (
    ChainContext,
    estimate_bytes,
    hamiltonian,
    hermiticity_defect,
    spectrum,
    transfer_matrix,
    transfer_matrix_exact,
    verify_cartan_invariance,
    verify_chain_crossing,
    verify_commuting,
    verify_pseudo_vacuum,
)
from yangian_boundary.errors import BudgetExceededError, SeriesMismatchError
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


@pytest.mark.parametrize("text, value", [("so:3", 0.75), ("so:4", 4.0)])
def test_transfer_matrix_at_zero(text, value):
    """One site, K = 1: t(0) = kappa^2 dim I."""
    ctx = ChainContext(parse_algebra(text), 1)
    t0 = transfer_matrix(ctx, 0.0)
    logger.info(f"{text}: t(0) diagonal {np.diag(t0)}")
    assert np.allclose(t0, value * np.eye(ctx.dim))


def test_exact_and_numeric_agree():
    spec = parse_algebra("so:3")
    ctx = ChainContext(spec, 2, make_k(spec, Family.D2, {"c1": "1/2"}))
    exact = transfer_matrix_exact(ctx).to_numpy(0.4 + 0.2j)
    assert np.allclose(exact, transfer_matrix(ctx, 0.4 + 0.2j))


@pytest.mark.parametrize("text, boundary", [
    ("so:4", {"family": Family.D1, "params": {"c": "1/2"}}),
    ("sp:2", {"family": Family.D1, "params": {"c": "1/3"}}),
    ("so:3", {"family": Family.D2, "params": {"c1": "1/2"}}),
])
def test_commuting_and_pseudo_vacuum(text, boundary):
    spec = parse_algebra(text)
    ctx = ChainContext(spec, 2, make_k(spec, boundary["family"], boundary["params"]))
    commuting = verify_commuting(ctx)
    vacuum = verify_pseudo_vacuum(ctx)
    logger.info(f"{text}: commutator {commuting.details['max_commutator']:.2e}, vacuum exact={vacuum.details['exact']}")
    assert commuting.passed
    assert vacuum.passed


def test_pseudo_vacuum_numeric_path():
    spec = parse_algebra("so:5")
    ctx = ChainContext(spec, 2, make_k(spec, Family.D3, {"m1": 1, "n1": 0}))
    report = verify_pseudo_vacuum(ctx, exact=False)
    assert report.passed
    assert report.details["max_relative_error"] < 1e-10


def test_chain_crossing_identity():
    ctx = ChainContext(parse_algebra("so:3"), 1)
    assert verify_chain_crossing(ctx).passed


def test_cartan_invariance_diagonal_boundary():
    spec = parse_algebra("so:4")
    ctx = ChainContext(spec, 2, make_k(spec, Family.D1, {"c": "1/2"}))
    assert verify_cartan_invariance(ctx).passed


def test_spectrum_record():
    spec = parse_algebra("so:3")
    ctx = ChainContext(spec, 2)
    record = spectrum(ctx)
    assert record.dimension == ctx.dim
    assert record.unconverged() == []
    assert sum(m for _, m in record.multiplicities()) == ctx.dim
    assert "state" in record.to_csv().splitlines()[0]
    payload = record.to_dict()
    assert payload["dimension"] == 9
    assert len(payload["eigenvalues"][0]) == len(payload["lambdas"])


def test_hamiltonian_is_hermitian():
    ctx = ChainContext(parse_algebra("so:3"), 3)
    h = hamiltonian(ctx)
    assert h.shape == (27, 27)
    assert hermiticity_defect(h) < 1e-6


def test_budget_exceeded():
    spec = parse_algebra("so:8")
    assert estimate_bytes(spec, 6) > 1024
    with pytest.raises(BudgetExceededError):
        ChainContext(spec, 6, mem_budget_bytes=1024)


def test_exact_transfer_matrix_limited():
    with pytest.raises(BudgetExceededError):
        transfer_matrix_exact(ChainContext(parse_algebra("so:3"), 3))


def test_osp_chain_rejected():
    with pytest.raises(SeriesMismatchError):
        ChainContext(parse_algebra("osp:1:2"), 1)
