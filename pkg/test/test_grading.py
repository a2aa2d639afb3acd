"""
Tests for the graded index bookkeeping and the P, Q operator algebra.
"""

import logging
from fractions import Fraction

import pytest
from dotenv import load_dotenv

from yangian_boundary.errors import GradingError, ParseError
from yangian_boundary.grading import (
    CATALOG_ALGEBRAS,
    build_P_Q,
    check_grading_invariants,
    check_operator_algebra,
    identity,
    is_orthosymplectic,
    parse_algebra,
)
from yangian_boundary.ratfunc import RING

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


@pytest.mark.parametrize("text, kappa", [("so:3", Fraction(1, 2)), ("sp:2", Fraction(2)), ("so:4", Fraction(1))])
def test_kappa(text, kappa):
    """kappa = theta0 (m - n - 2) / 2."""
    spec = parse_algebra(text)
    logger.info(f"{spec}: kappa = {spec.kappa}")
    assert spec.kappa == kappa


def test_descriptors_round_trip():
    for text in ("so:5", "sp:4", "osp:1:2", "osp:2:2:-1"):
        assert parse_algebra(text).descriptor == text


def test_series_and_dimension():
    spec = parse_algebra("osp:2:4")
    assert spec.series == "osp"
    assert spec.dim == 6
    assert parse_algebra("sp:6").theta0 == -1
    assert parse_algebra("so:6").series == "so"


@pytest.mark.parametrize("text", CATALOG_ALGEBRAS)
def test_grading_invariants(text):
    """bar is an involution and theta_i theta_{bar i} = theta0 (-1)^[i]."""
    assert check_grading_invariants(parse_algebra(text))


@pytest.mark.parametrize("text", ["so:3", "sp:2", "so:4", "osp:1:2", "osp:2:2"])
def test_operator_algebra(text):
    results = check_operator_algebra(parse_algebra(text))
    logger.info(f"{text}: {results}")
    assert all(results.values()), results


def test_q_squared_so3():
    """Q^2 = 3 Q for so(3)."""
    spec = parse_algebra("so:3")
    _, q = build_P_Q(spec, poly=True)
    assert (q @ q).equals(q.scale(RING(3)))


def test_pq_sp2():
    """PQ = -Q for sp(2)."""
    spec = parse_algebra("sp:2")
    p, q = build_P_Q(spec)
    assert ((p @ q) + q).is_zero()


def test_identity_is_orthosymplectic():
    spec = parse_algebra("osp:1:2")
    assert is_orthosymplectic(identity(spec))


def test_conjugation_so3():
    assert parse_algebra("so:3").conj == (2, 1, 0)


@pytest.mark.parametrize("text", ["so:0", "sp:3", "osp:1:2:2"])
def test_invalid_algebras(text):
    with pytest.raises(GradingError):
        parse_algebra(text)


@pytest.mark.parametrize("text", ["gl:3", "so", "so:x"])
def test_unparseable_algebras(text):
    with pytest.raises(ParseError):
        parse_algebra(text)
