"""
Tests for exact rational functions over Q(i) and the sparse RatMatrix.
"""

import logging
from fractions import Fraction

import numpy as np
import pytest
from dotenv import load_dotenv

from yangian_boundary.errors import ParseError, PoleError
from yangian_boundary.grading import identity, parse_algebra
from yangian_boundary.ratfunc import (
    FIELD,
    INFINITY,
    RU,
    RV,
    U,
    V,
    derivative,
    e_factor,
    format_ratfunc,
    gaussian,
    parse_param,
    parse_ratfunc,
    ratfunc_eval,
    ratfunc_eval_exact,
    ratfunc_normalize,
    substitute,
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


def test_normalize_cancels_common_factor():
    """(u^2 - 1)/(u - 1) is u + 1."""
    f = ratfunc_normalize(parse_ratfunc("u^2 - 1"), parse_ratfunc("u - 1"))
    logger.info(f"Normalized: {format_ratfunc(f)}")
    assert not (f - (U + 1))
    assert f.denom.is_ground


def test_zero_denominator_rejected():
    with pytest.raises(PoleError):
        ratfunc_normalize(U, FIELD.zero)


def test_e_factor_at_origin():
    """e_1(0) = -1."""
    assert ratfunc_eval(e_factor(1), 0) == pytest.approx(-1.0)


@pytest.mark.parametrize("x", [1, Fraction(3, 2), gaussian(0, 1)])
def test_e_factor_inverse(x):
    """e_x e_{-x} = 1."""
    product = e_factor(x) * e_factor(-gaussian(x))
    assert not (product - FIELD.one)


def test_e_zero_is_one():
    assert not (e_factor(0) - FIELD.one)


def test_parse_implicit_multiplication_and_alias():
    assert not (parse_ratfunc("2l(l+1)") - 2 * U * (U + 1))
    assert not (parse_ratfunc("(1+2u)/(1-2u)") - (1 + 2 * U) / (1 - 2 * U))


def test_parse_error():
    with pytest.raises(ParseError):
        parse_ratfunc("(((u")
    with pytest.raises(ParseError):
        parse_ratfunc("(1+u")


def test_eval_at_pole():
    with pytest.raises(PoleError):
        ratfunc_eval(parse_ratfunc("1/(u-1)"), 1.0)


def test_exact_evaluation():
    value = ratfunc_eval_exact(parse_ratfunc("1/(u-1)"), 3)
    assert value == gaussian(Fraction(1, 2))
    with pytest.raises(PoleError):
        ratfunc_eval_exact(parse_ratfunc("1/(u-i)"), gaussian(0, 1))


def test_parse_param():
    assert parse_param("oo") is INFINITY
    assert parse_param("1/2") == gaussian(Fraction(1, 2))
    assert parse_param("0.25") == gaussian(Fraction(1, 4))
    assert parse_param("1+2i") == gaussian(1, 2)


def test_substitute_and_derivative():
    shifted = substitute(U * U, u_to=RU + RV)
    assert not (shifted - (U + V) ** 2)
    assert not (derivative(U ** 3) - 3 * U ** 2)
    assert not (derivative(U * V, "v") - U)


def test_derivative_of_quotient():
    f = parse_ratfunc("(1+2u)/(1-2u)")
    assert not (derivative(f) - 4 / (1 - 2 * U) ** 2)
    assert not (derivative(parse_ratfunc("1/(u-1)")) + 1 / (U - 1) ** 2)


def test_format_physical_uses_l():
    assert "l" in format_ratfunc(U + 1, physical=True)
    assert "u" not in format_ratfunc(U + 1, physical=True)


def test_ratmatrix_identity_numeric():
    spec = parse_algebra("so:3")
    eye = identity(spec)
    assert np.allclose(eye.to_numpy(0.3), np.eye(3))
    assert eye.nnz() == 3
    assert (eye - eye).is_zero()
