"""
Tests for the K-matrix catalog, the reflection verifiers and the transformations.
"""

import logging
from fractions import Fraction

import pytest
from dotenv import load_dotenv

from yangian_boundary.boundary import (
    Family,
    admissible_families,
    catalog,
    d2_constraint,
    d2_partner,
    d3_parameter,
    d4_degenerations,
    dualize_k,
    make_k,
    parse_boundary,
    signed_permutation,
    to_physical,
    transform_k,
    verify_dual_reflection,
    verify_reflection,
)
from yangian_boundary.errors import (
    ConstraintViolationError,
    InadmissibleFamilyError,
    NotOrthogonalError,
    ParseError,
)
from yangian_boundary.grading import parse_algebra
from yangian_boundary.ratfunc import FIELD, I_UNIT, INFINITY, U, gaussian
from yangian_boundary.rmatrix import Normalization

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


def test_d3_parameter_so6():
    """so(6), (m1, n1) = (1, 0) fixes c = 2."""
    assert d3_parameter(parse_algebra("so:6"), 1, 0) == gaussian(2)


def test_d3_parameter_infinite():
    """so(4), (1, 0): the denominator vanishes."""
    assert d3_parameter(parse_algebra("so:4"), 1, 0) is INFINITY


def test_d2_constraint_so3():
    """c1 = c3 = 4 lies on the so(3) D2 quadric."""
    spec = parse_algebra("so:3")
    assert not d2_constraint(spec, gaussian(4), gaussian(4))
    assert d2_partner(spec, gaussian(4)) == gaussian(4)
    k = make_k(spec, Family.D2, {"c1": "4", "c2": "4"})
    assert verify_reflection(k).passed


def test_d2_off_constraint_rejected():
    with pytest.raises(ConstraintViolationError):
        make_k(parse_algebra("so:3"), Family.D2, {"c1": "4", "c2": "1"})


def test_d2_off_constraint_forced_fails():
    """Negative control: forcing a point off the quadric gives a failing check with a witness."""
    k = make_k(parse_algebra("so:3"), Family.D2, {"c1": "4", "c2": "1"}, force=True)
    report = verify_reflection(k)
    assert not report.passed
    assert report.witness is not None


def test_d1_rejected_on_odd_orthogonal():
    with pytest.raises(InadmissibleFamilyError):
        make_k(parse_algebra("so:5"), Family.D1, {"c": "1/2"})


def test_d4_only_on_so4():
    with pytest.raises(InadmissibleFamilyError):
        make_k(parse_algebra("so:6"), Family.D4, {"c2": "1", "c3": "2"})


def test_d3_fixed_parameter_mismatch():
    with pytest.raises(ConstraintViolationError):
        make_k(parse_algebra("so:6"), Family.D3, {"m1": 1, "n1": 0, "c": "3"})


def test_admissible_families():
    families = admissible_families(parse_algebra("so:5"))
    assert Family.D1 not in families
    assert Family.D2 in families
    assert Family.D3 in families
    assert Family.D4 in admissible_families(parse_algebra("so:4"))
    assert Family.D5 in admissible_families(parse_algebra("so:2"))


@pytest.mark.parametrize("text", ["so:3", "sp:2", "so:4", "osp:1:2"])
def test_catalog_reflection(text):
    spec = parse_algebra(text)
    for k in catalog(spec):
        report = verify_reflection(k)
        logger.info(f"{text} {k.family.value} {k.describe()['params']}: {report.status}")
        assert report.passed, k.describe()


@pytest.mark.parametrize("text", ["so:4", "sp:2"])
def test_catalog_physical_reflection(text):
    for k in catalog(parse_algebra(text), Normalization.PHYSICAL):
        assert verify_reflection(k).passed, k.describe()


def test_xi_and_physical_entries_d1():
    """D1 with c = 1/2: xi = 2, entries -l + 2i on the first half and l + 2i on the rest."""
    spec = parse_algebra("so:4")
    k = make_k(spec, Family.D1, {"c": "1/2"})
    assert k.xi["xi"] == gaussian(2)
    phys = to_physical(k)
    shift = 2 * I_UNIT
    assert not (phys.matrix[0, 0] - (-U + shift))
    assert not (phys.matrix[3, 3] - (U + shift))


def test_xi_parameter_alias():
    spec = parse_algebra("so:4")
    by_c = make_k(spec, Family.D1, {"c": "1/2"})
    by_xi = make_k(spec, Family.D1, {"xi": "2"})
    assert by_c.matrix.equals(by_xi.matrix)


def test_dual_reflection_of_dualized_k():
    spec = parse_algebra("so:4")
    k_plus = dualize_k(make_k(spec, Family.D1, {"c": "1/2"}))
    assert k_plus.role == "plus"
    assert verify_dual_reflection(k_plus).passed


def test_dualize_is_involution():
    spec = parse_algebra("so:4")
    k = to_physical(make_k(spec, Family.D1, {"c": "1/3"}))
    assert dualize_k(dualize_k(k)).matrix.equals(k.matrix)


def test_dual_reflection_needs_physical():
    k = make_k(parse_algebra("so:3"), Family.IDENTITY)
    with pytest.raises(ValueError):
        verify_dual_reflection(k)


def test_d4_degenerations():
    results = d4_degenerations(parse_algebra("so:4"))
    logger.info(f"D4 degenerations: {results}")
    assert all(results.values())


def test_conjugation_preserves_solutions():
    spec = parse_algebra("so:4")
    u = signed_permutation(spec, [1, 0, 3, 2])
    k = transform_k(make_k(spec, Family.D1, {"c": "1/2"}), "conjugate", u)
    assert k.family == Family.CUSTOM
    assert verify_reflection(k).passed
    assert verify_reflection(transform_k(k, "transpose")).passed


def test_non_orthogonal_conjugation_rejected():
    spec = parse_algebra("so:4")
    u = signed_permutation(spec, [0, 1, 2, 3], [2, 1, 1, 1])
    with pytest.raises(NotOrthogonalError):
        transform_k(make_k(spec, Family.IDENTITY), "conjugate", u)


def test_parse_boundary():
    family, params = parse_boundary("D3:m1=1,n1=0")
    assert family == Family.D3
    assert params == {"m1": "1", "n1": "0"}
    assert parse_boundary("identity") == (Family.IDENTITY, {})
    assert parse_boundary("ANTIDIAG:l=2|3")[1] == {"l": ["2", "3"]}


@pytest.mark.parametrize("text", ["Z9:c=1", "D1:c"])
def test_parse_boundary_errors(text):
    with pytest.raises(ParseError):
        parse_boundary(text)


def test_f_infinity_is_minus_one():
    spec = parse_algebra("so:4")
    k = make_k(spec, Family.D1, {"c": "oo"})
    assert not (k.matrix[3, 3] + FIELD.one)
    assert k.xi["xi"] == gaussian(Fraction(0))
