"""
Tests for the diagonal classification by exact ansatz enumeration.
"""

import logging

import pytest
from dotenv import load_dotenv

from yangian_boundary.classify import (
    classify_diagonal,
    cocycle_admissible,
    expected_d2_constraint,
    format_constraint,
    set_partitions,
    three_class_shapes,
)
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


def test_so4_families():
    result = classify_diagonal(parse_algebra("so:4"))
    logger.info(f"so(4) families: {result.families}")
    assert "D1" in result.families
    assert "D2" in result.families
    assert "D4" in result.families
    assert all(e.verified for e in result.entries if e.family == "D1")


def test_so3_has_no_d1():
    """Odd orthogonal algebras have a middle index, so no split shape survives."""
    result = classify_diagonal(parse_algebra("so:3"))
    assert "D1" not in result.families
    d2 = [e for e in result.entries if e.family == "D2"]
    assert len(d2) == 1
    assert d2[0].kind == "quadric"
    assert d2[0].verified


def test_to_dict_shape():
    payload = classify_diagonal(parse_algebra("so:3")).to_dict()
    assert payload["algebra"] == "so:3"
    assert set(payload) == {"algebra", "families", "entries", "rejected_shapes"}
    assert payload["families"] == sorted(payload["families"])


def test_set_partitions_counts():
    """Stirling numbers S(4,3) = 6 and S(5,3) = 25."""
    assert len(list(set_partitions(4, 3))) == 6
    assert len(list(set_partitions(5, 3))) == 25
    assert list(set_partitions(2, 3)) == []


def test_cocycle_filter():
    spec = parse_algebra("so:5")
    # {0}, {4}, rest: every cross-class triple holds the pair 0, 4
    assert cocycle_admissible(spec, (0, 1, 1, 1, 2))
    # {0}, {1}, rest: 0, 1, 2 are pairwise non-conjugate
    assert not cocycle_admissible(spec, (0, 1, 2, 2, 2))


def test_three_class_search_finds_only_d2_on_so5():
    shapes = list(three_class_shapes(parse_algebra("so:5")))
    assert len(shapes) == 2
    assert all(d2 for _, d2 in shapes)


def test_d2_constraint_from_search_so5():
    spec = parse_algebra("so:5")
    d2 = [e for e in classify_diagonal(spec).entries if e.family == "D2"]
    logger.info(f"so(5) D2 entries: {[(e.shape, e.constraint) for e in d2]}")
    assert len(d2) == 1
    assert d2[0].constraint == format_constraint(expected_d2_constraint(spec))
    assert d2[0].verified


@pytest.mark.slow
def test_d2_constraint_from_search_so6():
    spec = parse_algebra("so:6")
    result = classify_diagonal(spec)
    d2 = [e for e in result.entries if e.family == "D2"]
    assert len(d2) == 1
    assert d2[0].constraint == format_constraint(expected_d2_constraint(spec))
    assert "UNCLASSIFIED" not in result.families
