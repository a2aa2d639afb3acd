"""
Tests for the Bethe equations, eigenvalue assembly and energies.
"""

import logging
import math

import numpy as np
import pytest
from dotenv import load_dotenv

from yangian_boundary.bethe import (
    BetheState,
    bae_residual,
    boundary_string_heights,
    boundary_factors,
    eigenvalue_profile,
    energy,
    energy_scale,
    match_states,
    pole_cancellation,
    quantum_numbers,
    scan_states,
    seed_configurations,
    solve_bae,
    vacuum_state,
)
from yangian_boundary.boundary import Family, make_k
from yangian_boundary.chain import ChainContext, pseudo_vacuum_eigenvalue, spectrum
from yangian_boundary.eigenfunctions import lambda_samples, series_info
from yangian_boundary.errors import RootCollisionError, SeriesMismatchError
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


def test_energy_single_root():
    """E = -a_1(1/2) = -1/pi."""
    state = BetheState(parse_algebra("so:5"), 2, roots={"1": [0.5]})
    assert energy(state) == pytest.approx(-1.0 / math.pi)


def test_energy_sp2_uses_a2():
    """E = -a_2(1) = -1/(2 pi) on sp(2), against -a_1(1) = -1/(2.5 pi) elsewhere."""
    spec = parse_algebra("sp:2")
    assert energy_scale(series_info(spec)) == 2
    assert energy_scale(series_info(parse_algebra("sp:4"))) == 1
    state = BetheState(spec, 2, roots={"1": [1.0]})
    assert energy(state) == pytest.approx(-1.0 / (2.0 * math.pi))


def test_energy_vacuum():
    assert energy(vacuum_state(parse_algebra("so:5"), 2)) == 0.0


def test_quantum_numbers_vacuum():
    info = series_info(parse_algebra("so:5"))
    assert quantum_numbers(info, 2, {}) == [2, 0]
    assert quantum_numbers(info, 2, {"1": 1}) == [1, 1]


def test_seas():
    assert series_info(parse_algebra("so:8")).seas == ["1", "2", "+", "-"]
    assert series_info(parse_algebra("sp:6")).seas == ["1", "2", "3"]
    assert series_info(parse_algebra("so:7")).seas == ["1", "2", "3"]


def test_vacuum_profile_matches_pseudo_vacuum():
    spec = parse_algebra("so:5")
    k = make_k(spec, Family.D3, {"m1": 1, "n1": 0})
    state = vacuum_state(spec, 2, k)
    ctx = ChainContext(spec, 2, k)
    lam = lambda_samples()[0]
    assert eigenvalue_profile(state, [lam])[0] == pytest.approx(pseudo_vacuum_eigenvalue(ctx, lam))


def test_vacuum_pole_cancellation():
    result = pole_cancellation(vacuum_state(parse_algebra("so:5"), 2))
    logger.info(f"Vacuum pole growth: {result['max_growth']:.3f}")
    assert result["passed"]


def test_solve_one_root_matches_spectrum():
    spec = parse_algebra("so:3")
    states = solve_bae(spec, 2, {"1": 1})
    assert states
    for state in states:
        assert state.converged
        assert float(np.max(np.abs(bae_residual(state)))) < 1e-9
    record = spectrum(ChainContext(spec, 2))
    result = match_states(states, record)
    logger.info(f"Matched {result['matched']}, coverage {result['coverage']:.3f}")
    assert result["unmatched"] == []


def test_solve_without_roots_returns_vacuum():
    states = solve_bae(parse_algebra("sp:4"), 3, {})
    assert len(states) == 1
    assert states[0].total_roots == 0
    assert states[0].converged


def test_root_collision():
    state = BetheState(parse_algebra("so:5"), 2, roots={"1": [0.4, 0.4]})
    with pytest.raises(RootCollisionError):
        bae_residual(state)


def test_unknown_sea():
    with pytest.raises(SeriesMismatchError):
        BetheState(parse_algebra("so:5"), 2, roots={"+": [0.4]})


def test_d2_on_so4_routed_to_d4():
    spec = parse_algebra("so:4")
    with pytest.raises(SeriesMismatchError):
        boundary_factors(series_info(spec), make_k(spec, Family.D2, {"c1": "1/2"}))


def test_to_dict():
    payload = vacuum_state(parse_algebra("sp:2"), 2).to_dict()
    assert payload["series"] == "sp(1)"
    assert payload["occupations"] == {"1": 0}
    assert payload["family"] == "I"


def test_boundary_string_heights():
    spec = parse_algebra("sp:2")
    info = series_info(spec)
    factors = boundary_factors(info, make_k(spec, Family.D1, {"xi": "7/4"}))
    heights = boundary_string_heights(info, factors)
    assert set(heights) == {"1"}
    assert np.all(heights["1"] > 0)
    seeds = seed_configurations(info, {"1": 2}, count=3, heights=heights)
    imaginary = [sd for sd in seeds if np.any(np.abs(sd["1"].real) < 1e-12)]
    assert len(imaginary) == len(heights["1"]) + math.comb(len(heights["1"]), 2)
    assert boundary_string_heights(info, []) == {}


def test_boundary_bound_state_sp2():
    """With D1 the second one-root state has its root on the imaginary axis."""
    spec = parse_algebra("sp:2")
    k = make_k(spec, Family.D1, {"xi": "7/4"})
    states = solve_bae(spec, 2, {"1": 1}, k, seed_count=20)
    roots = [complex(s.roots["1"][0]) for s in states]
    logger.info(f"sp(2) D1 one-root states: {roots}")
    assert len(states) >= 2
    assert any(abs(z.real) < 1e-8 and z.imag > 0 for z in roots)
    result = match_states(states, spectrum(ChainContext(spec, 2, k)))
    assert result["unmatched"] == []


@pytest.mark.slow
@pytest.mark.parametrize("algebra, family, params", [
    ("sp:2", Family.IDENTITY, {}),
    ("sp:2", Family.D1, {"xi": "7/4"}),
    ("so:4", Family.D4, {"xi_minus": "2", "xi_plus": "3"}),
    ("so:5", Family.IDENTITY, {}),
])
def test_spectrum_coverage(algebra, family, params):
    spec = parse_algebra(algebra)
    k = None if family == Family.IDENTITY else make_k(spec, family, params)
    states = scan_states(spec, 2, k, max_total=6, seed_count=60)
    result = match_states(states, spectrum(ChainContext(spec, 2, k)))
    logger.info(f"{algebra} {family.value}: coverage {result['coverage']:.3f} of {result['dimension']}")
    assert result["coverage"] >= 0.9
