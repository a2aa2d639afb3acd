"""
Tests for the hole scattering amplitudes: quadrature engine, bulk unitarity,
closed forms against integral representations, duality and K-matrix ratios.
"""

import logging
import math

import pytest
from dotenv import load_dotenv

from yangian_boundary.boundary import Family, make_k
from yangian_boundary.errors import (
    ConstraintViolationError,
    GammaPoleError,
    InadmissibleFamilyError,
    QuadratureError,
    SeriesMismatchError,
)
from yangian_boundary.grading import parse_algebra
from yangian_boundary.scattering import (
    AmplitudeSpec,
    boundary_ratios,
    bulk_summary,
    check_duplication,
    check_gamma_identity,
    cross_check,
    decay_cutoff,
    gamma_identity_integral,
    gamma_identity_value,
    k0_closed,
    k0_gamma_terms,
    k1_closed,
    log_gamma,
    pv_fourier_integral,
    sb_factor,
    scatter_summary,
    verify_bulk_unitarity,
    verify_duality,
    verify_kmatrix_ratios,
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


def test_gamma_identity_at_one():
    """ln Gamma(1/2) - ln Gamma(1) = ln sqrt(pi)."""
    assert gamma_identity_value(1.0) == pytest.approx(0.572365, abs=1e-6)
    assert gamma_identity_integral(1.0) == pytest.approx(0.5 * math.log(math.pi), abs=1e-8)


def test_gamma_identity_report():
    report = check_gamma_identity()
    logger.info(f"Gamma identity max error {report.details['max_error']:.2e}")
    assert report.passed


def test_gamma_identity_domain():
    with pytest.raises(ValueError):
        gamma_identity_integral(-1.0)


def test_duplication():
    assert check_duplication().passed


@pytest.mark.parametrize("z", [0, -2])
def test_log_gamma_poles(z):
    with pytest.raises(GammaPoleError):
        log_gamma(z)


def test_pv_integral_of_even_exponential():
    """PV int dw/w e^{-|w|} e^{-i w l} = -2i arctan(l)."""
    value = pv_fourier_integral(lambda w: math.exp(-abs(w)), 0.7)
    assert value.real == pytest.approx(0.0, abs=1e-10)
    assert value.imag == pytest.approx(-2.0 * math.atan(0.7), abs=1e-9)


def test_non_decaying_integrand():
    with pytest.raises(QuadratureError):
        decay_cutoff(lambda w: 1.0)


def test_sb_factor_is_a_phase():
    assert abs(sb_factor(2, 0.6)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("series, n, matrix", [("so", 5, True), ("so", 6, True), ("so", 8, False), ("sp", 4, False)])
def test_bulk_unitarity(series, n, matrix):
    report = verify_bulk_unitarity(series, n, matrix=matrix)
    logger.info(f"Bulk unitarity {series}({n}): {report.details['max_error']:.2e}")
    assert report.passed


def test_bulk_summary():
    summary = bulk_summary("so", 6, 0.4)
    assert summary["modulus"] == pytest.approx(1.0, abs=1e-10)
    assert summary["unitarity"] < 1e-10


def test_d1_cross_check_so6():
    report = cross_check(AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5}), part="k1")
    logger.info(f"so(6) D1 k1 deviation {report.details['max_deviation']:.2e}")
    assert report.passed


def test_k0_gamma_terms_so6():
    """(1 - e^{-4w}) Phi0^ for so(6) is a finite exponential sum with zero total weight."""
    terms = dict((c, coef) for coef, c in k0_gamma_terms("so", 6))
    assert terms == pytest.approx({0.5: -2.0, 1.0: 1.0, 2.0: 1.0, 2.5: 2.0, 3.0: -1.0, 4.0: -1.0})
    assert sum(terms.values()) == pytest.approx(0.0)


def test_k0_cross_check_so6():
    aspec = AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5})
    report = cross_check(aspec, part="k0")
    logger.info(f"so(6) k0 deviation {report.details['max_deviation']:.2e}")
    assert report.passed
    assert report.details["max_deviation"] < 1e-6
    assert cross_check(aspec, part="total").passed


def test_k0_closed_is_a_phase():
    for lam in (0.2, 0.7, 1.3):
        assert abs(k0_closed(AmplitudeSpec("so", 6, lam=lam))) == pytest.approx(1.0, abs=1e-12)
    assert k0_closed(AmplitudeSpec("so", 6, lam=0.0)) == 1.0


def test_k0_without_gamma_product():
    """so(3) has a double pole in its resolvent and sp has no closed k0."""
    assert k0_gamma_terms("so", 3) is None
    assert k0_closed(AmplitudeSpec("sp", 4, lam=0.4)) is None
    with pytest.raises(InadmissibleFamilyError):
        cross_check(AmplitudeSpec("so", 3), part="k0")


def test_d4_cross_check():
    """Each spinor sea reproduces its closed factor, so the product does too."""
    aspec = AmplitudeSpec("so", 4, Family.D4, {"xi_minus": 1.3, "xi_plus": 0.8})
    report = cross_check(aspec, part="k1")
    assert report.passed


def test_d1_duality_so6():
    assert verify_duality(AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5})).passed


def test_identity_k1():
    assert k1_closed(AmplitudeSpec("so", 5, lam=0.3)) == 1.0


@pytest.mark.parametrize("text, family, params", [
    ("so:4", Family.D1, {"c": "1/2"}),
    ("so:5", Family.D2, {"c1": "1/2"}),
    ("so:6", Family.D3, {"m1": 1, "n1": 0}),
    ("so:4", Family.D4, {"c2": "1/2", "c3": "1/3"}),
])
def test_kmatrix_ratios(text, family, params):
    k = make_k(parse_algebra(text), family, params)
    report = verify_kmatrix_ratios(k)
    logger.info(f"{text} {family.value} ratios: {report.details['max_error']:.2e}")
    assert report.passed


def test_from_kmatrix_renormalization():
    spec = parse_algebra("so:4")
    aspec = AmplitudeSpec.from_kmatrix(make_k(spec, Family.D1, {"c": "1/2"}), 0.5)
    assert aspec.xi_prime["xi"] == pytest.approx(1.5)
    assert aspec.thermo_context().xi["xi"] == pytest.approx(2.0)
    d2 = AmplitudeSpec.from_kmatrix(make_k(parse_algebra("so:5"), Family.D2, {"c1": "1/2"}))
    assert d2.xi_prime["xi1"] + d2.xi_prime["xin"] == pytest.approx(d2.kappa - 1.0)


def test_d3_fixes_xi():
    aspec = AmplitudeSpec("so", 6, Family.D3, m=1)
    assert aspec.xi_prime["xi"] == pytest.approx(0.5)


def test_ratios_at_origin():
    """-e_{2 xi'}(0) = 1."""
    ratios = boundary_ratios(AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5}), 0.0)
    assert ratios["beta/alpha"] == pytest.approx(1.0)


@pytest.mark.parametrize("kwargs, error", [
    (dict(series="so", n=5, family=Family.D1, xi_prime={"xi": 1.0}), InadmissibleFamilyError),
    (dict(series="sp", n=4, family=Family.D2, xi_prime={"xi1": 1.0, "xin": 1.0}), InadmissibleFamilyError),
    (dict(series="so", n=5, family=Family.D2, xi_prime={"xi1": 1.0, "xin": 1.0}), ConstraintViolationError),
    (dict(series="so", n=6, family=Family.D3), InadmissibleFamilyError),
    (dict(series="so", n=6, family=Family.D3, m=1, xi_prime={"xi": 2.0}), ConstraintViolationError),
    (dict(series="so", n=6, family=Family.D4, xi_prime={"xi_minus": 1.0, "xi_plus": 1.0}), InadmissibleFamilyError),
    (dict(series="so", n=6, family=Family.D1), InadmissibleFamilyError),
    (dict(series="gl", n=3), SeriesMismatchError),
])
def test_amplitude_spec_validation(kwargs, error):
    with pytest.raises(error):
        AmplitudeSpec(**kwargs)


def test_scatter_summary_shape():
    summary = scatter_summary(AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5}, lam=0.4))
    assert summary["closed"]["source"] == "closed"
    assert summary["closed"]["total"] is not None
    assert "beta/alpha" in summary["ratios"]
