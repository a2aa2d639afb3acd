"""
Tests for the Fourier-space kernels, resolvents, hole energies and density corrections.
"""

import logging
import math

import numpy as np
import pytest
from dotenv import load_dotenv

from yangian_boundary.boundary import Family, make_k
from yangian_boundary.errors import ConstraintViolationError, InadmissibleFamilyError, SeriesMismatchError
from yangian_boundary.grading import parse_algebra
from yangian_boundary.thermo import (
    KernelContext,
    density_correction_hat,
    duality_difference,
    expected_duality_difference,
    hole_energy_consistency,
    hole_energy_hat,
    inversion_defect,
    kernel_hat,
    kernel_summary,
    omega_grid,
    resolvent_hat,
    sweep_frame,
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


def test_kernel_so5_at_zero():
    ctx = KernelContext.for_series("so", 5)
    assert np.allclose(kernel_hat(ctx, 0.0), [[2, -2], [-2, 4]])


def test_kernel_sp4_at_two():
    ctx = KernelContext.for_series("sp", 4)
    kern = kernel_hat(ctx, 2.0)
    e = math.exp
    assert kern[0, 0] == pytest.approx((1 + e(-2)) ** 2)
    assert kern[0, 1] == pytest.approx(-(e(-1) + e(-3)))
    assert kern[1, 1] == pytest.approx(1 + e(-4))


def test_kernel_so6_spinor_seas_decouple():
    ctx = KernelContext.for_series("so", 6)
    assert ctx.seas == ["1", "+", "-"]
    kern = kernel_hat(ctx, 0.8)
    assert kern[ctx.index("+"), ctx.index("-")] == 0.0


def test_resolvent_so3():
    """R^(1) = 1/(1 + e^{-1/2})^2."""
    ctx = KernelContext.for_series("so", 3)
    assert resolvent_hat(ctx, 1.0)[0, 0] == pytest.approx(1.0 / (1.0 + np.exp(-0.5)) ** 2, abs=1e-12)
    assert resolvent_hat(ctx, 1.0)[0, 0] == pytest.approx(0.387456, abs=1e-6)


@pytest.mark.parametrize("series, n", [("so", 3), ("so", 5), ("so", 7), ("so", 6), ("so", 8), ("sp", 2), ("sp", 4), ("sp", 6)])
@pytest.mark.parametrize("omega", [0.0005, 0.3, 2.0, 7.5])
def test_resolvent_inverts_kernel(series, n, omega):
    ctx = KernelContext.for_series(series, n)
    defect = inversion_defect(ctx, omega)
    assert defect < 1e-10, f"{series}({n}) at w={omega}: {defect}"


def test_hole_energy_so5():
    """eps^1(2) = cosh(1/2)/cosh(3/2)."""
    ctx = KernelContext.for_series("so", 5)
    assert hole_energy_hat(ctx, 2.0)["1"] == pytest.approx(0.47934, rel=1e-4)


@pytest.mark.parametrize("series, n", [("so", 5), ("so", 6), ("so", 8), ("sp", 4), ("sp", 6)])
def test_hole_energy_consistency(series, n):
    ctx = KernelContext.for_series(series, n)
    for omega in (0.2, 1.0, 4.0):
        assert hole_energy_consistency(ctx, omega) < 1e-12


def test_hole_energy_so3_excluded():
    vector = hole_energy_hat(KernelContext.for_series("so", 3), 1.0)
    assert vector.notes["excluded"] is True
    assert "resolvent_form" in vector.notes


@pytest.mark.parametrize("omega", [0.5, 1.3, 3.0])
def test_d1_duality_difference_so6(omega):
    ctx = KernelContext.for_series("so", 6, "D1", {"xi": 1.5})
    diff = duality_difference(ctx, omega)
    expected = expected_duality_difference(ctx, omega)
    logger.info(f"w={omega}: difference {diff:.12f}, expected {expected:.12f}")
    assert diff == pytest.approx(expected, abs=1e-12)


def test_duality_needs_large_xi():
    ctx = KernelContext.for_series("so", 6, "D1", {"xi": 0.5})
    with pytest.raises(ConstraintViolationError):
        expected_duality_difference(ctx, 1.0)


def test_boundary_corrections():
    ctx = KernelContext.for_series("so", 6, "D1", {"xi": 1.5})
    corr = density_correction_hat(ctx, 1.0)
    assert corr.g["+"] == pytest.approx(-math.exp(-(2 * 1.5 + 2) / 2))
    assert corr.g["1"] == 0.0
    assert np.allclose(corr.phi1.values, resolvent_hat(ctx, 1.0) @ corr.g.values)


def test_holes_enter_f():
    ctx = KernelContext.for_series("so", 5)
    with_holes = KernelContext.for_series("so", 5, holes={"1": [0.3]})
    diff = density_correction_hat(with_holes, 1.0).f.values - density_correction_hat(ctx, 1.0).f.values
    assert np.any(np.abs(diff) > 0)


def test_context_from_algebra():
    spec = parse_algebra("so:5")
    ctx = KernelContext.for_algebra(spec, make_k(spec, Family.D3, {"m1": 1, "n1": 0}))
    assert ctx.family == Family.D3
    assert ctx.m == 1
    assert "xi" in ctx.xi


def test_inadmissible_families():
    with pytest.raises(InadmissibleFamilyError):
        KernelContext.for_series("so", 5, "D1", {"xi": 1.0})
    with pytest.raises(InadmissibleFamilyError):
        KernelContext.for_series("sp", 4, "D2", {"xi1": 1.0})
    with pytest.raises(InadmissibleFamilyError):
        KernelContext.for_series("so", 4, "D2", {"xi1": 1.0})


def test_bad_holes():
    with pytest.raises(SeriesMismatchError):
        KernelContext.for_series("so", 5, holes={"+": [0.1]})
    with pytest.raises(ValueError):
        KernelContext.for_series("so", 5, holes={"1": [0.1 + 0.2j]})


def test_sweep_and_summary():
    ctx = KernelContext.for_series("sp", 4, "D1", {"xi": 2.0})
    grid = omega_grid(0.05, 1.0, 0.05)
    assert len(grid) == 20
    frame = sweep_frame(ctx, grid)
    assert len(frame) == 20
    assert {"omega", "K_1_1", "R_1_2", "eps_2", "phi1_1", "inversion_defect"} <= set(frame.columns)
    assert frame["inversion_defect"].max() < 1e-10
    summary = kernel_summary(ctx, 0.5)
    assert summary["seas"] == ["1", "2"]
    assert summary["context"]["family"] == "D1"
