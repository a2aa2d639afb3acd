"""
Fourier-space thermodynamics of the open so(n) and sp(n) chains.

The ground state is a set of filled (string-built) seas. In Fourier space the
linearized counting equations read K(w) sigma(w) = driving(w) + corrections/N,
with the string-form kernel K, its resolvent R = K^{-1}, the hole energies
eps = R * driving, and the 1/N corrections Phi0 = R F (bulk and holes) and
Phi1 = R G (boundary).

Conventions: f^(w) = int dl e^{i w l} f(l), so a_x(l) = x / (2 pi (l^2 + x^2/4))
has a^_x(w) = exp(-x |w| / 2); a_{-x} = -a_x and a_0 = a_oo = 0. All kernels are
even in w and are evaluated on |w|.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sympy import Poly, Rational, Symbol, cancel, eye, fraction, zeros

from .boundary import Family, KSolution
from .eigenfunctions import SeriesInfo, series_info
from .errors import ConstraintViolationError, InadmissibleFamilyError, SeriesMismatchError
from .grading import build_grading, parse_algebra
from .ratfunc import INFINITY, gaussian_to_complex

logger = logging.getLogger(__name__)

# Below this |w| the resolvent is taken from the (analytic) kernel by inversion.
SMALL_OMEGA = 1e-3
LOG2 = math.log(2.0)

# (coefficient, x) stands for coefficient * a_x
Term = Tuple[float, float]


def a_hat(x: float, omega: float) -> float:
    """Fourier transform of a_x at omega."""
    if x == 0 or math.isinf(x):
        return 0.0
    return math.copysign(math.exp(-abs(x) * abs(omega) / 2.0), x)


def combine(terms: Iterable[Term], omega: float) -> float:
    return sum(coef * a_hat(x, omega) for coef, x in terms)


# String-form tables


def kernel_terms(info: SeriesInfo) -> Dict[Tuple[str, str], List[Term]]:
    """Off-identity part of K^(w): K^ = 1 + sum of these terms, symmetric in the seas."""
    k = info.k
    table: Dict[Tuple[str, str], List[Term]] = {}

    def link(a: str, b: str, terms: List[Term]) -> None:
        table[(a, b)] = list(terms)
        table[(b, a)] = list(terms)

    if info.series == "so-odd":
        for j in range(1, k):
            table[(str(j), str(j))] = [(1, 2)]
        for j in range(1, k - 1):
            link(str(j), str(j + 1), [(-1, 1)])
        if k >= 2:
            link(str(k - 1), str(k), [(-1, 0.5), (-1, 1.5)])
        table[(str(k), str(k))] = [(2, 1), (1, 2)]
    elif info.series == "so-even":
        for j in range(1, k - 1):
            table[(str(j), str(j))] = [(1, 2)]
        for j in range(1, k - 2):
            link(str(j), str(j + 1), [(-1, 1)])
        if k >= 3:
            link(str(k - 2), "+", [(-1, 1)])
            link(str(k - 2), "-", [(-1, 1)])
        table[("+", "+")] = [(1, 2)]
        table[("-", "-")] = [(1, 2)]
    else:
        for j in range(1, k):
            table[(str(j), str(j))] = [(2, 2), (1, 4)]
        for j in range(1, k):
            link(str(j), str(j + 1), [(-1, 1), (-1, 3)])
        table[(str(k), str(k))] = [(1, 4)]
    return table


def driving_terms(info: SeriesInfo) -> Dict[str, List[Term]]:
    """Driving term of each sea, per unit of 2N."""
    if info.series == "sp":
        return {"1": [(1, 2)]}
    if info.series == "so-even" and info.k == 2:
        return {"+": [(1, 1)], "-": [(1, 1)]}
    return {"1": [(1, 1)]}


def bulk_terms(info: SeriesInfo) -> Dict[str, List[Term]]:
    """Hole- and boundary-free part of F^j."""
    k = info.k
    out: Dict[str, List[Term]] = {}
    if info.series == "so-odd":
        for j in range(1, k - 1):
            out[str(j)] = [(1, 2)] + ([] if j == 1 else [(-1, 1)])
        if k >= 2:
            out[str(k - 1)] = [(1, 2), (-1, 0.5), (-1, 1.5)]
        out[str(k)] = [(3, 1), (1, 2), (-1, 0.5), (-1, 1.5)]
    elif info.series == "so-even":
        if k == 2:
            return {"+": [(1, 1), (1, 2)], "-": [(1, 1), (1, 2)]}
        for j in range(1, k - 2):
            out[str(j)] = [(1, 2)] + ([] if j == 1 else [(-1, 1)])
        out[str(k - 2)] = [(1, 2), (-2, 1)]
        out["+"] = [(1, 2)]
        out["-"] = [(1, 2)]
    else:
        for j in range(1, k):
            out[str(j)] = [(3, 2), (1, 4), (-2, 1), (-2, 3)] + ([(1, 1), (1, 3)] if j == 1 else [])
        out[str(k)] = [(1, 2), (1, 4), (-1, 1), (-1, 3)]
    return out


def _terms_json(terms: Sequence[Term]) -> List[Dict[str, float]]:
    return [{"coef": float(c), "x": float(x)} for c, x in terms]


def describe_tables(info: SeriesInfo) -> Dict[str, Any]:
    return {
        "series": info.tag,
        "seas": info.seas,
        "kernel": {f"{a},{b}": _terms_json(t) for (a, b), t in sorted(kernel_terms(info).items())},
        "driving": {s: _terms_json(t) for s, t in driving_terms(info).items()},
        "bulk": {s: _terms_json(t) for s, t in bulk_terms(info).items()},
    }


# Context


@dataclass
class KernelContext:
    """Series data, a diagonal boundary and a hole configuration."""

    info: SeriesInfo
    family: Family = Family.IDENTITY
    xi: Dict[str, float] = field(default_factory=dict)
    m: Optional[int] = None
    holes: Dict[str, Tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.family = Family(self.family)
        unknown = set(self.holes) - set(self.info.seas)
        if unknown:
            raise SeriesMismatchError(f"Unknown seas {sorted(unknown)} for {self.info.tag}; seas are {self.info.seas}")
        holes = {}
        for sea, positions in self.holes.items():
            values = tuple(complex(p) for p in positions)
            if any(abs(v.imag) > 0 for v in values):
                raise ValueError(f"Hole positions must be real, got {positions} on sea {sea}")
            holes[sea] = tuple(v.real for v in values)
        self.holes = holes
        self.xi = {name: float(value) for name, value in self.xi.items()}
        boundary_terms(self)

    @classmethod
    def for_algebra(cls, spec, boundary: Optional[KSolution] = None,
                    holes: Optional[Mapping[str, Sequence[float]]] = None) -> "KernelContext":
        """Context of an so(n)/sp(n) algebra with a catalog boundary (catalog xi values)."""
        if isinstance(spec, str):
            spec = parse_algebra(spec)
        info = series_info(spec)
        if boundary is None:
            return cls(info, holes=dict(holes or {}))
        xi = {name: _xi_float(value) for name, value in boundary.xi.items()}
        m = None
        if boundary.family == Family.D3:
            m = int(boundary.params["n1"] if info.series == "sp" else boundary.params["m1"])
        return cls(info, boundary.family, xi, m, dict(holes or {}))

    @classmethod
    def for_series(cls, series: str, n: int, family: str = "I", xi: Optional[Mapping[str, float]] = None,
                   m: Optional[int] = None, holes: Optional[Mapping[str, Sequence[float]]] = None) -> "KernelContext":
        """Context from a series tag ("so" or "sp") and the defining dimension n."""
        if series == "so":
            spec = build_grading(n, 0, 1)
        elif series == "sp":
            spec = build_grading(0, n, -1)
        else:
            raise SeriesMismatchError(f"Series must be 'so' or 'sp', got '{series}'")
        return cls(series_info(spec), Family(family), dict(xi or {}), m, dict(holes or {}))

    @property
    def seas(self) -> List[str]:
        return self.info.seas

    @property
    def size(self) -> int:
        return len(self.info.seas)

    def index(self, sea: str) -> int:
        return self.info.seas.index(sea)

    def with_xi(self, **changes: float) -> "KernelContext":
        xi = dict(self.xi)
        xi.update(changes)
        return replace(self, xi=xi)

    def without_holes(self) -> "KernelContext":
        return replace(self, holes={})

    def describe(self) -> Dict[str, Any]:
        return {
            "series": self.info.tag,
            "n": self.info.n,
            "kappa": float(self.info.kappa),
            "family": self.family.value,
            "xi": {k: (None if math.isinf(v) else v) for k, v in self.xi.items()},
            "m": self.m,
            "holes": {s: list(p) for s, p in self.holes.items()},
        }


def _xi_float(value) -> float:
    if value is INFINITY:
        return math.inf
    return gaussian_to_complex(value).real


def _xi(ctx: KernelContext, name: str) -> float:
    if name not in ctx.xi:
        raise InadmissibleFamilyError(f"Boundary {ctx.family.value} needs parameter '{name}'")
    return ctx.xi[name]


def boundary_terms(ctx: KernelContext) -> Dict[str, List[Term]]:
    """
    G^j as terms per sea.

    Raises:
        InadmissibleFamilyError: family not available for the series.
    """
    info, family = ctx.info, ctx.family
    k = info.k
    if family == Family.IDENTITY:
        return {}
    if family == Family.D1:
        if info.series == "so-odd":
            raise InadmissibleFamilyError("D1 does not exist for odd orthogonal dimension")
        sea = "+" if info.series == "so-even" else str(k)
        return {sea: [(-1, 2 * _xi(ctx, "xi") + float(info.kappa))]}
    if family == Family.D2:
        if info.series == "sp":
            raise InadmissibleFamilyError("D2 does not exist for sp(n)")
        if info.series == "so-even" and k == 2:
            raise InadmissibleFamilyError("D2 on so(4) is described as a D4 boundary")
        if info.series == "so-odd" and k == 1:
            raise InadmissibleFamilyError("D2 on so(3) has no separate first sea")
        return {"1": [(-1, 2 * _xi(ctx, "xi1") + 1)]}
    if family == Family.D3:
        m = ctx.m
        if m is None or not 1 <= m <= k - 1:
            raise InadmissibleFamilyError(f"D3 needs 1 <= m <= {k - 1} for {info.tag}, got m={m}")
        xi = _xi(ctx, "xi")
        if info.series == "sp":
            return {str(m): [(-1, 2 * xi + m + 1), (-1, 2 * xi + m - 1)]}
        if info.series == "so-even" and m == k - 1:
            return {"+": [(-1, 1)], "-": [(-1, 1)]}
        return {str(m): [(-1, 2 * xi + m)]}
    if family == Family.D4:
        if (info.series, k) != ("so-even", 2):
            raise InadmissibleFamilyError("D4 exists only for so(4)")
        return {"-": [(-1, 2 * _xi(ctx, "xi_minus") + 1)], "+": [(-1, 2 * _xi(ctx, "xi_plus") + 1)]}
    raise InadmissibleFamilyError(f"No density correction for boundary family {family.value}")


# Kernel and resolvent


def kernel_hat(ctx: KernelContext, omega: float) -> np.ndarray:
    """K^(w) in the sea order of the series."""
    size = ctx.size
    out = np.eye(size)
    for (a, b), terms in kernel_terms(ctx.info).items():
        out[ctx.index(a), ctx.index(b)] += combine(terms, omega)
    return out


def _lsinh(x: float) -> float:
    return x + math.log1p(-math.exp(-2.0 * x)) - LOG2


def _lcosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - LOG2


def _so_resolvent(ctx: KernelContext, h: float) -> np.ndarray:
    info = ctx.info
    k = info.k
    odd = info.series == "so-odd"
    c = k - 0.5 if odd else k - 1.0
    direct = k - 1 if odd else k - 2
    size = ctx.size
    out = np.zeros((size, size))
    base = h - _lcosh(c * h) - _lsinh(h)
    for i in range(1, direct + 1):
        for j in range(1, direct + 1):
            lo, hi = min(i, j), max(i, j)
            out[i - 1, j - 1] = math.exp(base + _lsinh(lo * h) + _lcosh((c - hi) * h))
    spin = [str(k)] if odd else ["+", "-"]
    for j in range(1, direct + 1):
        value = math.exp(base - LOG2 + _lsinh(j * h))
        for s in spin:
            out[j - 1, ctx.index(s)] = value
            out[ctx.index(s), j - 1] = value
    if odd:
        out[k - 1, k - 1] = math.exp(base - LOG2 + _lsinh(k * h) - LOG2 - _lcosh(h / 2.0))
    else:
        same = math.exp(base - LOG2 + _lsinh(k * h) - LOG2 - _lcosh(h))
        cross = 0.0 if k == 2 else math.exp(base - LOG2 + _lsinh((k - 2) * h) - LOG2 - _lcosh(h))
        p, m = ctx.index("+"), ctx.index("-")
        out[p, p] = out[m, m] = same
        out[p, m] = out[m, p] = cross
    return out


def _sp_resolvent(ctx: KernelContext, h: float) -> np.ndarray:
    k = ctx.info.k
    c = k + 1.0
    base = 2.0 * h - LOG2 - _lcosh(h) - _lcosh(c * h) - _lsinh(h)
    out = np.zeros((k, k))
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            lo, hi = min(i, j), max(i, j)
            out[i - 1, j - 1] = math.exp(base + _lsinh(lo * h) + _lcosh((c - hi) * h))
    return out


def resolvent_hat(ctx: KernelContext, omega: float) -> np.ndarray:
    """Closed-form R^(w) = K^(w)^{-1}; near w = 0 the continuous extension is used."""
    w = abs(float(omega))
    if w < SMALL_OMEGA:
        return np.linalg.inv(kernel_hat(ctx, w))
    h = w / 2.0
    if ctx.info.series == "sp":
        return _sp_resolvent(ctx, h)
    return _so_resolvent(ctx, h)


def inversion_defect(ctx: KernelContext, omega: float) -> float:
    """max-row-sum norm of K^(w) R^(w) - 1."""
    product = kernel_hat(ctx, omega) @ resolvent_hat(ctx, omega)
    return float(np.abs(product - np.eye(ctx.size)).sum(axis=1).max())


# Fourier vectors


@dataclass(frozen=True)
class FourierVector:
    """One value per sea at a fixed omega."""

    seas: Tuple[str, ...]
    omega: float
    values: np.ndarray
    notes: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, sea: str) -> float:
        return float(self.values[self.seas.index(sea)])

    @property
    def first(self) -> float:
        return float(self.values[0])

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"omega": self.omega, "values": {s: float(v) for s, v in zip(self.seas, self.values)}}
        if self.notes:
            out["notes"] = self.notes
        return out


def _vector(ctx: KernelContext, omega: float, entries: Mapping[str, float], notes=None) -> FourierVector:
    values = np.array([entries.get(s, 0.0) for s in ctx.seas], dtype=float)
    return FourierVector(tuple(ctx.seas), float(omega), values, dict(notes or {}))


def driving_hat(ctx: KernelContext, omega: float) -> FourierVector:
    return _vector(ctx, omega, {s: combine(t, omega) for s, t in driving_terms(ctx.info).items()})


def _closed_hole_energy(ctx: KernelContext, h: float) -> Dict[str, float]:
    info = ctx.info
    k = info.k
    if info.series == "sp":
        c = k + 1.0
        return {str(j): math.exp(_lcosh((c - j) * h) - LOG2 - _lcosh(h) - _lcosh(c * h)) for j in range(1, k + 1)}
    odd = info.series == "so-odd"
    c = k - 0.5 if odd else k - 1.0
    direct = k - 1 if odd else k - 2
    out = {str(j): math.exp(_lcosh((c - j) * h) - _lcosh(c * h)) for j in range(1, direct + 1)}
    spin = math.exp(-LOG2 - _lcosh(c * h))
    for s in ([str(k)] if odd else ["+", "-"]):
        out[s] = spin
    return out


def hole_energy_hat(ctx: KernelContext, omega: float) -> FourierVector:
    """
    Closed-form hole energies eps^j(w).

    For so(3) the closed form and R^ * driving disagree; both are returned and
    the vector is marked as excluded from consistency checks.
    """
    h = abs(float(omega)) / 2.0
    values = _closed_hole_energy(ctx, h)
    notes: Dict[str, Any] = {}
    if ctx.info.series == "so-odd" and ctx.info.k == 1:
        via_resolvent = float((resolvent_hat(ctx, omega) @ driving_hat(ctx, omega).values)[0])
        notes = {"excluded": True, "closed_form": values["1"], "resolvent_form": via_resolvent}
        logger.warning(f"Hole energy for {ctx.info.tag} at w={omega}: closed form {values['1']:.12g} "
                       f"differs from R*driving {via_resolvent:.12g}; excluded from checks")
    return _vector(ctx, omega, values, notes)


def hole_energy_consistency(ctx: KernelContext, omega: float) -> float:
    """max |eps^j(w) - (R^(w) driving(w))_j|."""
    closed = hole_energy_hat(ctx, omega).values
    via_resolvent = resolvent_hat(ctx, omega) @ driving_hat(ctx, omega).values
    return float(np.abs(closed - via_resolvent).max())


# Density corrections


@dataclass(frozen=True)
class DensityCorrection:
    omega: float
    f: FourierVector
    g: FourierVector
    phi0: FourierVector
    phi1: FourierVector

    def to_dict(self) -> Dict[str, Any]:
        return {"omega": self.omega, "F": self.f.to_dict()["values"], "G": self.g.to_dict()["values"],
                "phi0": self.phi0.to_dict()["values"], "phi1": self.phi1.to_dict()["values"]}


def f_hat(ctx: KernelContext, omega: float) -> FourierVector:
    """Bulk part of F^ plus the hole terms sum_l (K^ - 1)_{jl} sum_holes 2 cos(w h)."""
    entries = {s: combine(t, omega) for s, t in bulk_terms(ctx.info).items()}
    if ctx.holes:
        couplings = kernel_terms(ctx.info)
        for sea_l, positions in ctx.holes.items():
            weight = sum(2.0 * math.cos(omega * p) for p in positions)
            for sea_j in ctx.seas:
                terms = couplings.get((sea_j, sea_l))
                if terms:
                    entries[sea_j] = entries.get(sea_j, 0.0) + weight * combine(terms, omega)
    return _vector(ctx, omega, entries)


def g_hat(ctx: KernelContext, omega: float) -> FourierVector:
    return _vector(ctx, omega, {s: combine(t, omega) for s, t in boundary_terms(ctx).items()})


def density_correction_hat(ctx: KernelContext, omega: float) -> DensityCorrection:
    """F^, G^ and Phi0^ = R^ F^, Phi1^ = R^ G^ at one omega."""
    r = resolvent_hat(ctx, omega)
    f, g = f_hat(ctx, omega), g_hat(ctx, omega)
    phi0 = FourierVector(f.seas, f.omega, r @ f.values)
    phi1 = FourierVector(g.seas, g.omega, r @ g.values)
    return DensityCorrection(float(omega), f, g, phi0, phi1)


def phi_component(ctx: KernelContext, which: str = "phi1", sea: Optional[str] = None):
    """w -> Phi0^ or Phi1^ on one sea (default: the first), for quadrature."""
    sea = sea or ctx.seas[0]
    idx = ctx.index(sea)
    if which not in ("phi0", "phi1"):
        raise ValueError(f"which must be 'phi0' or 'phi1', got '{which}'")

    def component(omega: float) -> float:
        r = resolvent_hat(ctx, omega)
        vec = f_hat(ctx, omega) if which == "phi0" else g_hat(ctx, omega)
        return float(r[idx] @ vec.values)

    return component


def _s_power_sum(terms: Iterable[Term], s: Symbol):
    """sum coef a_x^ with a_x^ = s^{2x}, s = e^{-|w|/4}."""
    out = 0
    for coef, x in terms:
        power = 2 * Fraction(x).limit_denominator(64)
        if power.denominator != 1:
            raise ValueError(f"a_{x} is not a power of e^(-w/4)")
        out += Rational(Fraction(coef).limit_denominator(64)) * s ** int(power)
    return out


def phi0_exponential_terms(ctx: KernelContext, period: int) -> Optional[List[Term]]:
    """
    Bulk Phi0^ on the first sea as a finite exponential sum over a period:

        (1 - e^{-period w}) Phi0^(w) = sum coef e^{-c w},   w > 0.

    Returns the (coef, c) pairs, or None when the resolvent has a pole the
    period does not clear. Holes are ignored.
    """
    s = Symbol("s")
    size = ctx.size
    kmat = eye(size)
    for (a, b), terms in kernel_terms(ctx.info).items():
        kmat[ctx.index(a), ctx.index(b)] += _s_power_sum(terms, s)
    fvec = zeros(size, 1)
    for sea, terms in bulk_terms(ctx.info).items():
        fvec[ctx.index(sea), 0] = _s_power_sum(terms, s)
    phi = kmat.LUsolve(fvec)[0, 0]
    numer, denom = fraction(cancel(phi * (1 - s ** (4 * period))))
    if Poly(denom, s).degree() > 0:
        logger.debug(f"Phi0 of {ctx.info.tag} keeps denominator {denom} over period {period}")
        return None
    scale = Poly(denom, s).LC()
    return [(float(coeff / scale), power / 4.0) for (power,), coeff in Poly(numer, s).terms()]


# Duality


def dual_context(ctx: KernelContext) -> KernelContext:
    """xi -> -xi (D1, D4) or xi1 <-> xin (D2)."""
    if ctx.family == Family.D1:
        return ctx.with_xi(xi=-_xi(ctx, "xi"))
    if ctx.family == Family.D4:
        return ctx.with_xi(xi_minus=-_xi(ctx, "xi_minus"), xi_plus=-_xi(ctx, "xi_plus"))
    if ctx.family == Family.D2:
        return ctx.with_xi(xi1=_xi(ctx, "xin"), xin=_xi(ctx, "xi1"))
    raise InadmissibleFamilyError(f"No duality transformation for boundary family {ctx.family.value}")


def duality_difference(ctx: KernelContext, omega: float, sea: Optional[str] = None) -> float:
    """Phi1^(w; dual) - Phi1^(w; xi) on one sea."""
    return phi_component(dual_context(ctx), "phi1", sea)(omega) - phi_component(ctx, "phi1", sea)(omega)


def expected_duality_difference(ctx: KernelContext, omega: float) -> float:
    """
    exp(-(2 xi - 1)|w|/2) for so, exp(-(2 xi - 2)|w|/2) for sp (D1 on the first sea).

    Raises:
        ConstraintViolationError: 2 xi <= kappa, where xi and -xi give kernels of the same sign.
    """
    if ctx.family != Family.D1:
        raise InadmissibleFamilyError("The closed duality difference is available for D1")
    xi = _xi(ctx, "xi")
    if not 2 * xi > float(ctx.info.kappa):
        raise ConstraintViolationError(f"Duality difference needs 2 xi > kappa, got xi={xi}")
    shift = 2.0 if ctx.info.series == "sp" else 1.0
    return math.exp(-(2 * xi - shift) * abs(omega) / 2.0)


# Sweeps


def omega_grid(start: float = 0.05, stop: float = 10.0, step: float = 0.05) -> np.ndarray:
    count = int(round((stop - start) / step)) + 1
    return np.round(start + step * np.arange(count), 12)


def sweep_frame(ctx: KernelContext, omegas: Iterable[float]) -> pd.DataFrame:
    """One row per omega: K^, R^, eps^, F^, G^, Phi0^, Phi1^ entries and the inversion defect."""
    rows = []
    seas = ctx.seas
    for omega in omegas:
        omega = float(omega)
        row: Dict[str, Any] = {"omega": omega}
        kern, res = kernel_hat(ctx, omega), resolvent_hat(ctx, omega)
        for i, a in enumerate(seas):
            for j, b in enumerate(seas):
                row[f"K_{a}_{b}"] = kern[i, j]
                row[f"R_{a}_{b}"] = res[i, j]
        corr = density_correction_hat(ctx, omega)
        eps = hole_energy_hat(ctx, omega)
        for i, s in enumerate(seas):
            row[f"eps_{s}"] = eps.values[i]
            row[f"F_{s}"] = corr.f.values[i]
            row[f"G_{s}"] = corr.g.values[i]
            row[f"phi0_{s}"] = corr.phi0.values[i]
            row[f"phi1_{s}"] = corr.phi1.values[i]
        row["inversion_defect"] = float(np.abs(kern @ res - np.eye(len(seas))).sum(axis=1).max())
        rows.append(row)
    return pd.DataFrame(rows)


def kernel_summary(ctx: KernelContext, omega: float) -> Dict[str, Any]:
    """JSON-ready kernels, resolvent, hole energies and corrections at one omega."""
    corr = density_correction_hat(ctx, omega)
    eps = hole_energy_hat(ctx, omega)
    return {
        "context": ctx.describe(),
        "omega": float(omega),
        "seas": ctx.seas,
        "kernel": kernel_hat(ctx, omega).tolist(),
        "resolvent": resolvent_hat(ctx, omega).tolist(),
        "inversion_defect": inversion_defect(ctx, omega),
        "hole_energy": eps.to_dict(),
        "density_correction": corr.to_dict(),
        "tables": describe_tables(ctx.info),
    }
