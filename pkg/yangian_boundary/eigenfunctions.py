"""
Building blocks of open-chain transfer-matrix eigenvalues for so(n) and sp(n):
the vacuum factors a, b, c, the g_l functions, their boundary modifications
and the dressing functions A_l.

Every piece is a product of linear factors in the spectral parameter, held as
LinearFactors so that it can be evaluated numerically, reflected under
l -> -l - i kappa, or turned into an exact RatFunc when all shifts are
Gaussian rationals.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .boundary import Family, KSolution
from .errors import InadmissibleFamilyError, SeriesMismatchError
from .grading import GradingSpec
from .ratfunc import FIELD, INFINITY, U, Gaussian, RatFunc, gaussian, gaussian_to_complex

logger = logging.getLogger(__name__)

Shift = Union[complex, Gaussian]


def _is_exact(x) -> bool:
    return isinstance(x, Gaussian)


def _to_complex(x) -> complex:
    return gaussian_to_complex(x) if _is_exact(x) else complex(x)


def ishift(x: Union[int, Fraction]) -> Gaussian:
    """The exact shift i*x."""
    return gaussian(0, Fraction(x))


class LinearFactors:
    """const * prod (l + s)^p over shifts s with integer powers p."""

    __slots__ = ("const", "factors")

    def __init__(self, const: Shift = None, factors: Optional[Dict[Shift, int]] = None):
        self.const = gaussian(1) if const is None else const
        self.factors = {s: p for s, p in (factors or {}).items() if p}

    @classmethod
    def of(cls, const: Shift = None, *pairs: Tuple[Shift, int]) -> "LinearFactors":
        """Build from (shift, power) pairs; repeated shifts accumulate."""
        out = cls(const)
        for shift, power in pairs:
            out._add(shift, power)
        return out

    @classmethod
    def ratio(cls, num: Shift, den: Shift) -> "LinearFactors":
        out = cls()
        out._add(num, 1)
        out._add(den, -1)
        return out

    def _add(self, shift: Shift, power: int) -> None:
        p = self.factors.get(shift, 0) + power
        if p:
            self.factors[shift] = p
        else:
            self.factors.pop(shift, None)

    def __mul__(self, other: "LinearFactors") -> "LinearFactors":
        if _is_exact(self.const) and _is_exact(other.const):
            const = self.const * other.const
        else:
            const = _to_complex(self.const) * _to_complex(other.const)
        out = LinearFactors(const, dict(self.factors))
        for s, p in other.factors.items():
            out._add(s, p)
        return out

    def inverse(self) -> "LinearFactors":
        const = (gaussian(1) / self.const) if _is_exact(self.const) else 1.0 / _to_complex(self.const)
        return LinearFactors(const, {s: -p for s, p in self.factors.items()})

    def __truediv__(self, other: "LinearFactors") -> "LinearFactors":
        return self * other.inverse()

    def __pow__(self, n: int) -> "LinearFactors":
        out = LinearFactors()
        for _ in range(abs(n)):
            out = out * self
        return out if n >= 0 else out.inverse()

    def reflect(self, kappa: Fraction) -> "LinearFactors":
        """f(-l - i kappa): each (l + s) becomes -(l + i kappa - s)."""
        sign = -1 if sum(self.factors.values()) % 2 else 1
        factors: Dict[Shift, int] = {}
        for s, p in self.factors.items():
            new = ishift(kappa) - s if _is_exact(s) else 1j * float(kappa) - complex(s)
            factors[new] = factors.get(new, 0) + p
        const = self.const * gaussian(sign) if _is_exact(self.const) else _to_complex(self.const) * sign
        return LinearFactors(const, factors)

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.const) and all(_is_exact(s) for s in self.factors)

    def __call__(self, lam: complex) -> complex:
        value = _to_complex(self.const)
        lam = complex(lam)
        for s, p in self.factors.items():
            value *= (lam + _to_complex(s)) ** p
        return value

    def log_derivative(self, lam: complex) -> complex:
        """f'(l)/f(l)."""
        lam = complex(lam)
        return sum(p / (lam + _to_complex(s)) for s, p in self.factors.items())

    def to_ratfunc(self) -> RatFunc:
        if not self.is_exact:
            raise ValueError("Only factors with exact shifts convert to RatFunc")
        num, den = FIELD(self.const), FIELD.one
        for s, p in self.factors.items():
            term = U + FIELD(s)
            if p > 0:
                num *= term ** p
            else:
                den *= term ** (-p)
        return num / den

    def poles(self) -> List[complex]:
        return [-_to_complex(s) for s, p in self.factors.items() if p < 0]

    def __repr__(self) -> str:
        return f"LinearFactors(const={self.const}, factors={self.factors})"


def product(items: Iterable[LinearFactors]) -> LinearFactors:
    out = LinearFactors()
    for f in items:
        out = out * f
    return out


@dataclass(frozen=True)
class SeriesInfo:
    """so-odd(k), so-even(k) or sp(k) data of a pure algebra."""

    series: str
    k: int
    n: int
    kappa: Fraction

    @property
    def sigma(self) -> int:
        """+1 for so, -1 for sp (the upper/lower signs of g_0)."""
        return -1 if self.series == "sp" else 1

    @property
    def last_direct(self) -> int:
        return self.k if self.series == "so-odd" else self.k - 1

    @property
    def seas(self) -> List[str]:
        if self.series == "so-even":
            return [str(s) for s in range(1, self.k - 1)] + ["+", "-"]
        return [str(s) for s in range(1, self.k + 1)]

    @property
    def tag(self) -> str:
        return f"{self.series}({self.k})"


def series_info(spec: GradingSpec) -> SeriesInfo:
    """
    Raises:
        SeriesMismatchError: for osp algebras and for the degenerate so(1), so(2).
    """
    if spec.series == "osp":
        raise SeriesMismatchError(f"Eigenvalue formulas are available for so(n) and sp(n) only, got {spec}")
    if spec.series == "sp":
        return SeriesInfo("sp", spec.n // 2, spec.n, spec.kappa)
    if spec.m < 3:
        raise SeriesMismatchError(f"so({spec.m}) has no Bethe Ansatz description here")
    if spec.m % 2:
        return SeriesInfo("so-odd", spec.m // 2, spec.m, spec.kappa)
    return SeriesInfo("so-even", spec.m // 2, spec.m, spec.kappa)


# Vacuum pieces


def a_factor(info: SeriesInfo) -> LinearFactors:
    return LinearFactors.of(None, (ishift(1), 1), (ishift(info.kappa), 1))


def b_factor(info: SeriesInfo) -> LinearFactors:
    return LinearFactors.of(None, (gaussian(0), 1), (ishift(info.kappa), 1))


def c_factor(info: SeriesInfo) -> LinearFactors:
    return a_factor(info).reflect(info.kappa)


def _g_direct(info: SeriesInfo, l: int) -> LinearFactors:
    half_k = Fraction(info.kappa) / 2
    top = ishift(half_k + Fraction(info.sigma, 2))
    if l == 0:
        return LinearFactors.of(None, (top, 1), (ishift(info.kappa), 1), (ishift(half_k), -1), (ishift(Fraction(1, 2)), -1))
    if info.series == "so-odd" and l == info.k:
        k = info.k
        return LinearFactors.of(None, (gaussian(0), 1), (ishift(info.kappa), 1),
                                (ishift(Fraction(k, 2)), -1), (ishift(Fraction(k - 1, 2)), -1))
    return LinearFactors.of(None, (gaussian(0), 1), (ishift(info.kappa), 1), (ishift(half_k), -1), (top, 1),
                            (ishift(Fraction(l, 2)), -1), (ishift(Fraction(l + 1, 2)), -1))


def g_functions(info: SeriesInfo) -> List[LinearFactors]:
    """g_0 .. g_{n-1}, with g_l(l) = g_{n-l-1}(-l - i kappa) above the direct range."""
    direct = [_g_direct(info, l) for l in range(info.last_direct + 1)]
    out = list(direct)
    for l in range(info.last_direct + 1, info.n):
        out.append(direct[info.n - l - 1].reflect(info.kappa))
    return out


def vacuum_prefactor(info: SeriesInfo, l: int) -> LinearFactors:
    if l == 0:
        return a_factor(info)
    if l == info.n - 1:
        return c_factor(info)
    return b_factor(info)


# Boundary modifications of g_l (K+ = 1)


def _xi(k: KSolution, name: str):
    value = k.xi.get(name)
    if value is None:
        raise InadmissibleFamilyError(f"Boundary {k.family.value} has no parameter {name}")
    return value


def _xi_shift(xi) -> Shift:
    return xi * gaussian(0, 1) if _is_exact(xi) else 1j * complex(xi)


def boundary_modifications(info: SeriesInfo, k: Optional[KSolution]) -> List[LinearFactors]:
    """
    Factors m_l with g~_l = m_l g_l for the diagonal families.

    Raises:
        InadmissibleFamilyError: non-diagonal or unsupported boundary.
    """
    n = info.n
    one = [LinearFactors() for _ in range(n)]
    if k is None or k.family == Family.IDENTITY:
        return one
    kap = ishift(info.kappa)
    half_k = Fraction(info.kappa) / 2
    sig = Fraction(info.sigma, 2)

    if k.family == Family.D1:
        xi = _xi(k, "xi")
        if xi is INFINITY:
            return one
        s = _xi_shift(xi)
        # (-l + i xi) = -(l - i xi)
        minus = LinearFactors.of(gaussian(-1), (-s, 1))
        plus = LinearFactors.of(None, (s + kap, 1))
        return [minus if l < info.k else plus for l in range(n)]

    if k.family == Family.D2:
        if info.series == "sp":
            raise InadmissibleFamilyError("D2 does not exist for sp(n)")
        xi1 = _xi(k, "xi1")
        if xi1 is INFINITY:
            return one
        s = _xi_shift(xi1)
        first = LinearFactors.of(gaussian(-1), (-s, 1), (s, -1))
        middle = LinearFactors.of(None, (s + ishift(1), 1), (s, -1))
        # (-l - i kappa + i xi1 + i) = -(l + i kappa - i xi1 - i)
        last = LinearFactors.of(gaussian(-1), (s + ishift(1), 1), (s, -1), (s + kap, 1), (kap - s - ishift(1), -1))
        return [first] + [middle] * (n - 2) + [last]

    if k.family == Family.D3:
        m = int(k.params["m1"] if info.series != "sp" else k.params["n1"])
        xi = _xi(k, "xi")
        s = _xi_shift(xi) if xi is not INFINITY else gaussian(0)
        low = LinearFactors.of(gaussian(-1), (-s, 1))
        mid = LinearFactors.of(None, (ishift(half_k + sig), 1))
        # (-l - i kappa - i xi) = -(l + i kappa + i xi)
        high = LinearFactors.of(gaussian(-1), (kap + s, 1), (ishift(half_k + sig), 1), (ishift(half_k - sig), -1))
        return [low if l < m else (mid if l <= n - m - 1 else high) for l in range(n)]

    if k.family == Family.D4:
        if (info.series, info.k) != ("so-even", 2):
            raise InadmissibleFamilyError("D4 exists only for so(4)")
        parts = []
        for name in ("xi_minus", "xi_plus"):
            xi = _xi(k, name)
            if xi is INFINITY:
                parts.append((LinearFactors(), LinearFactors()))
            else:
                s = _xi_shift(xi)
                parts.append((LinearFactors.of(gaussian(-1), (-s, 1)), LinearFactors.of(None, (s + ishift(1), 1))))
        (m_lo, m_hi), (p_lo, p_hi) = parts
        return [m_lo * p_lo, m_hi * p_lo, p_hi * m_lo, m_hi * p_hi]

    raise InadmissibleFamilyError(f"No eigenvalue modification for non-diagonal family {k.family.value}")


def modified_g(info: SeriesInfo, k: Optional[KSolution]) -> List[LinearFactors]:
    return [g * m for g, m in zip(g_functions(info), boundary_modifications(info, k))]


def eigenvalue_terms(info: SeriesInfo, sites: int, k: Optional[KSolution],
                     dressing: Optional[Sequence[LinearFactors]] = None) -> List[LinearFactors]:
    """Terms P_l^{2N} g~_l A_l of the eigenvalue, l = 0..n-1."""
    gt = modified_g(info, k)
    terms = []
    for l in range(info.n):
        term = vacuum_prefactor(info, l) ** (2 * sites) * gt[l]
        if dressing is not None:
            term = term * dressing[l]
        terms.append(term)
    return terms


def evaluate_terms(terms: Sequence[LinearFactors], lam: complex) -> complex:
    return sum(t(lam) for t in terms)


def exact_sum(terms: Sequence[LinearFactors]) -> RatFunc:
    out = FIELD.zero
    for t in terms:
        out += t.to_ratfunc()
    return out


# Dressing functions

Roots = Dict[str, Sequence[Shift]]


def _pair_ratio(roots: Sequence[Shift], num: Gaussian, den: Gaussian) -> LinearFactors:
    """prod over roots r and both signs of (l +- r + num)/(l +- r + den)."""
    out = LinearFactors()
    for r in roots:
        for sgn in (1, -1):
            if _is_exact(r):
                shift = r * gaussian(sgn)
                out._add(shift + num, 1)
                out._add(shift + den, -1)
            else:
                shift = sgn * complex(r)
                out._add(shift + _to_complex(num), 1)
                out._add(shift + _to_complex(den), -1)
    return out


def _next(roots: Roots, l: int, sea: str) -> LinearFactors:
    return _pair_ratio(roots.get(sea, ()), ishift(Fraction(l - 1, 2)), ishift(Fraction(l + 1, 2)))


def _self(roots: Roots, l: int, sea: str) -> LinearFactors:
    if l < 1:
        return LinearFactors()
    return _pair_ratio(roots.get(sea, ()), ishift(Fraction(l + 2, 2)), ishift(Fraction(l, 2)))


def dressing_functions(info: SeriesInfo, roots: Roots) -> List[LinearFactors]:
    """A_0 .. A_{n-1} for the given root sets (keys are sea labels)."""
    k = info.k
    direct: List[LinearFactors] = []
    if info.series == "so-odd":
        for l in range(k):
            direct.append(_self(roots, l, str(l)) * _next(roots, l, str(l + 1)))
        sea = roots.get(str(k), ())
        direct.append(_pair_ratio(sea, ishift(Fraction(k - 2, 2)), ishift(Fraction(k, 2)))
                      * _pair_ratio(sea, ishift(Fraction(k + 1, 2)), ishift(Fraction(k - 1, 2))))
    elif info.series == "so-even":
        for l in range(k - 2):
            direct.append(_self(roots, l, str(l)) * _next(roots, l, str(l + 1)))
        direct.append(_self(roots, k - 2, str(k - 2)) * _next(roots, k - 2, "+") * _next(roots, k - 2, "-"))
        direct.append(_next(roots, k - 2, "+") * _self(roots, k - 1, "-"))
    else:
        for l in range(k - 1):
            direct.append(_self(roots, l, str(l)) * _next(roots, l, str(l + 1)))
        direct.append(_self(roots, k - 1, str(k - 1))
                      * _pair_ratio(roots.get(str(k), ()), ishift(Fraction(k - 3, 2)), ishift(Fraction(k + 1, 2))))
    out = list(direct)
    for l in range(info.last_direct + 1, info.n):
        out.append(direct[info.n - l - 1].reflect(info.kappa))
    return out


def common_pole_points(info: SeriesInfo) -> List[complex]:
    """Points -i l/2 (l = 1..n-2) where successive g_l share poles."""
    return [-0.5j * l for l in range(1, info.n - 1)]


def lambda_samples(count: int = 5) -> List[complex]:
    """Fixed generic sample points used to compare eigenvalue profiles."""
    base = [0.31 + 0.17j, -0.23 + 0.41j, 0.57 - 0.29j, 0.13 + 0.83j, -0.67 - 0.11j, 0.91 + 0.37j]
    return base[:count]


def describe_terms(terms: Sequence[LinearFactors]) -> List[Tuple[str, Dict[str, int]]]:
    return [(str(t.const), {str(s): p for s, p in t.factors.items()}) for t in terms]
