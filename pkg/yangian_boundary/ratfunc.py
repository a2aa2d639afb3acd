"""
Exact rational functions over the Gaussian rationals, and sparse matrices of them.

Rational functions are elements of the sympy fraction field Q(i)(u, v). Two
formal variables are enough for every identity the toolkit checks: spectral
parameters of the Yang-Baxter and reflection equations. One-variable objects
(K matrices, eigenvalue pieces) simply do not involve v. In the physical
normalization the variable u plays the role of lambda and is printed as "l".
"""

import enum
import logging
from fractions import Fraction
from tokenize import TokenError
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np
from sympy import I, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    rationalize,
    standard_transformations,
)
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.fields import FracElement, field
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement

from .errors import ParseError, PoleError

logger = logging.getLogger(__name__)

FIELD, U, V = field("u,v", QQ_I)
RING = FIELD.ring
RU, RV = RING.gens

RatFunc = FracElement
Gaussian = type(QQ_I.one)
Scalar = Union[int, Fraction, complex, "Gaussian"]

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication_application, convert_xor, rationalize)
_SYM_U, _SYM_V = Symbol("u"), Symbol("v")
_LOCALS = {"u": _SYM_U, "v": _SYM_V, "l": _SYM_U, "i": I, "I": I}


class Infinity(enum.Enum):
    """Marker for an infinite family parameter (e.g. c = oo in D1)."""

    INFINITY = "oo"

    def __str__(self) -> str:
        return self.value


INFINITY = Infinity.INFINITY
Param = Union[Gaussian, Infinity]


def gaussian(re: Union[int, Fraction, str, "Gaussian"] = 0, im: Union[int, Fraction] = 0) -> Gaussian:
    """Build an element of Q(i) from rationals (or pass one through)."""
    if isinstance(re, Gaussian) and not im:
        return re
    if isinstance(re, str):
        return parse_gaussian(re)
    re, im = Fraction(re), Fraction(im)
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def to_gaussian(value: Scalar) -> Gaussian:
    """Coerce ints, Fractions and Gaussian elements into Q(i)."""
    if isinstance(value, Gaussian):
        return value
    if isinstance(value, (int, Fraction)):
        return gaussian(value)
    raise ParseError(f"Cannot use {value!r} as an exact scalar")


def gaussian_to_complex(value: Gaussian) -> complex:
    return complex(float(value.x), float(value.y))


def gaussian_str(value: Gaussian) -> str:
    re, im = Fraction(int(value.x.numerator), int(value.x.denominator)), Fraction(
        int(value.y.numerator), int(value.y.denominator)
    )
    if not im:
        return str(re)
    if not re:
        return f"{im}i" if im not in (1, -1) else ("i" if im == 1 else "-i")
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    return f"{re}{sign}{'' if mag == 1 else mag}i"


def is_real_gaussian(value: Gaussian) -> bool:
    return not value.y


def gaussian_real(value: Gaussian) -> Fraction:
    return Fraction(int(value.x.numerator), int(value.x.denominator))


def parse_gaussian(text: str) -> Gaussian:
    """Parse "1/2", "3+4i", "-i/2" into Q(i). Floats are rationalized."""
    f = parse_ratfunc(text)
    if not (f.numer.is_ground and f.denom.is_ground):
        raise ParseError(f"Expected a constant, got '{text}'")
    return constant_value(f)


def parse_param(text: Union[str, int, Fraction, Gaussian, Infinity]) -> Param:
    """Parse a family parameter; "oo" (or "inf") gives INFINITY."""
    if isinstance(text, Infinity):
        return text
    if isinstance(text, (int, Fraction, Gaussian)):
        return to_gaussian(text)
    cleaned = str(text).strip().lower()
    if cleaned in ("oo", "inf", "infinity", "∞"):
        return INFINITY
    return parse_gaussian(cleaned)


def param_str(value: Param) -> str:
    return str(value) if isinstance(value, Infinity) else gaussian_str(value)


def const(value: Scalar) -> RatFunc:
    return FIELD(to_gaussian(value) if not isinstance(value, complex) else _complex_to_gaussian(value))


def _complex_to_gaussian(value: complex) -> Gaussian:
    return gaussian(Fraction(value.real).limit_denominator(10**12), Fraction(value.imag).limit_denominator(10**12))


I_UNIT = FIELD(QQ_I(0, 1))
I_POLY = RING(QQ_I(0, 1))


def parse_ratfunc(text: str) -> RatFunc:
    """
    Parse a human-readable rational function such as "(1+2u)/(1-2u)".

    Accepts u, v (and l as an alias of u), i for the imaginary unit,
    implicit multiplication and ^ for powers.
    """
    try:
        expr = parse_expr(str(text), local_dict=dict(_LOCALS), transformations=_TRANSFORMATIONS)
        return FIELD.from_expr(expr)
    except (SyntaxError, TokenError, TypeError, ValueError, CoercionFailed, ZeroDivisionError) as e:
        logger.error(f"Could not parse rational function '{text}': {e}")
        raise ParseError(f"Could not parse rational function '{text}': {e}") from e


def format_ratfunc(f: RatFunc, physical: bool = False) -> str:
    """Serialize for JSON reports, e.g. "(2*u + 1)/(1 - 2*u)"; physical forms print u as l."""
    text = str(f.as_expr()).replace("**", "^").replace("I", "i")
    if physical:
        text = text.replace("u", "l")
    return text


def ratfunc_normalize(numer, denom=None) -> RatFunc:
    """
    Canonical form of numer/denom: common factors removed and the leading
    coefficient of the denominator fixed by a unit, so that equality of
    rational functions is structural and f - g is falsy iff f == g.
    """
    n = _as_field(numer)
    d = FIELD.one if denom is None else _as_field(denom)
    if not d:
        raise PoleError("Zero denominator")
    q = n / d
    return FIELD.new(q.numer, q.denom)


def _as_field(value) -> RatFunc:
    if isinstance(value, FracElement):
        return value
    if isinstance(value, PolyElement):
        return FIELD.new(value)
    if isinstance(value, str):
        return parse_ratfunc(value)
    return const(value)


def is_zero(f) -> bool:
    return not f


def as_poly(f) -> PolyElement:
    """Polynomial part of a rational function with constant denominator."""
    if isinstance(f, PolyElement):
        return f
    f = _as_field(f)
    if f.denom.is_ground:
        return f.numer.quo_ground(f.denom.LC)
    raise ValueError(f"{f} is not a polynomial")


def e_factor(x: Scalar) -> RatFunc:
    """e_x(u) = (u + i x/2)/(u - i x/2); e_0 = 1 and e_x e_{-x} = 1."""
    half = to_gaussian(x) * QQ_I(QQ(1, 2), 0) * QQ_I(0, 1)
    return ratfunc_normalize(U + FIELD(half), U - FIELD(half))


def _poly_eval(p: PolyElement, u: complex, v: complex) -> complex:
    total = 0j
    for (a, b), coeff in p.iterterms():
        total += gaussian_to_complex(coeff) * (u ** a) * (v ** b)
    return total


def _poly_eval_exact(p: PolyElement, u: Gaussian, v: Gaussian) -> Gaussian:
    total = QQ_I.zero
    for (a, b), coeff in p.iterterms():
        term = coeff
        for _ in range(a):
            term = term * u
        for _ in range(b):
            term = term * v
        total = total + term
    return total


def ratfunc_eval(f, u: complex = 0.0, v: complex = 0.0, pole_tol: float = 0.0) -> complex:
    """
    Numeric value of f at (u, v).

    Raises:
        PoleError: if the denominator vanishes at the point (|denominator| <= pole_tol).
    """
    f = _as_field(f)
    den = _poly_eval(f.denom, complex(u), complex(v))
    if abs(den) <= pole_tol:
        raise PoleError(f"Pole of {format_ratfunc(f)} at u={u}, v={v}")
    return _poly_eval(f.numer, complex(u), complex(v)) / den


def ratfunc_eval_exact(f, u: Scalar = 0, v: Scalar = 0) -> Gaussian:
    """Exact value in Q(i); raises PoleError at poles."""
    f = _as_field(f)
    gu, gv = to_gaussian(u), to_gaussian(v)
    den = _poly_eval_exact(f.denom, gu, gv)
    if not den:
        raise PoleError(f"Pole of {format_ratfunc(f)} at u={gaussian_str(gu)}, v={gaussian_str(gv)}")
    return _poly_eval_exact(f.numer, gu, gv) / den


def constant_value(f) -> Gaussian:
    f = _as_field(f)
    if not (f.numer.is_ground and f.denom.is_ground):
        raise ValueError(f"{format_ratfunc(f)} is not constant")
    return (f.numer.LC if f.numer else QQ_I.zero) / f.denom.LC


def substitute(f, u_to=None, v_to=None):
    """
    Simultaneous substitution u -> u_to, v -> v_to with polynomial images.

    Works on field elements (returns canonical RatFunc) and on ring elements
    (returns a polynomial).
    """
    replacements = []
    if u_to is not None:
        replacements.append((RU, as_poly(u_to)))
    if v_to is not None:
        replacements.append((RV, as_poly(v_to)))
    if not replacements:
        return f
    if isinstance(f, PolyElement):
        return f.compose(replacements)
    f = _as_field(f)
    return FIELD.new(f.numer.compose(replacements), f.denom.compose(replacements))


def derivative(f, variable: str = "u"):
    """d/du (or d/dv) by the quotient rule on numerator and denominator."""
    gen = RU if variable == "u" else RV
    f = _as_field(f)
    n, d = f.numer, f.denom
    return FIELD.new(n.diff(gen) * d - n * d.diff(gen), d * d)


class RatMatrix:
    """
    Sparse square matrix with entries in Q(i)(u, v) (or in the polynomial
    ring, for the verifier fast paths).

    Rows are stored as {row: {col: entry}} with zero entries dropped. The
    graded structure lives in how matrices are built (see grading.graded_kron);
    products are ordinary matrix products on the graded tensor space.
    """

    __slots__ = ("spec", "size", "factors", "rows")

    def __init__(self, spec, size: int, factors: int = 1, rows: Optional[Dict[int, Dict[int, object]]] = None):
        self.spec = spec
        self.size = size
        self.factors = factors
        self.rows: Dict[int, Dict[int, object]] = {}
        for i, row in (rows or {}).items():
            clean = {j: x for j, x in row.items() if x}
            if clean:
                self.rows[i] = clean

    @classmethod
    def identity(cls, spec, size: int, factors: int = 1, one=None) -> "RatMatrix":
        one = FIELD.one if one is None else one
        return cls(spec, size, factors, {i: {i: one} for i in range(size)})

    @classmethod
    def diagonal(cls, spec, entries: List[object], factors: int = 1) -> "RatMatrix":
        return cls(spec, len(entries), factors, {i: {i: x} for i, x in enumerate(entries)})

    @classmethod
    def from_dense(cls, spec, dense: List[List[object]], factors: int = 1) -> "RatMatrix":
        return cls(spec, len(dense), factors, {i: dict(enumerate(row)) for i, row in enumerate(dense)})

    def __getitem__(self, key: Tuple[int, int]):
        i, j = key
        value = self.rows.get(i, {}).get(j)
        return FIELD.zero if value is None else value

    def entries(self) -> Iterator[Tuple[int, int, object]]:
        for i in sorted(self.rows):
            row = self.rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def copy(self) -> "RatMatrix":
        return RatMatrix(self.spec, self.size, self.factors, {i: dict(r) for i, r in self.rows.items()})

    def map(self, fn) -> "RatMatrix":
        return RatMatrix(self.spec, self.size, self.factors, {i: {j: fn(x) for j, x in r.items()} for i, r in self.rows.items()})

    def _check(self, other: "RatMatrix") -> None:
        if self.size != other.size:
            raise ValueError(f"Shape mismatch: {self.size} vs {other.size}")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            target = rows.setdefault(i, {})
            for j, x in r.items():
                target[j] = target[j] + x if j in target else x
        return RatMatrix(self.spec, self.size, self.factors, rows)

    def __neg__(self) -> "RatMatrix":
        return self.map(lambda x: -x)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def scale(self, scalar) -> "RatMatrix":
        return self.map(lambda x: x * scalar)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        self._check(other)
        rows = {}
        for i, r in self.rows.items():
            rows[i] = row_times(r, other)
        return RatMatrix(self.spec, self.size, self.factors, rows)

    def row(self, i: int) -> Dict[int, object]:
        return dict(self.rows.get(i, {}))

    def is_zero(self) -> bool:
        return not self.rows

    def first_nonzero(self) -> Optional[Tuple[int, int, object]]:
        for entry in self.entries():
            return entry
        return None

    def equals(self, other: "RatMatrix") -> bool:
        return (self - other).is_zero()

    def substitute(self, u_to=None, v_to=None) -> "RatMatrix":
        return self.map(lambda x: substitute(x, u_to, v_to))

    def to_field(self) -> "RatMatrix":
        return self.map(_as_field)

    def common_denominator(self) -> PolyElement:
        lcm = RING.one
        for _, _, x in self.entries():
            if isinstance(x, FracElement) and not x.denom.is_ground:
                lcm = lcm.lcm(x.denom)
        return lcm

    def cleared(self) -> "RatMatrix":
        """Polynomial matrix equal to self times the lcm of its denominators."""
        lcm = self.common_denominator()

        def clear(x):
            x = _as_field(x)
            return as_poly(FIELD.new(x.numer * lcm, x.denom))

        return self.map(clear)

    def max_degree(self) -> int:
        deg = 0
        for _, _, x in self.entries():
            x = _as_field(x)
            deg = max(deg, _total_degree(x.numer), _total_degree(x.denom))
        return deg

    def to_numpy(self, u: complex = 0.0, v: complex = 0.0) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=complex)
        for i, j, x in self.entries():
            out[i, j] = ratfunc_eval(x, u, v)
        return out

    def transpose_plain(self) -> "RatMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for i, j, x in self.entries():
            rows.setdefault(j, {})[i] = x
        return RatMatrix(self.spec, self.size, self.factors, rows)

    def __repr__(self) -> str:
        return f"RatMatrix(size={self.size}, factors={self.factors}, nnz={self.nnz()})"


def _total_degree(p: PolyElement) -> int:
    return max((sum(m) for m in p.monoms()), default=0)


def row_times(row: Dict[int, object], matrix: RatMatrix) -> Dict[int, object]:
    """Row vector (sparse dict) times matrix; zero entries dropped."""
    acc: Dict[int, object] = {}
    for k, a in row.items():
        other = matrix.rows.get(k)
        if not other:
            continue
        for j, b in other.items():
            acc[j] = acc[j] + a * b if j in acc else a * b
    return {j: x for j, x in acc.items() if x}


def ratfunc_product(factors: Iterable[RatFunc]) -> RatFunc:
    out = FIELD.one
    for f in factors:
        out = out * f
    return out
