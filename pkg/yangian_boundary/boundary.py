"""
Reflection (K) matrices: the catalog of families, exact reflection and dual
reflection checks, duality and the transformations that map solutions to
solutions.

Rational families are written with F(c) = (1 + c u)/(1 - c u), F(oo) = -1.
Physical forms are proportional to K(u = -i l) and are polynomial in l for
the diagonal families D1, D3 and D4.
"""

import enum
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .errors import ConstraintViolationError, InadmissibleFamilyError, NotOrthogonalError, ParseError
from .grading import GradingSpec, graded_kron, identity, is_orthosymplectic, super_transpose, to_external
from .ratfunc import (
    FIELD,
    I_POLY,
    I_UNIT,
    INFINITY,
    RU,
    RV,
    U,
    Gaussian,
    Infinity,
    Param,
    RatFunc,
    RatMatrix,
    format_ratfunc,
    gaussian,
    param_str,
    parse_param,
    parse_ratfunc,
)
from .reports import CheckReport, Timing, Witness
from .rmatrix import Normalization, _stream_difference, kappa_poly, r_poly

logger = logging.getLogger(__name__)


class Family(str, enum.Enum):
    IDENTITY = "I"
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D4 = "D4"
    D5 = "D5"
    ANTIDIAG = "ANTIDIAG"
    C1 = "C1"
    C2 = "C2"
    CUSTOM = "CUSTOM"


DIAGONAL_FAMILIES = (Family.IDENTITY, Family.D1, Family.D2, Family.D3, Family.D4, Family.D5)


@dataclass
class KSolution:
    """A K matrix with its family tag, parameters and normalization."""

    spec: GradingSpec
    family: Family
    params: Dict[str, Any]
    normalization: Normalization
    matrix: RatMatrix
    role: str = "minus"
    xi: Dict[str, Param] = field(default_factory=dict)

    @property
    def is_diagonal(self) -> bool:
        return all(i == j for i, j, _ in self.matrix.entries())

    def diagonal(self) -> List[RatFunc]:
        return [self.matrix[i, i] for i in range(self.spec.dim)]

    def describe(self) -> Dict[str, Any]:
        physical = self.normalization == Normalization.PHYSICAL
        return {
            "algebra": self.spec.descriptor,
            "family": self.family.value,
            "params": {k: _param_json(v) for k, v in self.params.items()},
            "xi": {k: param_str(v) for k, v in self.xi.items()},
            "normalization": self.normalization.value,
            "role": self.role,
            "entries": [
                [to_external(i), to_external(j), format_ratfunc(x, physical=physical)]
                for i, j, x in self.matrix.entries()
            ],
        }


def _param_json(value):
    if isinstance(value, (list, tuple)):
        return [_param_json(v) for v in value]
    if isinstance(value, (Gaussian, Infinity)):
        return param_str(value)
    if isinstance(value, RatFunc):
        return format_ratfunc(value)
    return value


# Scalar building blocks


def f_rational(c: Param) -> RatFunc:
    """F(c) = (1 + c u)/(1 - c u); F(oo) = -1."""
    if c is INFINITY:
        return -FIELD.one
    cf = FIELD(c)
    return (1 + cf * U) / (1 - cf * U)


def xi_from_c(c: Param, sign: int = 1) -> Param:
    """xi = sign/c, with c = oo giving xi = 0 and c = 0 giving xi = oo."""
    if c is INFINITY:
        return gaussian(0)
    if not c:
        return INFINITY
    return gaussian(sign) / c


def c_from_xi(xi: Param, sign: int = 1) -> Param:
    return xi_from_c(xi, sign)


def physical_pair(c: Param) -> Tuple[RatFunc, RatFunc]:
    """
    Physical entries (on the "1" class, on the F(c) class) of a diagonal
    block proportional to (1, F(c)) at u = -i l: (-l + i xi, l + i xi), xi = 1/c.
    """
    if c is not INFINITY and not c:
        return FIELD.one, FIELD.one
    xi = xi_from_c(c)
    shift = I_UNIT * FIELD(xi)
    return -U + shift, U + shift


def _projective(c: Param) -> Tuple[Gaussian, Gaussian]:
    if c is INFINITY:
        return gaussian(1), gaussian(0)
    return c, gaussian(1)


def d2_constraint(spec: GradingSpec, c1: Param, c2: Param) -> Gaussian:
    """(kappa - theta0) c1 cm + c1 + cm, homogenized so that oo is allowed."""
    (p1, q1), (p2, q2) = _projective(c1), _projective(c2)
    k = gaussian(spec.kappa) - gaussian(spec.theta0)
    return k * p1 * p2 + p1 * q2 + p2 * q1


def d2_partner(spec: GradingSpec, c1: Param) -> Param:
    """The cm completing c1 to a D2 solution."""
    p1, q1 = _projective(c1)
    den = (gaussian(spec.kappa) - gaussian(spec.theta0)) * p1 + q1
    if not den:
        return INFINITY
    return -p1 / den


def d3_parameter(spec: GradingSpec, m1: int, n1: int) -> Param:
    """c = 2/(kappa - theta0 (2 m1 - 2 n1 - 1)), oo when the denominator vanishes."""
    den = gaussian(spec.kappa) - gaussian(spec.theta0 * (2 * m1 - 2 * n1 - 1))
    if not den:
        return INFINITY
    return gaussian(2) / den


# Index blocks


def so_first_half(spec: GradingSpec) -> List[int]:
    return list(range(spec.m // 2))


def sp_first_half(spec: GradingSpec) -> List[int]:
    return list(range(spec.m, spec.m + spec.n // 2))


def so_middle(spec: GradingSpec) -> Optional[int]:
    return spec.m // 2 if spec.m % 2 else None


# Constructors


def _as_list(value) -> List[Any]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [v for v in str(value).split("|") if v != ""]


def _inadmissible(message: str):
    logger.error(message)
    raise InadmissibleFamilyError(message)


def _diag_from_classes(spec: GradingSpec, one_class: Sequence[int], pair: Tuple[RatFunc, RatFunc]) -> RatMatrix:
    ones = set(one_class)
    return RatMatrix.diagonal(spec, [pair[0] if i in ones else pair[1] for i in range(spec.dim)])


def _pair_for(c: Param, normalization: Normalization) -> Tuple[RatFunc, RatFunc]:
    if normalization == Normalization.PHYSICAL:
        return physical_pair(c)
    return FIELD.one, f_rational(c)


def _to_physical(matrix: RatMatrix) -> RatMatrix:
    return matrix.substitute(u_to=-I_POLY * RU)


def _gaussians(values: Sequence[Any], default: int, count: int, name: str) -> List[Gaussian]:
    values = values or [default] * count
    if len(values) != count:
        raise ParseError(f"Parameter '{name}' needs {count} values, got {len(values)}")
    out = []
    for v in values:
        p = parse_param(v)
        if p is INFINITY:
            raise ParseError(f"Parameter '{name}' must be finite")
        out.append(p)
    return out


def make_k(spec: GradingSpec, family: Union[Family, str], params: Optional[Dict[str, Any]] = None,
           normalization: Normalization = Normalization.RATIONAL, force: bool = False) -> KSolution:
    """
    Construct a catalog K matrix.

    Args:
        spec: Algebra descriptor.
        family: Family tag (I, D1..D5, ANTIDIAG, C1, C2, CUSTOM).
        params: Family parameters; c-type values may be given as xi in the
            physical normalization.
        normalization: rational (variable u) or physical (variable l).
        force: Build the shape even where the family is not admissible
            (negative controls).

    Returns:
        KSolution

    Raises:
        InadmissibleFamilyError: family not available for this algebra.
        ConstraintViolationError: parameters violate the family constraint.
    """
    family = Family(family)
    params = dict(params or {})
    normalization = Normalization(normalization)
    builder = _BUILDERS[family]
    logger.debug(f"Building {family.value} K matrix for {spec} with {params}")
    return builder(spec, params, normalization, force)


def _param_c(params: Dict[str, Any], c_key: str, xi_key: str, sign: int = 1, default: Any = None) -> Param:
    if xi_key in params:
        return c_from_xi(parse_param(params[xi_key]), sign)
    if c_key in params:
        return parse_param(params[c_key])
    if default is None:
        raise ParseError(f"Missing parameter '{c_key}' (or '{xi_key}')")
    return parse_param(default)


def _build_identity(spec, params, normalization, force) -> KSolution:
    return KSolution(spec, Family.IDENTITY, {}, normalization, identity(spec))


def _build_d1(spec, params, normalization, force) -> KSolution:
    if spec.m % 2 and not force:
        _inadmissible(f"D1 needs an even orthogonal dimension, got {spec}")
    c = _param_c(params, "c", "xi")
    ones = so_first_half(spec) + sp_first_half(spec)
    if so_middle(spec) is not None:
        ones.append(so_middle(spec))
    matrix = _diag_from_classes(spec, ones, _pair_for(c, normalization))
    return KSolution(spec, Family.D1, {"c": c}, normalization, matrix, xi={"xi": xi_from_c(c)})


def _build_d2(spec, params, normalization, force) -> KSolution:
    if spec.m < 2 and not force:
        _inadmissible(f"D2 needs orthogonal dimension >= 2, got {spec}")
    c1 = _param_c(params, "c1", "xi1", sign=-1)
    if "c2" in params or "xin" in params:
        c2 = _param_c(params, "c2", "xin", sign=-1)
    else:
        c2 = d2_partner(spec, c1)
    if d2_constraint(spec, c1, c2) and not force:
        message = (f"D2 constraint (kappa-theta0) c1 cm + c1 + cm = 0 violated for c1={param_str(c1)}, "
                   f"cm={param_str(c2)} on {spec}")
        logger.error(message)
        raise ConstraintViolationError(message)
    entries = [FIELD.one] * spec.dim
    entries[0] = f_rational(c1)
    entries[max(spec.m - 1, 0)] = f_rational(c2)
    matrix = RatMatrix.diagonal(spec, entries)
    if normalization == Normalization.PHYSICAL:
        matrix = _to_physical(matrix)
    return KSolution(spec, Family.D2, {"c1": c1, "c2": c2}, normalization, matrix,
                     xi={"xi1": xi_from_c(c1, -1), "xin": xi_from_c(c2, -1)})


def d3_shape_ok(spec: GradingSpec, m1: int, n1: int) -> bool:
    if not (0 <= m1 <= spec.m // 2 and 0 <= n1 <= spec.n // 2):
        return False
    ones = 2 * m1 + 2 * n1
    return ones >= 1 and spec.dim - ones >= 1


def d3_ones(spec: GradingSpec, m1: int, n1: int) -> List[int]:
    ones = list(range(m1)) + list(range(spec.m, spec.m + n1))
    return ones + [spec.bar(i) for i in ones]


def _build_d3(spec, params, normalization, force) -> KSolution:
    m1, n1 = int(params.get("m1", 0)), int(params.get("n1", 0))
    if not d3_shape_ok(spec, m1, n1) and not force:
        _inadmissible(f"D3 with m1={m1}, n1={n1} is not admissible for {spec}")
    c = d3_parameter(spec, m1, n1)
    if "c" in params and parse_param(params["c"]) != c and not force:
        message = f"D3 ({m1},{n1}) on {spec} fixes c={param_str(c)}, got {params['c']}"
        logger.error(message)
        raise ConstraintViolationError(message)
    if "c" in params and force:
        c = parse_param(params["c"])
    matrix = _diag_from_classes(spec, d3_ones(spec, m1, n1), _pair_for(c, normalization))
    return KSolution(spec, Family.D3, {"m1": m1, "n1": n1, "c": c}, normalization, matrix,
                     xi={"xi": xi_from_c(c)})


def _build_d4(spec, params, normalization, force) -> KSolution:
    if not (spec.m == 4 and spec.n == 0) and not force:
        _inadmissible(f"D4 exists only for so(4), got {spec}")
    c2 = _param_c(params, "c2", "xi_minus")
    c3 = _param_c(params, "c3", "xi_plus")
    a2, b2 = _pair_for(c2, normalization)
    a3, b3 = _pair_for(c3, normalization)
    entries = [a2 * a3, b2 * a3, a2 * b3, b2 * b3] + [FIELD.one] * (spec.dim - 4)
    matrix = RatMatrix.diagonal(spec, entries[: spec.dim])
    return KSolution(spec, Family.D4, {"c2": c2, "c3": c3}, normalization, matrix,
                     xi={"xi_minus": xi_from_c(c2), "xi_plus": xi_from_c(c3)})


def _build_d5(spec, params, normalization, force) -> KSolution:
    if not (spec.m == 2 and spec.n == 0) and not force:
        _inadmissible(f"D5 exists only for so(2), got {spec}")
    k1 = parse_ratfunc(params.get("k1", "1"))
    k2 = parse_ratfunc(params.get("k2", "(1+u)/(1-u)"))
    if not k1 or not k2:
        raise ConstraintViolationError("D5 entries must be nonzero")
    matrix = RatMatrix.diagonal(spec, [k1, k2] + [FIELD.one] * (spec.dim - 2))
    if normalization == Normalization.PHYSICAL:
        matrix = _to_physical(matrix)
    return KSolution(spec, Family.D5, {"k1": k1, "k2": k2}, normalization, matrix)


def _build_antidiag(spec, params, normalization, force) -> KSolution:
    pure = spec.n == 0 and spec.m % 2 == 0 or spec.m == 0
    if not pure and not force:
        _inadmissible(f"Constant antidiagonal solutions exist only for so(2m) and sp(2n), got {spec}")
    firsts = so_first_half(spec) + sp_first_half(spec)
    ls = _gaussians(_as_list(params.get("l")), 1, len(firsts), "l")
    rows: Dict[int, Dict[int, RatFunc]] = {}
    for i, li in zip(firsts, ls):
        if not li:
            raise ConstraintViolationError("Antidiagonal entries must be invertible")
        rows.setdefault(i, {})[spec.bar(i)] = FIELD(li)
        rows.setdefault(spec.bar(i), {})[i] = FIELD(1 / li)
    middle = so_middle(spec)
    if middle is not None:
        rows.setdefault(middle, {})[middle] = FIELD.one
    return KSolution(spec, Family.ANTIDIAG, {"l": ls}, normalization, RatMatrix(spec, spec.dim, 1, rows))


def _build_c1(spec, params, normalization, force) -> KSolution:
    if (spec.m % 2 or spec.n < 2) and not force:
        _inadmissible(f"C1 needs an even orthogonal dimension and a symplectic block, got {spec}")
    pairs = sp_first_half(spec)
    ks = _gaussians(_as_list(params.get("k")), 0, len(pairs), "k")
    ls = _gaussians(_as_list(params.get("l")), 1, len(pairs), "l")
    lbars_raw = _as_list(params.get("lbar"))
    common = gaussian(1)
    if lbars_raw:
        lbars = _gaussians(lbars_raw, 1, len(pairs), "lbar")
        if not spec.m and pairs:
            common = ks[0] * ks[0] + ls[0] * lbars[0]
    else:
        lbars = [(common - k * k) / l if l else gaussian(0) for k, l in zip(ks, ls)]
    values = [k * k + l * lb for k, l, lb in zip(ks, ls, lbars)]
    if (any(v != common for v in values) or not common) and not force:
        message = f"C1 needs k_i^2 + l_i l_bar_i equal to {gaussian(1) if spec.m else 'a common nonzero value'}, got {[param_str(v) for v in values]}"
        logger.error(message)
        raise ConstraintViolationError(message)
    rows: Dict[int, Dict[int, RatFunc]] = {}
    for i in so_first_half(spec):
        rows[i] = {i: FIELD.one}
        rows[spec.bar(i)] = {spec.bar(i): -FIELD.one}
    middle = so_middle(spec)
    if middle is not None:
        rows[middle] = {middle: FIELD.one}
    for i, k, l, lb in zip(pairs, ks, ls, lbars):
        ib = spec.bar(i)
        rows.setdefault(i, {}).update({i: FIELD(k), ib: FIELD(l)})
        rows.setdefault(ib, {}).update({ib: -FIELD(k), i: FIELD(lb)})
    return KSolution(spec, Family.C1, {"k": ks, "l": ls, "lbar": lbars}, normalization,
                     RatMatrix(spec, spec.dim, 1, rows))


def c2_admissible(spec: GradingSpec, m1: int, m2: int) -> bool:
    if spec.m % 2 or spec.m < 2 or spec.n < 2:
        return False
    if not (m1 >= m2 >= 0 and m1 + m2 <= spec.m // 2 - 1):
        return False
    diff = m1 - m2
    return diff <= spec.n // 2 and (diff - spec.n // 2) % 2 == 0


def _build_c2(spec, params, normalization, force) -> KSolution:
    m1, m2 = int(params.get("m1", 0)), int(params.get("m2", 0))
    if not c2_admissible(spec, m1, m2) and not force:
        _inadmissible(f"C2 with m1={m1}, m2={m2} is not admissible for {spec}")
    n1 = (spec.n + 2 * m1 - 2 * m2) // 4
    half = spec.m // 2
    anti = list(range(m1 + m2, half))
    ls = _gaussians(_as_list(params.get("l")), 1, len(anti), "l")
    rows: Dict[int, Dict[int, RatFunc]] = {}
    for i in range(m1 + m2):
        sign = FIELD.one if i < m1 else -FIELD.one
        rows[i] = {i: sign}
        rows[spec.bar(i)] = {spec.bar(i): sign}
    for i, li in zip(anti, ls):
        if not li:
            raise ConstraintViolationError("Antidiagonal entries must be invertible")
        rows[i] = {spec.bar(i): FIELD(li)}
        rows[spec.bar(i)] = {i: FIELD(1 / li)}
    for offset, i in enumerate(sp_first_half(spec)):
        sign = FIELD.one if offset < n1 else -FIELD.one
        rows[i] = {i: sign}
        rows[spec.bar(i)] = {spec.bar(i): sign}
    return KSolution(spec, Family.C2, {"m1": m1, "m2": m2, "n1": n1, "l": ls}, normalization,
                     RatMatrix(spec, spec.dim, 1, rows))


def _build_custom(spec, params, normalization, force) -> KSolution:
    dense = params.get("matrix")
    if not dense or len(dense) != spec.dim or any(len(row) != spec.dim for row in dense):
        raise ParseError(f"CUSTOM needs a {spec.dim}x{spec.dim} 'matrix' of rational functions")
    matrix = RatMatrix.from_dense(spec, [[parse_ratfunc(str(x)) for x in row] for row in dense])
    return KSolution(spec, Family.CUSTOM, {"matrix": dense}, normalization, matrix)


_BUILDERS = {
    Family.IDENTITY: _build_identity,
    Family.D1: _build_d1,
    Family.D2: _build_d2,
    Family.D3: _build_d3,
    Family.D4: _build_d4,
    Family.D5: _build_d5,
    Family.ANTIDIAG: _build_antidiag,
    Family.C1: _build_c1,
    Family.C2: _build_c2,
    Family.CUSTOM: _build_custom,
}


def parse_boundary(text: str) -> Tuple[Family, Dict[str, Any]]:
    """
    Parse "D1:c=1/2", "D3:m1=1,n1=0", "C1:k=3/5,l=4/5,lbar=4/5" or "I".

    List-valued parameters separate their items with '|'.
    """
    head, _, rest = str(text).strip().partition(":")
    try:
        family = Family(head.strip().upper() if head.strip().upper() != "IDENTITY" else "I")
    except ValueError as e:
        raise ParseError(f"Unknown boundary family '{head}'") from e
    params: Dict[str, Any] = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"Bad boundary parameter '{item}' in '{text}'")
        value = value.strip()
        params[key.strip()] = value.split("|") if "|" in value else value
    return family, params


# Verification


def _witness(hit) -> Witness:
    row, col, value = hit
    return Witness(row=to_external(row), col=to_external(col), value=format_ratfunc(FIELD.new(value)))


def _poly_pair(matrix: RatMatrix) -> Tuple[RatMatrix, RatMatrix]:
    """K with denominators cleared, as polynomials in u and in v."""
    k_u = matrix.cleared()
    return k_u, k_u.substitute(u_to=RV)


def reflection_residual(spec: GradingSpec, matrix: RatMatrix, normalization: Normalization):
    """First nonzero entry of R(u-v) K1(u) R(u+v) K2(v) - K2(v) R(u+v) K1(u) R(u-v), or None."""
    k_u, k_v = _poly_pair(matrix)
    eye = identity(spec, 1, poly=True)
    k1, k2 = graded_kron(k_u, eye), graded_kron(eye, k_v)
    r_minus = r_poly(spec, RU - RV, normalization)
    r_plus = r_poly(spec, RU + RV, normalization)
    return _stream_difference([r_minus, k1, r_plus, k2], [k2, r_plus, k1, r_minus], r_minus.size)


def dual_reflection_residual(spec: GradingSpec, matrix: RatMatrix):
    """
    R(v-u) K1^{t1}(u) R(-u-v-2i kappa) K2^{t2}(v) = K2^{t2}(v) R(-u-v-2i kappa) K1^{t1}(u) R(v-u),
    physical normalization.
    """
    k_u, k_v = _poly_pair(super_transpose(matrix))
    eye = identity(spec, 1, poly=True)
    k1, k2 = graded_kron(k_u, eye), graded_kron(eye, k_v)
    kap = kappa_poly(spec)
    r_diff = r_poly(spec, RV - RU, Normalization.PHYSICAL)
    r_cross = r_poly(spec, -RU - RV - 2 * I_POLY * kap, Normalization.PHYSICAL)
    return _stream_difference([r_diff, k1, r_cross, k2], [k2, r_cross, k1, r_diff], r_diff.size)


def _check_report(identity_name: str, k: KSolution, hit, start: float) -> CheckReport:
    report = CheckReport(
        identity=identity_name,
        algebra=k.spec.descriptor,
        passed=hit is None,
        details={
            "family": k.family.value,
            "params": {key: _param_json(v) for key, v in k.params.items()},
            "normalization": k.normalization.value,
        },
    )
    if hit is not None:
        report.witness = _witness(hit)
        logger.warning(f"{identity_name} fails for {k.family.value} on {k.spec} at entry {hit[0]},{hit[1]}")
    report.timing = Timing(elapsed_ms=round((time.perf_counter() - start) * 1000.0, 3))
    return report


def verify_reflection(k: KSolution) -> CheckReport:
    """Exact reflection equation for K in its own normalization."""
    start = time.perf_counter()
    logger.info(f"Verifying reflection equation for {k.family.value} on {k.spec}")
    hit = reflection_residual(k.spec, k.matrix, k.normalization)
    return _check_report("reflection", k, hit, start)


def verify_dual_reflection(k_plus: KSolution) -> CheckReport:
    start = time.perf_counter()
    if k_plus.normalization != Normalization.PHYSICAL:
        raise ValueError("The dual reflection equation is checked in the physical normalization")
    hit = dual_reflection_residual(k_plus.spec, k_plus.matrix)
    return _check_report("dual-reflection", k_plus, hit, start)


def to_physical(k: KSolution) -> KSolution:
    """Physical form of a rational solution, rebuilt through the family constructor when possible."""
    if k.normalization == Normalization.PHYSICAL:
        return k
    if k.family in (Family.CUSTOM,):
        return KSolution(k.spec, k.family, dict(k.params), Normalization.PHYSICAL, _to_physical(k.matrix), k.role, dict(k.xi))
    params = {key: (v if not isinstance(v, RatFunc) else format_ratfunc(v)) for key, v in k.params.items()}
    return make_k(k.spec, k.family, params, Normalization.PHYSICAL, force=True)


def dualize_k(k_minus: KSolution) -> KSolution:
    """K+(l) = K-(-l - i kappa)^t, physical normalization; an involution."""
    k_minus = to_physical(k_minus)
    kap = kappa_poly(k_minus.spec)
    shifted = k_minus.matrix.substitute(u_to=-RU - I_POLY * kap)
    role = "plus" if k_minus.role == "minus" else "minus"
    return KSolution(k_minus.spec, k_minus.family, dict(k_minus.params), Normalization.PHYSICAL,
                     super_transpose(shifted), role, dict(k_minus.xi))


class TransformMode(str, enum.Enum):
    TRANSPOSE = "transpose"
    CONJUGATE = "conjugate"
    CONJUGATE_TRANSPOSE = "conjugate-transpose"


def transform_k(k: KSolution, mode: Union[TransformMode, str], u_matrix: Optional[RatMatrix] = None) -> KSolution:
    """
    K -> K^t, U K U^t or U K^t U^t for a constant orthosymplectic U.

    Raises:
        NotOrthogonalError: U U^t != 1.
    """
    mode = TransformMode(mode)
    matrix = k.matrix
    if mode in (TransformMode.TRANSPOSE, TransformMode.CONJUGATE_TRANSPOSE):
        matrix = super_transpose(matrix)
    if mode in (TransformMode.CONJUGATE, TransformMode.CONJUGATE_TRANSPOSE):
        if u_matrix is None:
            raise ValueError(f"Mode {mode.value} needs a matrix U")
        if not is_orthosymplectic(u_matrix):
            message = f"U is not orthosymplectic for {k.spec}"
            logger.error(message)
            raise NotOrthogonalError(message)
        matrix = u_matrix @ matrix @ super_transpose(u_matrix)
    params = {"derived_from": k.family.value, "transform": mode.value}
    return KSolution(k.spec, Family.CUSTOM, params, k.normalization, matrix, k.role, dict(k.xi))


def signed_permutation(spec: GradingSpec, perm: Sequence[int], signs: Optional[Sequence[int]] = None) -> RatMatrix:
    """U e_i = sign_i e_{perm(i)}, as a RatMatrix."""
    signs = signs or [1] * spec.dim
    rows = {perm[i]: {i: FIELD(signs[i])} for i in range(spec.dim)}
    return RatMatrix(spec, spec.dim, 1, rows)


# Relabelling and catalog


def canonical_shape(spec: GradingSpec, labels: Sequence[Any]) -> Tuple[Any, ...]:
    """
    Lexicographically minimal relabelling of a per-index label vector under
    permutations of conjugate pairs within each block and swaps inside a pair.
    """
    def block(firsts):
        pairs = [tuple(sorted((labels[i], labels[spec.bar(i)]), key=str)) for i in firsts]
        return tuple(sorted(pairs, key=str))

    middle = so_middle(spec)
    return (block(so_first_half(spec)), labels[middle] if middle is not None else None, block(sp_first_half(spec)))


def d4_degenerations(spec: GradingSpec, c: Param = None) -> Dict[str, bool]:
    """
    Exact checks that D4 reduces to D1 (c2 c3 = 0), D2 up to relabelling
    (c2 + c3 = 0) and D3 (c2 = c3 = oo).
    """
    c = gaussian(Fraction(1, 3)) if c is None else c
    out = {}
    d4 = make_k(spec, Family.D4, {"c2": 0, "c3": c})
    out["c2=0 -> D1"] = d4.matrix.equals(make_k(spec, Family.D1, {"c": c}).matrix)
    d4 = make_k(spec, Family.D4, {"c2": c, "c3": -c})
    d2 = make_k(spec, Family.D2, {"c1": c, "c2": -c})
    # pairs (1,4) and (2,3) exchanged
    u_perm = signed_permutation(spec, [1, 0, 3, 2])
    out["c2=-c3 -> D2"] = (u_perm @ d4.matrix @ super_transpose(u_perm)).equals(d2.matrix)
    d4 = make_k(spec, Family.D4, {"c2": "oo", "c3": "oo"})
    out["c2=c3=oo -> D3"] = d4.matrix.equals(make_k(spec, Family.D3, {"m1": 1, "n1": 0}).matrix)
    return out


def admissible_families(spec: GradingSpec) -> List[Family]:
    out = [Family.IDENTITY]
    if spec.m % 2 == 0:
        out.append(Family.D1)
    if spec.m >= 2:
        out.append(Family.D2)
    if any(d3_shape_ok(spec, a, b) for a in range(spec.m // 2 + 1) for b in range(spec.n // 2 + 1)):
        out.append(Family.D3)
    if spec.m == 4 and spec.n == 0:
        out.append(Family.D4)
    if spec.m == 2 and spec.n == 0:
        out.append(Family.D5)
    if (spec.n == 0 and spec.m % 2 == 0) or spec.m == 0:
        out.append(Family.ANTIDIAG)
    if spec.m % 2 == 0 and spec.n >= 2:
        out.append(Family.C1)
    if any(c2_admissible(spec, a, b) for a in range(spec.m) for b in range(spec.m)):
        out.append(Family.C2)
    return out


def catalog(spec: GradingSpec, normalization: Normalization = Normalization.RATIONAL) -> List[KSolution]:
    """One representative (or all discrete variants) of every admissible family."""
    out: List[KSolution] = []
    for family in admissible_families(spec):
        if family == Family.D1:
            for c in ("1/2", "oo"):
                out.append(make_k(spec, family, {"c": c}, normalization))
        elif family == Family.D2:
            out.append(make_k(spec, family, {"c1": "1/2"}, normalization))
        elif family == Family.D3:
            for m1 in range(spec.m // 2 + 1):
                for n1 in range(spec.n // 2 + 1):
                    if d3_shape_ok(spec, m1, n1):
                        out.append(make_k(spec, family, {"m1": m1, "n1": n1}, normalization))
        elif family == Family.D4:
            out.append(make_k(spec, family, {"c2": "1/2", "c3": "1/3"}, normalization))
        elif family == Family.D5:
            out.append(make_k(spec, family, {"k1": "1", "k2": "(1+2u)/(1-3u^2)"}, normalization))
        elif family == Family.ANTIDIAG:
            pairs = len(so_first_half(spec)) + len(sp_first_half(spec))
            out.append(make_k(spec, family, {"l": [str(j + 2) for j in range(pairs)]}, normalization))
        elif family == Family.C1:
            pairs = len(sp_first_half(spec))
            out.append(make_k(spec, family, {"k": ["3/5"] * pairs, "l": ["4/5"] * pairs, "lbar": ["4/5"] * pairs},
                              normalization))
        elif family == Family.C2:
            for m1 in range(spec.m):
                for m2 in range(m1 + 1):
                    if c2_admissible(spec, m1, m2):
                        out.append(make_k(spec, family, {"m1": m1, "m2": m2, "l": "2"}, normalization))
        else:
            out.append(make_k(spec, family, {}, normalization))
    return out
