"""
Re-derivation of the diagonal reflection-matrix classification by exact
ansatz enumeration.

Two-class shapes are enumerated up to relabelling of conjugate pairs;
three-class shapes are the partitions into three classes that survive the
cocycle conditions on the ratios c_ij. Each shape is substituted into the
reflection equation with the parameters kept as polynomial variables. The
residual is grouped by its (u, v) monomials and the parameter constraints are
read off from the gcd of the coefficients. Infinite parameters (F = -1) are tested directly.
"""

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations, combinations_with_replacement
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .boundary import (
    Family,
    f_rational,
    make_k,
    reflection_residual,
    so_first_half,
    so_middle,
    sp_first_half,
    verify_reflection,
)
from .grading import GradingSpec, graded_kron, identity
from .ratfunc import FIELD, INFINITY, Param, RatMatrix, gaussian, param_str
from .rmatrix import Normalization, r_poly

logger = logging.getLogger(__name__)

PARAM_RING, PU, PV, PC1, PC2 = ring("u,v,c1,c2", QQ)

Classes = FrozenSet[int]
ONE: Classes = frozenset()
F1: Classes = frozenset({1})
F2: Classes = frozenset({2})
F12: Classes = frozenset({1, 2})


@dataclass
class ClassificationEntry:
    family: str
    shape: str
    kind: str
    m1: Optional[int] = None
    n1: Optional[int] = None
    values: List[str] = field(default_factory=list)
    constraint: Optional[str] = None
    verified: bool = False


@dataclass
class ClassificationResult:
    algebra: str
    entries: List[ClassificationEntry]
    rejected_shapes: List[str]

    @property
    def families(self) -> List[str]:
        return sorted({e.family for e in self.entries})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra,
            "families": self.families,
            "entries": [asdict(e) for e in self.entries],
            "rejected_shapes": self.rejected_shapes,
        }


# Residual machinery, generic over a polynomial ring with gens (u, v, params...)


def residual_entries(spec: GradingSpec, k_u: RatMatrix, k_v: RatMatrix, pr) -> List[Any]:
    """All nonzero entries of the reflection-equation residual (rational normalization)."""
    u, v = pr.gens[0], pr.gens[1]
    eye = identity(spec, 1, ring=pr)
    k1, k2 = graded_kron(k_u, eye), graded_kron(eye, k_v)
    r_minus = r_poly(spec, u - v)
    r_plus = r_poly(spec, u + v)
    left = r_minus @ k1 @ r_plus @ k2
    right = k2 @ r_plus @ k1 @ r_minus
    return [x for _, _, x in (left - right).entries()]


def coefficient_polys(entries: Sequence[Any], pr) -> List[Any]:
    """Split each entry by (u, v) monomial; return the parameter polynomials."""
    nvars = len(pr.gens)
    out = []
    for p in entries:
        groups: Dict[Tuple[int, int], Dict[Tuple[int, ...], Any]] = {}
        for monom, coeff in p.iterterms():
            groups.setdefault(monom[:2], {})[(0, 0) + tuple(monom[2:nvars])] = coeff
        out.extend(pr.from_dict(terms) for terms in groups.values())
    return [q for q in out if q]


def constraint_gcd(polys: Sequence[Any]):
    return reduce(lambda a, b: a.gcd(b), polys)


def canonical_constraint(poly) -> Any:
    """Monic representative of a constraint polynomial (zero stays zero)."""
    return poly.monic() if poly else poly


def format_constraint(poly) -> str:
    return str(poly.as_expr()).replace("**", "^")


def _rational_roots(poly, gen_index: int) -> List[Fraction]:
    expr = poly.as_expr()
    symbol = sympy.Symbol(str(poly.ring.symbols[gen_index]))
    out = []
    for root in sympy.roots(sympy.Poly(expr, symbol)).keys():
        if root.is_Rational:
            out.append(Fraction(int(root.p), int(root.q)))
        else:
            logger.warning(f"Skipping irrational root {root} of {format_constraint(poly)}")
    return sorted(out)


# Diagonal shapes


def _entry(pr, classes: Classes, used: Sequence[int], var: Any):
    params = {1: pr.gens[2], 2: pr.gens[3]}
    out = pr.one
    for j in used:
        out *= (1 + params[j] * var) if j in classes else (1 - params[j] * var)
    return out


def shape_matrices(spec: GradingSpec, labels: Sequence[Classes]) -> Tuple[RatMatrix, RatMatrix]:
    """Cleared diagonal K(u), K(v) with the parameters as ring variables."""
    used = sorted(set().union(*labels))
    diag_u = [_entry(PARAM_RING, c, used, PU) for c in labels]
    diag_v = [_entry(PARAM_RING, c, used, PV) for c in labels]
    return RatMatrix.diagonal(spec, diag_u), RatMatrix.diagonal(spec, diag_v)


def shape_string(labels: Sequence[Classes]) -> str:
    names = {ONE: "1", F1: "F1", F2: "F2", F12: "F1F2"}
    return ",".join(names[c] for c in labels)


def numeric_shape(spec: GradingSpec, labels: Sequence[Classes], c1: Param, c2: Param = None) -> RatMatrix:
    values = {1: c1, 2: c2}
    entries = []
    for classes in labels:
        x = FIELD.one
        for j in classes:
            x *= f_rational(values[j])
        entries.append(x)
    return RatMatrix.diagonal(spec, entries)


def _shape_holds(spec: GradingSpec, labels: Sequence[Classes], c1: Param, c2: Param = None) -> bool:
    return reflection_residual(spec, numeric_shape(spec, labels, c1, c2), Normalization.RATIONAL) is None


def two_class_shapes(spec: GradingSpec):
    """
    Canonical two-class diagonal shapes: each conjugate pair is "AA", "BB" or
    split "AB"; the odd-orthogonal middle index is A or B.
    """
    so_pairs, sp_pairs = so_first_half(spec), sp_first_half(spec)
    middle = so_middle(spec)
    middles = [ONE, F1] if middle is not None else [None]
    for so_states in combinations_with_replacement(("AA", "AB", "BB"), len(so_pairs)):
        for sp_states in combinations_with_replacement(("AA", "AB", "BB"), len(sp_pairs)):
            for mid in middles:
                labels: List[Classes] = [ONE] * spec.dim
                for i, state in list(zip(so_pairs, so_states)) + list(zip(sp_pairs, sp_states)):
                    labels[i] = ONE if state[0] == "A" else F1
                    labels[spec.bar(i)] = ONE if state[1] == "A" else F1
                if mid is not None:
                    labels[middle] = mid
                if all(c == ONE for c in labels) or all(c == F1 for c in labels):
                    continue
                yield so_states, sp_states, mid, labels


def _analyse_one_parameter(spec: GradingSpec, labels: Sequence[Classes]) -> Tuple[str, List[Param]]:
    k_u, k_v = shape_matrices(spec, labels)
    coeffs = coefficient_polys(residual_entries(spec, k_u, k_v, PARAM_RING), PARAM_RING)
    values: List[Param] = []
    if not coeffs:
        return "free", values
    g = constraint_gcd(coeffs)
    if g.degree(PC1) > 0:
        values = [gaussian(r) for r in _rational_roots(g, 2) if r]
    if _shape_holds(spec, labels, INFINITY):
        values.append(INFINITY)
    return ("points" if values else "none"), values


def set_partitions(size: int, blocks: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings: block labels of every partition of range(size) into exactly `blocks` classes."""

    def grow(prefix: List[int], top: int):
        if blocks - (top + 1) > size - len(prefix):
            return
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for b in range(min(top + 2, blocks)):
            yield from grow(prefix + [b], max(top, b))

    if size >= blocks:
        yield from grow([0], 0)


def cocycle_admissible(spec: GradingSpec, assignment: Sequence[int]) -> bool:
    """
    No three pairwise non-conjugate indices lie in three different classes.

    For such a triple c_ij + c_jk + c_ki = 0 and c_ij c_jk c_ki = 0 would force
    two of them into one class.
    """
    for i, j, k in combinations(range(len(assignment)), 3):
        if len({assignment[i], assignment[j], assignment[k]}) < 3:
            continue
        if all(spec.bar(p) != q for p, q in ((i, j), (j, k), (i, k))):
            return False
    return True


def three_class_shapes(spec: GradingSpec) -> Iterator[Tuple[List[Classes], bool]]:
    """
    Cocycle-admissible three-class diagonal shapes with their D2 flag.

    The normalizing class is the largest class closed under conjugation (the
    largest class when none is); the other two carry c1 and c2 in order of
    their first index.
    """
    for assignment in set_partitions(spec.dim, 3):
        if not cocycle_admissible(spec, assignment):
            continue
        classes = [frozenset(i for i, b in enumerate(assignment) if b == block) for block in range(3)]
        closed = [c for c in classes if all(spec.bar(i) in c for i in c)]
        base = max(closed or classes, key=len)
        first, second = sorted((c for c in classes if c is not base), key=min)
        labels: List[Classes] = [ONE] * spec.dim
        for i in first:
            labels[i] = F1
        for i in second:
            labels[i] = F2
        i = min(first)
        d2 = first == {i} and second == {spec.bar(i)} and i < spec.m and spec.bar(i) != i
        yield labels, d2


def _genuine_part(g):
    """Drop the factors c1, c2 and c1 - c2, on which two classes merge."""
    collapses = [canonical_constraint(PC1), canonical_constraint(PC2), canonical_constraint(PC1 - PC2)]
    out = PARAM_RING.one
    for factor, _ in g.factor_list()[1]:
        if canonical_constraint(factor) not in collapses:
            out *= factor
    return canonical_constraint(out)


def _point_on(constraint) -> Optional[Tuple[Param, Param]]:
    """A rational point (c1, c2) on the constraint curve with c1 != c2 and both nonzero."""
    c1, c2 = sympy.Symbol("c1"), sympy.Symbol("c2")
    expr = constraint.as_expr()
    for x in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)):
        poly = sympy.Poly(expr.subs(c1, sympy.Rational(x.numerator, x.denominator)), c2)
        if poly.degree() <= 0:
            continue
        for root in sympy.roots(poly):
            if root.is_Rational and root != 0 and root != sympy.Rational(x.numerator, x.denominator):
                return gaussian(x), gaussian(Fraction(int(root.p), int(root.q)))
    return None


def _analyse_two_parameter(spec: GradingSpec, labels: Sequence[Classes]) -> ClassificationEntry:
    k_u, k_v = shape_matrices(spec, labels)
    coeffs = coefficient_polys(residual_entries(spec, k_u, k_v, PARAM_RING), PARAM_RING)
    text = shape_string(labels)
    if not coeffs:
        return ClassificationEntry(family="", shape=text, kind="free",
                                   verified=_shape_holds(spec, labels, gaussian(Fraction(1, 2)), gaussian(Fraction(1, 3))))
    g = _genuine_part(constraint_gcd(coeffs))
    if g.is_ground:
        return ClassificationEntry(family="", shape=text, kind="none")
    point = _point_on(g)
    return ClassificationEntry(
        family="",
        shape=text,
        kind="quadric",
        constraint=format_constraint(g),
        values=[param_str(c) for c in point] if point else [],
        verified=point is not None and _shape_holds(spec, labels, *point),
    )


def classify_diagonal(spec: GradingSpec) -> ClassificationResult:
    """
    Enumerate diagonal ansatz shapes and report which families survive.

    Returns:
        ClassificationResult with one entry per surviving shape, each
        re-verified with concrete parameter values.
    """
    logger.info(f"Classifying diagonal reflection matrices for {spec}")
    entries: List[ClassificationEntry] = []
    rejected: List[str] = []

    for so_states, sp_states, mid, labels in two_class_shapes(spec):
        states = so_states + sp_states
        split = all(s == "AB" for s in states) and mid is None
        unsplit = all(s != "AB" for s in states)
        if unsplit and mid == ONE:
            # complement of a shape with the middle index in B, up to normalization
            continue
        kind, values = _analyse_one_parameter(spec, labels)
        text = shape_string(labels)
        if kind == "none":
            rejected.append(text)
            continue
        if split:
            entry = ClassificationEntry(family=Family.D1.value, shape=text, kind=kind,
                                        values=[param_str(v) for v in values])
            entry.verified = kind == "free" and _shape_holds(spec, labels, gaussian(Fraction(1, 3)))
        elif unsplit:
            m1 = sum(1 for s in so_states if s == "AA")
            n1 = sum(1 for s in sp_states if s == "AA")
            entry = ClassificationEntry(family=Family.D3.value, shape=text, kind=kind, m1=m1, n1=n1,
                                        values=[param_str(v) for v in values])
            entry.verified = all(_shape_holds(spec, labels, v) for v in values)
        else:
            family = Family.D4.value if (spec.m, spec.n) == (4, 0) else "UNCLASSIFIED"
            logger.warning(f"Mixed shape {text} survives on {spec}; tagged {family}")
            entry = ClassificationEntry(family=family, shape=text, kind=kind, values=[param_str(v) for v in values])
            entry.verified = all(_shape_holds(spec, labels, v) for v in values) if values else True
        entries.append(entry)

    seen = []
    for labels, d2 in three_class_shapes(spec):
        entry = _analyse_two_parameter(spec, labels)
        if entry.kind == "none":
            rejected.append(entry.shape)
            continue
        if d2:
            entry.family = Family.D2.value
        elif (spec.m, spec.n) == (4, 0):
            entry.family = Family.D4.value
        else:
            entry.family = "UNCLASSIFIED"
            logger.warning(f"Three-class shape {entry.shape} survives on {spec}; tagged UNCLASSIFIED")
        key = (entry.family, entry.kind, entry.constraint)
        if key in seen:
            continue
        seen.append(key)
        entries.append(entry)
    if (spec.m, spec.n) == (4, 0):
        entries.append(_classify_d4(spec))
    if (spec.m, spec.n) == (2, 0):
        k = make_k(spec, Family.D5, {"k1": "(1+u)/(1-2u)", "k2": "u^2+3"})
        entries.append(ClassificationEntry(family=Family.D5.value, shape="k1(u),k2(u)", kind="free",
                                           verified=verify_reflection(k).passed))

    entries = [e for e in entries if e is not None and e.kind != "none"]
    result = ClassificationResult(algebra=spec.descriptor, entries=entries, rejected_shapes=rejected)
    logger.info(f"Classification for {spec}: families {result.families}, {len(rejected)} shapes rejected")
    return result


def _classify_d4(spec: GradingSpec) -> ClassificationEntry:
    labels = [ONE, F1, F2, F12]
    k_u, k_v = shape_matrices(spec, labels)
    coeffs = coefficient_polys(residual_entries(spec, k_u, k_v, PARAM_RING), PARAM_RING)
    kind = "free" if not coeffs else "none"
    k = make_k(spec, Family.D4, {"c2": "1/2", "c3": "1/3"})
    return ClassificationEntry(family=Family.D4.value, shape=shape_string(labels), kind=kind,
                               verified=verify_reflection(k).passed)


def expected_d2_constraint(spec: GradingSpec):
    """(kappa - theta0) c1 c2 + c1 + c2 in PARAM_RING, monic."""
    k = spec.kappa - spec.theta0
    poly = PARAM_RING(QQ(k.numerator, k.denominator)) * PC1 * PC2 + PC1 + PC2
    return canonical_constraint(poly)


# Non-diagonal searches


def solve_antidiagonal(spec: GradingSpec) -> List[Dict[str, str]]:
    """
    Brute-force constant antidiagonal solver: K = sum l_i E_{i, bar i} with
    l_1 = 1; returns the invertible solutions found by sympy.solve.
    """
    names = ["u", "v"] + [f"l{i + 1}" for i in range(spec.dim)]
    pr = ring(",".join(names), QQ)[0]
    ls = pr.gens[2:]
    rows = {i: {spec.bar(i): ls[i]} for i in range(spec.dim)}
    k = RatMatrix(spec, spec.dim, 1, rows)
    coeffs = coefficient_polys(residual_entries(spec, k, k, pr), pr)
    symbols = [sympy.Symbol(n) for n in names[2:]]
    equations = [sympy.sympify(c.as_expr()).subs(symbols[0], 1) for c in coeffs]
    equations = [e for e in equations if e != 0]
    unknowns = symbols[1:]
    if not equations:
        solutions = [{}]
    else:
        solutions = sympy.solve(equations, unknowns, dict=True)
    out = []
    for sol in solutions:
        values = {s: sympy.simplify(sol.get(s, s)) for s in unknowns}
        if any(v == 0 for v in values.values()):
            continue
        record = {str(symbols[0]): "1"}
        record.update({str(s): str(v) for s, v in values.items()})
        out.append(record)
    logger.info(f"Antidiagonal search on {spec}: {len(out)} invertible solution(s)")
    return out


def mixed_slope_roots(spec: GradingSpec, k_value: Fraction = Fraction(3, 5), l_value: Fraction = Fraction(4, 5)) -> List[Fraction]:
    """
    Give the symplectic diagonal of a C1 solution a slope s (k -> k + s u) and
    return the values of s allowed by the reflection equation.
    """
    pr, pu, pv, ps = ring("u,v,s", QQ)
    lbar = (1 - k_value * k_value) / l_value

    def build(var):
        rows: Dict[int, Dict[int, Any]] = {}
        for i in so_first_half(spec):
            rows[i] = {i: pr.one}
            rows[spec.bar(i)] = {spec.bar(i): -pr.one}
        middle = so_middle(spec)
        if middle is not None:
            rows[middle] = {middle: pr.one}
        kq, lq, lbq = (pr(QQ(x.numerator, x.denominator)) for x in (k_value, l_value, lbar))
        for i in sp_first_half(spec):
            ib = spec.bar(i)
            rows[i] = {i: kq + ps * var, ib: lq}
            rows[ib] = {ib: -kq - ps * var, i: lbq}
        return RatMatrix(spec, spec.dim, 1, rows)

    coeffs = coefficient_polys(residual_entries(spec, build(pu), build(pv), pr), pr)
    if not coeffs:
        logger.warning(f"Slope is unconstrained on {spec}")
        return []
    return _rational_roots(constraint_gcd(coeffs), 2)
