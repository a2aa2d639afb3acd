"""
Graded index bookkeeping for the vector representation of so(m), sp(n) and osp(m|n).

Indices are 1-based in reports and 0-based here; `to_external`/`to_internal`
are the only translation points. Operators on the graded tensor space are
RatMatrix objects; an elementary tensor E_{i1 j1} x ... x E_{iF jF} sits at
row (i1..iF), column (j1..jF) with the Koszul sign
prod_{a<b} (-1)^{([i_a]+[j_a]) [i_b]}.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

from .errors import GradingError, ParseError
from .ratfunc import FIELD, RING, RatMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GradingSpec:
    """Algebra descriptor with every derived sign precomputed."""

    m: int
    n: int
    theta0: int
    kappa: Fraction
    odd: Tuple[bool, ...] = field(repr=False)
    theta: Tuple[int, ...] = field(repr=False)
    conj: Tuple[int, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.m + self.n

    @property
    def is_pure(self) -> bool:
        return self.m == 0 or self.n == 0

    @property
    def series(self) -> str:
        """'so', 'sp' or 'osp'."""
        if self.n == 0:
            return "so"
        if self.m == 0:
            return "sp"
        return "osp"

    @property
    def descriptor(self) -> str:
        if self.series == "so":
            return f"so:{self.m}"
        if self.series == "sp":
            return f"sp:{self.n}"
        return f"osp:{self.m}:{self.n}" + ("" if self.theta0 == 1 else ":-1")

    def grade(self, i: int) -> int:
        return 1 if self.odd[i] else 0

    def sign(self, i: int) -> int:
        """(-1)^{[i]}"""
        return -1 if self.odd[i] else 1

    def bar(self, i: int) -> int:
        return self.conj[i]

    def __str__(self) -> str:
        return self.descriptor


def build_grading(m: int, n: int, theta0: int = None) -> GradingSpec:
    """
    Build the descriptor of so(m) (n=0), sp(n) (m=0) or osp(m|n).

    Args:
        m: Orthogonal dimension.
        n: Symplectic dimension, even.
        theta0: +1 or -1; defaults to -1 for pure sp and +1 otherwise.

    Returns:
        GradingSpec with gradings, theta signs, conjugation and kappa.
    """
    if theta0 is None:
        theta0 = -1 if m == 0 else 1
    if m < 0 or n < 0:
        raise GradingError(f"Dimensions must be non-negative, got m={m}, n={n}")
    if n % 2:
        raise GradingError(f"Symplectic dimension must be even, got n={n}")
    if m + n < 1:
        raise GradingError("Empty algebra (m = n = 0) is not supported")
    if theta0 not in (1, -1):
        raise GradingError(f"theta0 must be +1 or -1, got {theta0}")

    d = m + n
    # (-1)^{[i]} = theta0 on the orthogonal block, -theta0 on the symplectic one
    odd = tuple((theta0 if i < m else -theta0) == -1 for i in range(d))
    theta = tuple(1 if i + 1 <= m + n // 2 else -1 for i in range(d))
    conj = tuple((m - 1 - i) if i < m else (2 * m + n - 1 - i) for i in range(d))
    kappa = Fraction((m - n - 2) * theta0, 2)
    return GradingSpec(m=m, n=n, theta0=theta0, kappa=kappa, odd=odd, theta=theta, conj=conj)


def parse_algebra(text: str) -> GradingSpec:
    """Parse "so:m", "sp:n" or "osp:m:n[:theta0]"."""
    parts = [p.strip() for p in str(text).strip().lower().split(":")]
    try:
        if parts[0] == "so" and len(parts) == 2:
            return build_grading(int(parts[1]), 0, 1)
        if parts[0] == "sp" and len(parts) == 2:
            return build_grading(0, int(parts[1]), -1)
        if parts[0] == "osp" and len(parts) in (3, 4):
            theta0 = int(parts[3]) if len(parts) == 4 else 1
            return build_grading(int(parts[1]), int(parts[2]), theta0)
    except ValueError as e:
        if isinstance(e, GradingError):
            raise
        raise ParseError(f"Bad algebra descriptor '{text}': {e}") from e
    raise ParseError(f"Bad algebra descriptor '{text}'; expected so:m, sp:n or osp:m:n[:theta0]")


def to_external(i: int) -> int:
    return i + 1


def to_internal(i: int) -> int:
    return i - 1


# Catalog used by the exact-identity acceptance runs
CATALOG_ALGEBRAS = (
    ["so:%d" % m for m in range(2, 9)]
    + ["sp:%d" % n for n in (2, 4, 6)]
    + ["osp:1:2", "osp:2:2", "osp:2:4", "osp:4:2"]
)


def transpose_sign(spec: GradingSpec, i: int, j: int) -> int:
    """Coefficient of E_{bar j, bar i} in (E_ij)^t."""
    s = spec.theta[i] * spec.theta[j]
    if (spec.grade(i) * spec.grade(j) + spec.grade(j)) % 2:
        s = -s
    return s


def koszul_sign(spec: GradingSpec, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> int:
    total = 0
    for a in range(len(rows)):
        ga = spec.grade(rows[a]) + spec.grade(cols[a])
        if not ga % 2:
            continue
        for b in range(a + 1, len(rows)):
            total += spec.grade(rows[b])
    return -1 if total % 2 else 1


def flat_index(spec: GradingSpec, multi: Tuple[int, ...]) -> int:
    idx = 0
    for i in multi:
        idx = idx * spec.dim + i
    return idx


def multi_index(spec: GradingSpec, flat: int, factors: int) -> Tuple[int, ...]:
    out = []
    for _ in range(factors):
        flat, r = divmod(flat, spec.dim)
        out.append(r)
    return tuple(reversed(out))


def _total_grade(spec: GradingSpec, multi: Tuple[int, ...]) -> int:
    return sum(spec.grade(i) for i in multi) % 2


def super_transpose(a: RatMatrix) -> RatMatrix:
    """A^t = sum (-1)^{[i][j]+[j]} theta_i theta_j A_ij E_{bar j, bar i} (single factor)."""
    if a.factors != 1:
        raise ValueError("super_transpose acts on single-factor matrices; use partial_transpose")
    spec = a.spec
    rows: Dict[int, Dict[int, object]] = {}
    for i, j, x in a.entries():
        s = transpose_sign(spec, i, j)
        rows.setdefault(spec.bar(j), {})[spec.bar(i)] = x if s == 1 else -x
    return RatMatrix(spec, a.size, 1, rows)


def partial_transpose(a: RatMatrix, factor: int) -> RatMatrix:
    """
    Transpose one tensor factor (0-based) of a multi-factor operator.

    Entries are read as elementary-tensor coefficients (Koszul sign removed),
    the chosen factor is transposed with transpose_sign, and the result is
    re-embedded with the new Koszul sign.
    """
    spec, f = a.spec, a.factors
    if not 0 <= factor < f:
        raise ValueError(f"factor {factor} out of range for {f} factors")
    rows: Dict[int, Dict[int, object]] = {}
    for r, c, x in a.entries():
        ri, ci = list(multi_index(spec, r, f)), list(multi_index(spec, c, f))
        coeff_sign = koszul_sign(spec, tuple(ri), tuple(ci))
        i, j = ri[factor], ci[factor]
        s = coeff_sign * transpose_sign(spec, i, j)
        ri[factor], ci[factor] = spec.bar(j), spec.bar(i)
        s *= koszul_sign(spec, tuple(ri), tuple(ci))
        rows.setdefault(flat_index(spec, tuple(ri)), {})[flat_index(spec, tuple(ci))] = x if s == 1 else -x
    return RatMatrix(spec, a.size, f, rows)


def graded_kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Graded tensor product; sign (-1)^{(|I|+|J|)|K|} for A_{IJ} B_{KL}."""
    if a.spec != b.spec:
        raise GradingError(f"Spec mismatch in graded_kron: {a.spec} vs {b.spec}")
    spec = a.spec
    fb = b.factors
    rows: Dict[int, Dict[int, object]] = {}
    b_entries = list(b.entries())
    b_grades = {k: _total_grade(spec, multi_index(spec, k, fb)) for k in b.rows}
    for i, j, x in a.entries():
        ga = (_total_grade(spec, multi_index(spec, i, a.factors)) + _total_grade(spec, multi_index(spec, j, a.factors))) % 2
        for k, l, y in b_entries:
            value = x * y
            if ga and b_grades[k]:
                value = -value
            rows.setdefault(i * b.size + k, {})[j * b.size + l] = value
    return RatMatrix(spec, a.size * b.size, a.factors + fb, rows)


def graded_kron_many(*mats: RatMatrix) -> RatMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = graded_kron(out, m)
    return out


def _one(poly: bool, ring):
    if ring is not None:
        return ring.one
    return RING.one if poly else FIELD.one


def identity(spec: GradingSpec, factors: int = 1, poly: bool = False, ring=None) -> RatMatrix:
    one = _one(poly, ring)
    return RatMatrix.identity(spec, spec.dim ** factors, factors, one)


def elementary(spec: GradingSpec, i: int, j: int, poly: bool = False, ring=None) -> RatMatrix:
    one = _one(poly, ring)
    return RatMatrix(spec, spec.dim, 1, {i: {j: one}})


def build_P_Q(spec: GradingSpec, poly: bool = False, ring=None) -> Tuple[RatMatrix, RatMatrix]:
    """
    Super permutation P = sum (-1)^{[j]} E_ij x E_ji and
    Q = sum (-1)^{[i][j]} theta_i theta_j E_{bar j bar i} x E_ji.
    """
    one = _one(poly, ring)
    d = spec.dim
    p_rows: Dict[int, Dict[int, object]] = {}
    q_rows: Dict[int, Dict[int, object]] = {}
    for i, j in product(range(d), range(d)):
        # P entry at (i,j),(j,i) is (-1)^{[i][j]}
        sp = -1 if spec.grade(i) * spec.grade(j) else 1
        p_rows.setdefault(i * d + j, {})[j * d + i] = one if sp == 1 else -one
        # Q entry at (bar j, j),(bar i, i) is theta_i theta_j (-1)^{[j]}
        sq = spec.theta[i] * spec.theta[j] * spec.sign(j)
        q_rows.setdefault(spec.bar(j) * d + j, {})[spec.bar(i) * d + i] = one if sq == 1 else -one
    return RatMatrix(spec, d * d, 2, p_rows), RatMatrix(spec, d * d, 2, q_rows)


def is_orthosymplectic(u: RatMatrix) -> bool:
    """U U^t = 1 exactly."""
    return (u @ super_transpose(u)).equals(identity(u.spec))


def check_operator_algebra(spec: GradingSpec) -> Dict[str, bool]:
    """P^2 = I, PQ = QP = theta0 Q, Q^2 = theta0 (m-n) Q and Q = P^{t1}, exactly."""
    p, q = build_P_Q(spec, poly=True)
    eye = identity(spec, 2, poly=True)
    theta_q = q.scale(RING(spec.theta0))
    results = {
        "P^2=I": (p @ p).equals(eye),
        "PQ=theta0*Q": (p @ q).equals(theta_q),
        "QP=theta0*Q": (q @ p).equals(theta_q),
        "Q^2=theta0(m-n)Q": (q @ q).equals(q.scale(RING(spec.theta0 * (spec.m - spec.n)))),
        "Q=P^t1": partial_transpose(p, 0).equals(q),
    }
    logger.debug(f"Operator algebra for {spec}: {results}")
    return results


def check_grading_invariants(spec: GradingSpec) -> bool:
    for i in range(spec.dim):
        if spec.bar(spec.bar(i)) != i:
            return False
        if spec.theta[i] * spec.theta[spec.bar(i)] != spec.theta0 * spec.sign(i):
            return False
    return True
