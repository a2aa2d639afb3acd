"""
Open-chain (double-row) transfer matrices for so(n) and sp(n) chains.

    t(l) = Tr_0 K+_0(l) T_0(l) K-_0(l) T^_0(l),
    T_0 = R_0N ... R_01,   T^_0 = R_01 ... R_0N,

with the physical R matrix R(l) = l(l + i kappa) + i(l + i kappa) P - i l Q.
Numeric monodromies are kept as arrays of shape (d, d, D, D): the first two
axes are the auxiliary row/column, the last two act on the D = d^N chain.
Tiny chains (N <= 2, D <= 25) can also be built exactly as RatMatrix objects.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.linalg as la

from .boundary import Family, KSolution, dualize_k, make_k, to_physical
from .config import settings
from .eigenfunctions import eigenvalue_terms, evaluate_terms, exact_sum, lambda_samples, series_info
from .errors import BudgetExceededError, InadmissibleFamilyError, SeriesMismatchError
from .grading import GradingSpec, build_P_Q, graded_kron, identity
from .ratfunc import FIELD, I_POLY, RU, RatMatrix, derivative, format_ratfunc
from .reports import CheckReport, Timing, Witness
from .rmatrix import Normalization, kappa_poly, r_matrix, r_numeric

logger = logging.getLogger(__name__)

SYMBOLIC_MAX_SITES = 2
SYMBOLIC_MAX_DIM = 25
# T, T^, one product buffer and the traced result, complex128
_BUFFERS = 4


def estimate_bytes(spec: GradingSpec, sites: int) -> int:
    d = spec.dim
    chain = d ** sites
    return 16 * d * d * chain * chain * _BUFFERS


def check_budget(spec: GradingSpec, sites: int, budget_bytes: Optional[int] = None) -> int:
    """
    Raises:
        BudgetExceededError: the monodromy arrays would not fit in the budget.
    """
    budget = budget_bytes if budget_bytes is not None else int(settings.mem_budget_mb * 1024 * 1024)
    need = estimate_bytes(spec, sites)
    if need > budget:
        message = (f"{spec} chain with N={sites} needs about {need / 2 ** 20:.1f} MiB, "
                   f"budget is {budget / 2 ** 20:.1f} MiB")
        logger.error(message)
        raise BudgetExceededError(message)
    return need


@dataclass
class ChainContext:
    """An N-site chain with its two boundaries, both in the physical normalization."""

    spec: GradingSpec
    sites: int
    k_minus: Optional[KSolution] = None
    k_plus: Optional[KSolution] = None
    mem_budget_bytes: Optional[int] = None

    def __post_init__(self):
        if self.spec.series == "osp":
            message = f"Open chains are built for so(n) and sp(n) only, got {self.spec}"
            logger.error(message)
            raise SeriesMismatchError(message)
        if self.sites < 1:
            raise ValueError(f"A chain needs at least one site, got N={self.sites}")
        check_budget(self.spec, self.sites, self.mem_budget_bytes)
        if self.k_minus is None:
            self.k_minus = make_k(self.spec, Family.IDENTITY, normalization=Normalization.PHYSICAL)
        self.k_minus = to_physical(self.k_minus)
        if self.k_plus is None:
            self.k_plus = dualize_k(make_k(self.spec, Family.IDENTITY, normalization=Normalization.PHYSICAL))
        self.k_plus = to_physical(self.k_plus)

    @property
    def dim(self) -> int:
        return self.spec.dim ** self.sites

    @property
    def diagonal_boundaries(self) -> bool:
        return self.k_minus.is_diagonal and self.k_plus.is_diagonal

    def describe(self) -> Dict[str, object]:
        return {
            "algebra": self.spec.descriptor,
            "sites": self.sites,
            "dimension": self.dim,
            "k_minus": self.k_minus.family.value,
            "k_minus_params": self.k_minus.describe()["params"],
            "k_plus": self.k_plus.family.value,
        }


# Numeric transfer matrix


def _r_blocks(spec: GradingSpec, lam: complex) -> np.ndarray:
    """R(lam) as blocks R_op[a, c] acting on the site, auxiliary indices first."""
    d = spec.dim
    r4 = r_numeric(spec, lam).reshape(d, d, d, d)
    return r4.transpose(0, 2, 1, 3)


def monodromies(ctx: ChainContext, lam: complex) -> Tuple[np.ndarray, np.ndarray]:
    """T(lam) and T^(lam) as (d, d, D, D) arrays."""
    d = ctx.spec.dim
    r_op = _r_blocks(ctx.spec, lam)
    t_mono = r_op.copy()
    t_hat = r_op.copy()
    for _ in range(ctx.sites - 1):
        size = t_mono.shape[-1] * d
        new_t = np.zeros((d, d, size, size), dtype=complex)
        new_hat = np.zeros((d, d, size, size), dtype=complex)
        for a, b in product(range(d), range(d)):
            for c in range(d):
                # T_new = R_0,new T_old ; T^_new = T^_old R_0,new
                new_t[a, b] += np.kron(t_mono[c, b], r_op[a, c])
                new_hat[a, b] += np.kron(t_hat[a, c], r_op[c, b])
        t_mono, t_hat = new_t, new_hat
    return t_mono, t_hat


def k_numeric(k: KSolution, lam: complex) -> np.ndarray:
    return k.matrix.to_numpy(u=lam)


def transfer_matrix(ctx: ChainContext, lam: complex) -> np.ndarray:
    """
    Dense t(lam) on the chain space.

    Args:
        ctx: Chain with boundaries.
        lam: Complex spectral parameter.

    Returns:
        (D, D) complex array.
    """
    t_mono, t_hat = monodromies(ctx, lam)
    k_minus = k_numeric(ctx.k_minus, lam)
    k_plus = k_numeric(ctx.k_plus, lam)
    inner = np.einsum("ce,eaij->caij", k_minus, t_hat)
    out = np.zeros((ctx.dim, ctx.dim), dtype=complex)
    d = ctx.spec.dim
    for a, b in product(range(d), range(d)):
        if k_plus[a, b] == 0:
            continue
        block = sum(t_mono[b, c] @ inner[c, a] for c in range(d))
        out += k_plus[a, b] * block
    return out


def transfer_matrices(ctx: ChainContext, lambdas: Sequence[complex], threads: Optional[int] = None) -> List[np.ndarray]:
    """t at several points; evaluations run on a thread pool."""
    threads = threads or settings.threads
    if threads <= 1 or len(lambdas) <= 1:
        return [transfer_matrix(ctx, lam) for lam in lambdas]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda lam: transfer_matrix(ctx, lam), lambdas))


# Exact transfer matrix


def _check_symbolic(ctx: ChainContext) -> None:
    if ctx.sites > SYMBOLIC_MAX_SITES or ctx.dim > SYMBOLIC_MAX_DIM:
        message = (f"Exact transfer matrix limited to N <= {SYMBOLIC_MAX_SITES} and dimension "
                   f"<= {SYMBOLIC_MAX_DIM}; got N={ctx.sites}, dimension {ctx.dim}")
        logger.error(message)
        raise BudgetExceededError(message)


def _partial_trace_aux(spec: GradingSpec, op: RatMatrix, chain_dim: int) -> RatMatrix:
    """Trace over the first (auxiliary) factor; the chain is purely even here."""
    rows: Dict[int, Dict[int, object]] = {}
    for r, c, x in op.entries():
        a, i = divmod(r, chain_dim)
        b, j = divmod(c, chain_dim)
        if a != b:
            continue
        row = rows.setdefault(i, {})
        row[j] = row[j] + x if j in row else x
    return RatMatrix(spec, chain_dim, op.factors - 1, rows)


def transfer_matrix_exact(ctx: ChainContext) -> RatMatrix:
    """
    t(l) as a RatMatrix in the variable u (read as l).

    Raises:
        BudgetExceededError: N > 2 or dimension > 25.
    """
    _check_symbolic(ctx)
    spec, n = ctx.spec, ctx.sites
    r = r_matrix(spec, Normalization.PHYSICAL).matrix
    eye = identity(spec)
    p, _ = build_P_Q(spec)
    r01 = r if n == 1 else graded_kron(r, eye)
    if n == 1:
        t_mono, t_hat = r01, r01
    else:
        p12 = graded_kron(eye, p)
        r02 = p12 @ r01 @ p12
        t_mono, t_hat = r02 @ r01, r01 @ r02
    chain_eye = identity(spec, n)
    k_minus = graded_kron(ctx.k_minus.matrix, chain_eye)
    k_plus = graded_kron(ctx.k_plus.matrix, chain_eye)
    full = k_plus @ t_mono @ k_minus @ t_hat
    return _partial_trace_aux(spec, full, ctx.dim)


# Pseudo-vacuum


def _require_vacuum_boundary(k: KSolution) -> None:
    if not k.is_diagonal:
        message = f"Pseudo-vacuum eigenvalue needs a diagonal K-, got {k.family.value}"
        logger.error(message)
        raise InadmissibleFamilyError(message)
    if k.family not in (Family.IDENTITY, Family.D1, Family.D2, Family.D3, Family.D4):
        message = f"No pseudo-vacuum formula for family {k.family.value}"
        logger.error(message)
        raise InadmissibleFamilyError(message)


def _require_identity_plus(ctx: ChainContext) -> None:
    if ctx.k_plus.family != Family.IDENTITY:
        message = "Eigenvalue formulas assume K+ = 1"
        logger.error(message)
        raise InadmissibleFamilyError(message)


def vacuum_terms(ctx: ChainContext):
    _require_vacuum_boundary(ctx.k_minus)
    _require_identity_plus(ctx)
    return eigenvalue_terms(series_info(ctx.spec), ctx.sites, ctx.k_minus)


def pseudo_vacuum_eigenvalue(ctx: ChainContext, lam: Optional[complex] = None):
    """
    Lambda0(l) = a^{2N} g~_0 + b^{2N} sum g~_l + c^{2N} g~_{n-1}.

    Returns the exact RatFunc when lam is None (all shifts exact), else a complex value.
    """
    terms = vacuum_terms(ctx)
    if lam is None:
        return exact_sum(terms)
    return evaluate_terms(terms, lam)


def verify_pseudo_vacuum(ctx: ChainContext, exact: Optional[bool] = None) -> CheckReport:
    """t(l) e_0 = Lambda0(l) e_0, exactly for tiny chains and at sample points otherwise."""
    start = time.perf_counter()
    exact = (ctx.sites <= SYMBOLIC_MAX_SITES and ctx.dim <= SYMBOLIC_MAX_DIM) if exact is None else exact
    report = CheckReport(identity="pseudo-vacuum", algebra=ctx.spec.descriptor, passed=True,
                         details={**ctx.describe(), "exact": exact})
    if exact:
        t = transfer_matrix_exact(ctx)
        lam0 = pseudo_vacuum_eigenvalue(ctx)
        column = {i: t[i, 0] for i in range(ctx.dim) if t[i, 0]}
        for i in sorted(set(column) | {0}):
            expected = lam0 if i == 0 else FIELD.zero
            diff = column.get(i, FIELD.zero) - expected
            if diff:
                report.passed = False
                report.witness = Witness(row=i + 1, col=1, value=format_ratfunc(diff, physical=True))
                break
        report.details["eigenvalue"] = format_ratfunc(lam0, physical=True)
    else:
        worst = 0.0
        for lam in lambda_samples():
            column = transfer_matrix(ctx, lam)[:, 0]
            expected = np.zeros(ctx.dim, dtype=complex)
            expected[0] = pseudo_vacuum_eigenvalue(ctx, lam)
            scale = max(1.0, abs(expected[0]))
            worst = max(worst, float(np.max(np.abs(column - expected))) / scale)
        report.passed = worst < 1e-10
        report.details["max_relative_error"] = worst
    if not report.passed:
        logger.error(f"Pseudo-vacuum check failed for {ctx.describe()}")
    report.timing = Timing(elapsed_ms=round((time.perf_counter() - start) * 1000.0, 3))
    return report


# Symmetry checks


def verify_chain_crossing(ctx: ChainContext) -> CheckReport:
    """t(l) = t(-l - i kappa), exact."""
    start = time.perf_counter()
    t = transfer_matrix_exact(ctx)
    kap = kappa_poly(ctx.spec)
    crossed = t.substitute(u_to=-RU - I_POLY * kap)
    hit = (crossed - t).first_nonzero()
    report = CheckReport(identity="chain-crossing", algebra=ctx.spec.descriptor, passed=hit is None,
                         details=ctx.describe())
    if hit is not None:
        report.witness = Witness(row=hit[0] + 1, col=hit[1] + 1, value=format_ratfunc(hit[2], physical=True))
        logger.error(f"Transfer-matrix crossing failed for {ctx.describe()}")
    report.timing = Timing(elapsed_ms=round((time.perf_counter() - start) * 1000.0, 3))
    return report


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a @ b - b @ a))) if a.size else 0.0


def verify_commuting(ctx: ChainContext, pairs: Optional[Sequence[Tuple[complex, complex]]] = None,
                     tol: float = 1e-10) -> CheckReport:
    """max |[t(l), t(m)]| over sample pairs, relative to |t(l)| |t(m)|."""
    start = time.perf_counter()
    samples = lambda_samples(6)
    pairs = pairs or list(zip(samples[:5], samples[1:6]))
    worst = 0.0
    for lam, mu in pairs:
        a, b = transfer_matrix(ctx, lam), transfer_matrix(ctx, mu)
        scale = max(1.0, float(np.max(np.abs(a))) * float(np.max(np.abs(b))))
        worst = max(worst, commutator_norm(a, b) / scale)
    report = CheckReport(identity="commuting-family", algebra=ctx.spec.descriptor, passed=worst < tol,
                         details={**ctx.describe(), "max_commutator": worst, "pairs": len(pairs)})
    if not report.passed:
        logger.error(f"Transfer matrices do not commute for {ctx.describe()}: {worst:.3e}")
    report.timing = Timing(elapsed_ms=round((time.perf_counter() - start) * 1000.0, 3))
    return report


# Cartan sectors


def cartan_weights(spec: GradingSpec, sites: int) -> np.ndarray:
    """
    Eigenvalues of S^(l) = sum_sites (E_ll - E_{bar l bar l}), l over the first
    half, on every basis vector; shape (D, rank).
    """
    d = spec.dim
    rank = d // 2
    single = np.zeros((d, rank), dtype=int)
    for l in range(rank):
        single[l, l] += 1
        single[spec.bar(l), l] -= 1
    out = np.zeros((d ** sites, rank), dtype=int)
    for flat in range(d ** sites):
        rest = flat
        for _ in range(sites):
            rest, i = divmod(rest, d)
            out[flat] += single[i]
    return out


def cartan_operators(spec: GradingSpec, sites: int) -> List[np.ndarray]:
    weights = cartan_weights(spec, sites)
    return [np.diag(weights[:, l].astype(complex)) for l in range(weights.shape[1])]


def sectors(spec: GradingSpec, sites: int) -> Dict[Tuple[int, ...], np.ndarray]:
    """Basis indices grouped by Cartan weight."""
    weights = cartan_weights(spec, sites)
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for idx, w in enumerate(weights):
        groups.setdefault(tuple(int(x) for x in w), []).append(idx)
    return {w: np.array(idx) for w, idx in sorted(groups.items(), reverse=True)}


def verify_cartan_invariance(ctx: ChainContext, lam: complex = 0.31 + 0.17j, tol: float = 1e-10) -> CheckReport:
    t = transfer_matrix(ctx, lam)
    scale = max(1.0, float(np.max(np.abs(t))))
    worst = max((commutator_norm(t, s) / scale for s in cartan_operators(ctx.spec, ctx.sites)), default=0.0)
    report = CheckReport(identity="cartan-invariance", algebra=ctx.spec.descriptor, passed=worst < tol,
                         details={**ctx.describe(), "max_commutator": worst})
    return report


# Spectrum


def _orthonormalize(vecs: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(vecs)
    return q


def _refine_degenerate(vecs: np.ndarray, ops: Sequence[np.ndarray], tol: float, i: int = 0) -> np.ndarray:
    """Split a degenerate eigenspace of one operator using the next ones."""
    if i >= len(ops) or vecs.shape[1] < 2:
        return vecs
    basis = _orthonormalize(vecs)
    sub = basis.conj().T @ ops[i] @ basis
    vals, small = la.eig(sub)
    new = basis @ small
    order = np.argsort(vals.real + 1e-3 * vals.imag)
    vals, new = vals[order], new[:, order]
    k = 0
    while k < len(vals):
        scale = max(tol, tol * abs(vals[k]))
        inds = np.where(np.abs(vals - vals[k]) < scale * 1e4)[0]
        if len(inds) > 1:
            new[:, inds] = _refine_degenerate(new[:, inds], ops, tol, i + 1)
        k = inds[-1] + 1
    return new


def simultaneous_eig(ops: Sequence[np.ndarray], tol: float = 1e-12) -> Tuple[np.ndarray, np.ndarray]:
    """
    Common eigenvectors of commuting (not necessarily normal) matrices.

    Returns:
        (values, vectors): values[s, j] is the eigenvalue of ops[s] on vectors[:, j].
    """
    vals, vecs = la.eig(ops[0])
    order = np.argsort(vals.real + 1e-3 * vals.imag)
    vals, vecs = vals[order], vecs[:, order]
    k = 0
    while k < len(vals):
        scale = max(tol, tol * abs(vals[k]))
        inds = np.where(np.abs(vals - vals[k]) < scale * 1e4)[0]
        if len(inds) > 1:
            vecs[:, inds] = _refine_degenerate(vecs[:, inds], ops, tol, 1)
        k = inds[-1] + 1
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    inv = np.linalg.pinv(vecs)
    values = np.array([np.diag(inv @ op @ vecs) for op in ops])
    return values, vecs


@dataclass
class SpectrumRecord:
    """Eigenvalue profiles of t on common eigenvectors, grouped by sector."""

    algebra: str
    sites: int
    boundary: Dict[str, object]
    lambdas: List[complex]
    profiles: List[List[complex]] = field(default_factory=list)
    sector_labels: List[Optional[Tuple[int, ...]]] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    offdiagonal: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.profiles)

    def eigenvalues(self, index: int = 0) -> List[complex]:
        return [p[index] for p in self.profiles]

    def unconverged(self, tol: float = 1e-9) -> List[int]:
        return [j for j, r in enumerate(self.residuals) if r >= tol]

    def multiplicities(self, index: int = 0, tol: float = 1e-8) -> List[Tuple[complex, int]]:
        out: List[Tuple[complex, int]] = []
        for value in sorted(self.eigenvalues(index), key=lambda z: (round(z.real, 6), round(z.imag, 6))):
            if out and abs(out[-1][0] - value) <= tol * max(1.0, abs(value)):
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((value, 1))
        return out

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for j, profile in enumerate(self.profiles):
            row = {"state": j, "sector": None if self.sector_labels[j] is None else " ".join(map(str, self.sector_labels[j])),
                   "residual": self.residuals[j]}
            for s, value in enumerate(profile):
                row[f"re_t{s}"] = value.real
                row[f"im_t{s}"] = value.imag
            rows.append(row)
        return pd.DataFrame(rows)

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "algebra": self.algebra,
            "sites": self.sites,
            "boundary": self.boundary,
            "lambdas": [[z.real, z.imag] for z in self.lambdas],
            "dimension": self.dimension,
            "eigenvalues": [[[z.real, z.imag] for z in p] for p in self.profiles],
            "sectors": [list(s) if s is not None else None for s in self.sector_labels],
            "max_residual": max(self.residuals, default=0.0),
            "offdiagonal": self.offdiagonal,
        }


def spectrum(ctx: ChainContext, lambdas: Union[complex, Sequence[complex]] = None,
             by_sector: Optional[bool] = None, threads: Optional[int] = None) -> SpectrumRecord:
    """
    Dense spectrum of t on common eigenvectors of t at every sample point.

    Args:
        ctx: Chain.
        lambdas: One point or several; defaults to the fixed generic samples.
        by_sector: Block by Cartan weight (only valid for diagonal boundaries);
            defaults to True when both K are diagonal.
        threads: Parallel evaluations of t.

    Returns:
        SpectrumRecord with one profile (t at every lambda) per eigenvector.
    """
    if lambdas is None:
        lambdas = lambda_samples()
    elif np.isscalar(lambdas):
        lambdas = [lambdas]
    lambdas = [complex(x) for x in lambdas]
    if by_sector is None:
        by_sector = ctx.diagonal_boundaries
    logger.info(f"Spectrum of {ctx.describe()} at {len(lambdas)} points")
    mats = transfer_matrices(ctx, lambdas, threads)
    record = SpectrumRecord(algebra=ctx.spec.descriptor, sites=ctx.sites, boundary=ctx.k_minus.describe()["params"],
                            lambdas=lambdas)
    record.boundary = {"family": ctx.k_minus.family.value, **record.boundary}
    groups = sectors(ctx.spec, ctx.sites) if by_sector else {None: np.arange(ctx.dim)}
    for label, idx in groups.items():
        blocks = [m[np.ix_(idx, idx)] for m in mats]
        values, vecs = simultaneous_eig(blocks)
        for j in range(vecs.shape[1]):
            v = vecs[:, j]
            res = max(float(np.linalg.norm(b @ v - values[s, j] * v)) / max(1.0, abs(values[s, j]))
                      for s, b in enumerate(blocks))
            record.profiles.append([complex(values[s, j]) for s in range(len(lambdas))])
            record.sector_labels.append(label)
            record.residuals.append(res)
        inv = np.linalg.pinv(vecs)
        for b in blocks:
            rotated = inv @ b @ vecs
            off = rotated - np.diag(np.diag(rotated))
            record.offdiagonal = max(record.offdiagonal, float(np.max(np.abs(off))) if off.size else 0.0)
    bad = record.unconverged()
    if bad:
        logger.warning(f"{len(bad)} eigenvectors above the residual threshold: {bad}")
    return record


def match_profile(record: SpectrumRecord, values: Sequence[complex], rel_tol: float = 1e-8) -> Optional[int]:
    """Index of the eigenvector whose profile equals values at every sample point."""
    values = np.asarray(values, dtype=complex)
    best, best_err = None, np.inf
    for j, profile in enumerate(record.profiles):
        p = np.asarray(profile)
        err = float(np.max(np.abs(p - values) / np.maximum(1.0, np.abs(values))))
        if err < best_err:
            best, best_err = j, err
    return best if best_err < rel_tol else None


# Hamiltonian


def hamiltonian(ctx: ChainContext, step: float = 1e-5, exact: bool = False) -> np.ndarray:
    """
    H = -i t'(0)/t0, where t(0) = t0 * 1.

    The derivative is exact for tiny chains when requested, otherwise a
    central difference with Richardson extrapolation over (h, h/2).
    """
    t0 = transfer_matrix(ctx, 0.0)
    scalar = t0[0, 0]
    if abs(scalar) < 1e-14 or np.max(np.abs(t0 - scalar * np.eye(ctx.dim))) > 1e-9 * abs(scalar):
        message = f"t(0) is not a nonzero multiple of the identity for {ctx.describe()}"
        logger.error(message)
        raise InadmissibleFamilyError(message)
    if exact:
        t = transfer_matrix_exact(ctx)
        deriv = t.map(derivative).to_numpy(u=0.0)
    else:
        def central(h):
            return (transfer_matrix(ctx, h) - transfer_matrix(ctx, -h)) / (2 * h)

        d1, d2 = central(step), central(step / 2)
        deriv = (4 * d2 - d1) / 3
        gap = float(np.max(np.abs(deriv - d2))) / max(1.0, float(np.max(np.abs(deriv))))
        if gap > 1e-7:
            logger.warning(f"Richardson pair disagrees by {gap:.2e} for {ctx.describe()}")
    return -1j * deriv / scalar


def hermiticity_defect(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def hamiltonian_spectrum(ctx: ChainContext, step: float = 1e-5) -> pd.DataFrame:
    """Energies of H with the Cartan sector of each eigenvector (diagonal boundaries)."""
    h = hamiltonian(ctx, step)
    rows = []
    groups = sectors(ctx.spec, ctx.sites) if ctx.diagonal_boundaries else {None: np.arange(ctx.dim)}
    for label, idx in groups.items():
        for value in la.eigvals(h[np.ix_(idx, idx)]):
            rows.append({"sector": None if label is None else " ".join(map(str, label)),
                         "energy": float(value.real), "imag": float(value.imag)})
    return pd.DataFrame(rows).sort_values("energy", kind="mergesort").reset_index(drop=True)
