"""
Command-line entry point.

Every subcommand prints one JSON report on stdout (or CSV with --csv) and a
one-line summary on stderr. Exit status: 0 when every requested check passes,
1 when a check fails, 2 on usage errors and ill-posed requests.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .bethe import eigenvalue_profile, energy, solve_bae
from .boundary import (
    Family,
    KSolution,
    admissible_families,
    catalog,
    d4_degenerations,
    make_k,
    parse_boundary,
    verify_dual_reflection,
    verify_reflection,
)
from .chain import ChainContext, spectrum, verify_commuting, verify_pseudo_vacuum
from .classify import classify_diagonal
from .config import RunConfig, settings
from .errors import ParseError, ToolkitError
from .eigenfunctions import series_info
from .grading import CATALOG_ALGEBRAS, GradingSpec, build_grading, check_operator_algebra, parse_algebra
from .logging_config import configure_console_logging, configure_logging
from .reports import CheckReport, ResultReport, SuiteReport
from .rmatrix import Normalization, verify_crossing_unitarity, verify_ybe
from .scattering import (
    AmplitudeSpec,
    bulk_summary,
    check_duplication,
    check_gamma_identity,
    cross_check,
    scatter_summary,
    verify_bulk_unitarity,
    verify_duality,
)
from .thermo import KernelContext, kernel_summary, omega_grid, sweep_frame

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

QUICK_ALGEBRAS = ("so:3", "so:4", "sp:2", "sp:4", "osp:1:2")


class UsageError(ToolkitError):
    """Bad combination of command-line options."""


# Argument helpers


def parse_complex(text: str) -> complex:
    """"0.3+0.1i" -> (0.3+0.1j)."""
    cleaned = str(text).strip().replace(" ", "").replace("I", "j").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as e:
        raise ParseError(f"Not a complex number: '{text}'") from e


def load_json_arg(text: str) -> Any:
    """A JSON literal, or @path to a JSON file."""
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as f:
            return json.load(f)
    return json.loads(text)


def _plain(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return [_plain(v) for v in value]
    return value


def boundary_from_arg(spec: GradingSpec, text: Optional[str],
                      normalization: Normalization = Normalization.RATIONAL) -> Optional[KSolution]:
    """
    Build a K matrix from '{"family": "D1", "params": {"c": "1/2"}}', @file.json
    or the compact form 'D1:c=1/2'.
    """
    if not text:
        return None
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("@"):
        try:
            data = load_json_arg(stripped)
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"Cannot read boundary JSON: {e}") from e
        if "algebra" in data and parse_algebra(data["algebra"]) != spec:
            raise UsageError(f"Boundary is for {data['algebra']}, but --algebra is {spec}")
        family = Family(str(data.get("family", "I")).upper())
        params = {k: _plain(v) for k, v in (data.get("params") or {}).items()}
        if data.get("normalization"):
            normalization = Normalization(data["normalization"])
    else:
        family, params = parse_boundary(stripped)
    return make_k(spec, family, params, normalization)


def spec_from_args(args: argparse.Namespace) -> GradingSpec:
    """--algebra, or --series with --n (defining dimension) or --k (rank)."""
    if getattr(args, "algebra", None):
        return parse_algebra(args.algebra)
    series = getattr(args, "series", None)
    if not series:
        raise UsageError("Give --algebra, or --series with --n or --k")
    n = getattr(args, "n", None)
    if n is None:
        k = getattr(args, "k", None)
        if k is None:
            raise UsageError("--series needs --n or --k")
        # rank k: sp(2k), so(2k+1) or, with --even, so(2k)
        n = 2 * k if series == "sp" or getattr(args, "even", False) else 2 * k + 1
    if series == "so":
        return build_grading(n, 0, 1)
    if series == "sp":
        return build_grading(0, n, -1)
    raise UsageError(f"--series must be so or sp, got {series}")


def _series_n(spec: GradingSpec) -> Tuple[str, int]:
    if spec.series == "sp":
        return "sp", spec.n
    if spec.series == "so":
        return "so", spec.m
    raise UsageError(f"{spec} is not an so(n) or sp(n) algebra")


def occupations_from_arg(spec: GradingSpec, text: Optional[str]) -> Dict[str, int]:
    """'2,1' fills the seas in order; a JSON object maps sea labels to counts."""
    seas = series_info(spec).seas
    if not text:
        return {}
    text = text.strip()
    if text.startswith("{"):
        return {str(k): int(v) for k, v in json.loads(text).items()}
    counts = [int(c) for c in text.split(",") if c.strip()]
    if len(counts) > len(seas):
        raise UsageError(f"{len(counts)} root counts given, but {spec} has seas {seas}")
    return dict(zip(seas, counts))


def xi_from_args(pairs: Optional[Sequence[str]]) -> Dict[str, float]:
    out: Dict[str, float] = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"Expected name=value, got '{item}'")
        out[key.strip()] = float(value)
    return out


# Subcommands. Each returns (report, passed, csv text or None).


def cmd_verify(args, run: RunConfig):
    spec = spec_from_args(args)
    if args.what == "ybe":
        report = verify_ybe(spec, mutate=args.mutate)
    elif args.what == "crossing":
        report = verify_crossing_unitarity(spec)
    else:
        k = boundary_from_arg(spec, args.k or "I")
        report = verify_dual_reflection(k) if args.dual else verify_reflection(k)
    return report, report.passed, None


def cmd_catalog(args, run: RunConfig):
    algebras = [args.algebra] if args.algebra else list(CATALOG_ALGEBRAS)
    entries, checks = [], []
    for name in algebras:
        spec = parse_algebra(name)
        for k in catalog(spec):
            entry = k.describe()
            if args.verify:
                check = verify_reflection(k)
                checks.append(check)
                entry["reflection"] = check.status
            entries.append(entry)
    payload: Dict[str, Any] = {"algebras": algebras, "solutions": entries}
    if args.algebra:
        spec = parse_algebra(args.algebra)
        payload["families"] = [f.value for f in admissible_families(spec)]
        if spec.m == 4 and spec.n == 0:
            payload["d4_degenerations"] = d4_degenerations(spec)
    passed = all(c.passed for c in checks)
    return ResultReport(kind="catalog", algebra=args.algebra, passed=passed, payload=payload), passed, None


def cmd_classify(args, run: RunConfig):
    spec = spec_from_args(args)
    result = classify_diagonal(spec)
    return ResultReport(kind="classify-diagonal", algebra=spec.descriptor, payload=result.to_dict()), True, None


def cmd_spectrum(args, run: RunConfig):
    spec = spec_from_args(args)
    k_minus = boundary_from_arg(spec, args.boundary)
    ctx = ChainContext(spec, args.sites, k_minus, mem_budget_bytes=run.mem_budget_bytes)
    lambdas = [parse_complex(x) for x in args.lam] if args.lam else None
    record = spectrum(ctx, lambdas, threads=run.threads)
    passed = not record.unconverged(run.tol if args.tol else 1e-9)
    report = ResultReport(kind="spectrum", algebra=spec.descriptor, passed=passed, payload=record.to_dict())
    return report, passed, record.to_csv() if run.output == "csv" else None


def cmd_bethe(args, run: RunConfig):
    spec = spec_from_args(args)
    k_minus = boundary_from_arg(spec, args.boundary)
    occupations = occupations_from_arg(spec, args.M)
    states = solve_bae(spec, args.sites, occupations, k_minus, seed_count=args.seeds,
                       tol=args.tol, threads=run.threads)
    lambdas = [parse_complex(x) for x in args.lam] if args.lam else None
    out = []
    for state in states:
        item = state.to_dict()
        item["eigenvalues"] = [[z.real, z.imag] for z in eigenvalue_profile(state, lambdas)]
        item["energy"] = energy(state)
        out.append(item)
    passed = bool(states) and all(s.converged for s in states)
    report = ResultReport(kind="bethe-solve", algebra=spec.descriptor, passed=passed,
                          payload={"sites": args.sites, "occupations": occupations, "states": out})
    return report, passed, None


def cmd_thermo(args, run: RunConfig):
    spec = spec_from_args(args)
    k_minus = boundary_from_arg(spec, args.boundary)
    holes = load_json_arg(args.holes) if args.holes else None
    ctx = KernelContext.for_algebra(spec, k_minus, holes)
    if run.output == "csv" or args.grid:
        frame = sweep_frame(ctx, omega_grid(args.omega_start, args.omega_stop, args.omega_step))
        report = ResultReport(kind="thermo-grid", algebra=spec.descriptor, payload={
            "context": ctx.describe(), "rows": len(frame), "columns": list(frame.columns)})
        return report, True, frame.to_csv(index=False) if run.output == "csv" else None
    payload = kernel_summary(ctx, args.omega)
    return ResultReport(kind="thermo-kernels", algebra=spec.descriptor, payload=payload), True, None


def _amplitude_spec(args) -> AmplitudeSpec:
    if args.boundary:
        spec = spec_from_args(args)
        return AmplitudeSpec.from_kmatrix(boundary_from_arg(spec, args.boundary), args.lam)
    if not args.series or args.n is None:
        raise UsageError("scatter boundary needs --series and --n (or --algebra with --boundary)")
    return AmplitudeSpec(args.series, args.n, Family(args.family.upper()), xi_from_args(args.xi), args.m, args.lam)


def cmd_scatter(args, run: RunConfig):
    if args.what == "bulk":
        if args.algebra:
            series, n = _series_n(parse_algebra(args.algebra))
        else:
            series, n = args.series, args.n
        if not series or n is None:
            raise UsageError("scatter bulk needs --series and --n")
        payload = bulk_summary(series, n, args.lam)
        passed = payload["unitarity"] < 1e-8 and abs(payload["modulus"] - 1.0) < 1e-8
        return ResultReport(kind="scatter-bulk", algebra=f"{series}:{n}", passed=passed, payload=payload), passed, None
    aspec = _amplitude_spec(args)
    payload = scatter_summary(aspec, integral=args.integral)
    passed = True
    if args.cross_check:
        check = cross_check(aspec, part=args.part, tol=run.tol if args.tol else 1e-6)
        payload["cross_check"] = check.to_dict()
        passed = check.passed
    report = ResultReport(kind="scatter-boundary", algebra=f"{aspec.series}:{aspec.n}", passed=passed, payload=payload)
    return report, passed, None


def selftest_checks(quick: bool = True) -> List[CheckReport]:
    """Exact-identity suite; the full run adds the numeric chain and amplitude checks."""
    checks: List[CheckReport] = []
    for name in QUICK_ALGEBRAS:
        spec = parse_algebra(name)
        result = check_operator_algebra(spec)
        checks.append(CheckReport(identity="operator-algebra", algebra=spec.descriptor,
                                  passed=all(result.values()), details=result))
    for name in ("so:3", "sp:2"):
        checks.append(verify_ybe(parse_algebra(name)))
    for name in QUICK_ALGEBRAS:
        for k in catalog(parse_algebra(name)):
            checks.append(verify_reflection(k))
    if quick:
        return checks
    for name in ("so:4", "so:5", "sp:4", "osp:2:2"):
        checks.append(verify_crossing_unitarity(parse_algebra(name)))
    for name, boundary in (("so:4", "D1:c=1/2"), ("sp:2", "D1:c=1/3"), ("so:3", "D2:c1=1/2")):
        spec = parse_algebra(name)
        ctx = ChainContext(spec, 2, boundary_from_arg(spec, boundary))
        checks.append(verify_commuting(ctx))
        checks.append(verify_pseudo_vacuum(ctx))
    checks.append(check_gamma_identity())
    checks.append(check_duplication())
    checks.append(verify_bulk_unitarity("so", 6))
    checks.append(verify_bulk_unitarity("sp", 4, matrix=False))
    checks.append(cross_check(AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5}), part="k1"))
    checks.append(cross_check(AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5}), part="k0"))
    checks.append(verify_duality(AmplitudeSpec("so", 6, Family.D1, {"xi": 1.5})))
    return checks


def cmd_selftest(args, run: RunConfig):
    checks = selftest_checks(quick=args.quick)
    passed = all(c.passed for c in checks)
    return SuiteReport(passed=passed, checks=checks), passed, None


def cmd_serve(args, run: RunConfig):
    import uvicorn

    from .api import app

    uvicorn.run(app, host=args.host or settings.api_host, port=args.port or settings.api_port)
    return None, True, None


# Parser


def _add_algebra(p: argparse.ArgumentParser, series: bool = False) -> None:
    p.add_argument("--algebra", help='"so:m", "sp:n" or "osp:m:n[:theta0]"')
    if series:
        p.add_argument("--series", choices=("so", "sp"))
        p.add_argument("--n", type=int, help="defining dimension")
        p.add_argument("--k", type=int, help="rank (sp(2k), so(2k+1), so(2k) with --even)")
        p.add_argument("--even", action="store_true", help="with --k: the even orthogonal algebra so(2k)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON report on stdout (default)")
    common.add_argument("--csv", action="store_true", help="CSV on stdout for spectrum and thermo grids")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--mem-budget-mb", type=float, default=None, dest="mem_budget_mb")
    common.add_argument("--log-file", action="store_true", help="also log to a timestamped file in YANGIAN_LOG_DIR")
    common.add_argument("--log-level", default=None)
    common.add_argument("--indent", type=int, default=2)
    parser = argparse.ArgumentParser(prog="yangian-boundary",
                                     description="Reflection matrices and open-chain Bethe Ansatz toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="exact identity checks")
    verify.add_argument("what", choices=("ybe", "crossing", "reflection"))
    _add_algebra(verify)
    verify.add_argument("--k", dest="k", help="boundary JSON, @file or compact form")
    verify.add_argument("--dual", action="store_true", help="check K+ against the dual reflection equation")
    verify.add_argument("--mutate", action="store_true", help="negative control: flip the sign of Q")
    verify.set_defaults(handler=cmd_verify)

    cat = sub.add_parser("catalog", parents=[common], help="list catalog K matrices")
    cat.add_argument("what", choices=("list",))
    cat.add_argument("--algebra")
    cat.add_argument("--verify", action="store_true", help="run the reflection check on every entry")
    cat.set_defaults(handler=cmd_catalog)

    cls = sub.add_parser("classify", parents=[common], help="classify diagonal reflection matrices")
    cls.add_argument("what", choices=("diagonal",))
    _add_algebra(cls)
    cls.set_defaults(handler=cmd_classify)

    spec_p = sub.add_parser("spectrum", parents=[common], help="dense transfer-matrix spectrum")
    _add_algebra(spec_p, series=True)
    spec_p.add_argument("--sites", type=int, required=True)
    spec_p.add_argument("--boundary")
    spec_p.add_argument("--lambda", dest="lam", action="append", help="sample point, repeatable (0.3+0.1i)")
    spec_p.set_defaults(handler=cmd_spectrum)

    bethe = sub.add_parser("bethe", parents=[common], help="Bethe equations")
    bethe.add_argument("what", choices=("solve",))
    _add_algebra(bethe, series=True)
    bethe.add_argument("--sites", type=int, required=True)
    bethe.add_argument("--boundary")
    bethe.add_argument("--M", help="root counts per sea: '2,1' or JSON")
    bethe.add_argument("--seeds", type=int, default=12)
    bethe.add_argument("--lambda", dest="lam", action="append")
    bethe.set_defaults(handler=cmd_bethe)

    thermo = sub.add_parser("thermo", parents=[common], help="Fourier-space kernels and density corrections")
    thermo.add_argument("what", choices=("kernels",))
    _add_algebra(thermo, series=True)
    thermo.add_argument("--boundary")
    thermo.add_argument("--holes", help='JSON {"1": [0.4]} or @file')
    thermo.add_argument("--omega", type=float, default=0.5)
    thermo.add_argument("--grid", action="store_true", help="sweep omega over a grid")
    thermo.add_argument("--omega-start", type=float, default=0.05)
    thermo.add_argument("--omega-stop", type=float, default=10.0)
    thermo.add_argument("--omega-step", type=float, default=0.05)
    thermo.set_defaults(handler=cmd_thermo)

    scatter = sub.add_parser("scatter", parents=[common], help="bulk and boundary amplitudes")
    scatter.add_argument("what", choices=("bulk", "boundary"))
    _add_algebra(scatter, series=True)
    scatter.add_argument("--lambda", dest="lam", type=float, default=0.5)
    scatter.add_argument("--family", default="I")
    scatter.add_argument("--m", type=int, default=None, help="D3 block size")
    scatter.add_argument("--xi", action="append", help="renormalized parameter, e.g. xi=1.25 or xi1=0.3")
    scatter.add_argument("--boundary", help="catalog K matrix instead of --family/--xi")
    scatter.add_argument("--integral", action="store_true", help="also evaluate the integral representation")
    scatter.add_argument("--cross-check", action="store_true", dest="cross_check")
    scatter.add_argument("--part", choices=("k0", "k1", "total"), default="k1")
    scatter.set_defaults(handler=cmd_scatter)

    st = sub.add_parser("selftest", parents=[common], help="run the built-in check suite")
    st.add_argument("--quick", action="store_true")
    st.set_defaults(handler=cmd_selftest)

    serve = sub.add_parser("serve", parents=[common], help="start the HTTP surface")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.set_defaults(handler=cmd_serve)
    return parser


def _summary(args, passed: bool) -> str:
    status = "PASS" if passed else "FAIL"
    what = getattr(args, "what", "")
    return f"{args.command} {what}".strip() + f": {status}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    if args.log_file:
        path = configure_logging(level=args.log_level)
        logger.info(f"Writing log to {path}")
    else:
        configure_console_logging(args.log_level)

    try:
        run = RunConfig(
            command=args.command,
            algebra=getattr(args, "algebra", None),
            boundary=getattr(args, "boundary", None),
            tol=args.tol if args.tol is not None else 1e-10,
            output="csv" if args.csv else "json",
            threads=args.threads or settings.threads,
            mem_budget_mb=args.mem_budget_mb or settings.mem_budget_mb,
        )
    except ValidationError as e:
        print(f"Invalid options: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report, passed, csv_text = args.handler(args, run)
    except ToolkitError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError) as e:
        logger.error(f"{args.command}: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if report is not None:
        if csv_text is not None:
            sys.stdout.write(csv_text)
        else:
            sys.stdout.write(report.to_json(indent=args.indent) + "\n")
        if not passed and isinstance(report, CheckReport) and report.witness is not None:
            print(f"witness: {report.witness.json()}", file=sys.stderr)
        print(_summary(args, passed), file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
