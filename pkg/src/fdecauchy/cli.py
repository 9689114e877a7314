"""Command-line front end.

Subcommands: check, region, minimize, counterexample, solve, oracle.
Exit codes: 0 for success / positive verdict, 1 for a negative mathematical
verdict (not solvable, singular, no counterexample, ambiguous arbitration),
2 for usage or parse errors, 3 for I/O failures.

Region scans honor FDE_THREADS (worker process count); output bytes are
identical for any worker count because each lattice point is computed
independently and rows are assembled in lexicographic order.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import criteria, determinant, equations, quasilinear

CSV_HEADER = "A,B,thm2,cor1,cor2_1,cor2_2,cor2_3,m_analytic,m_grid"


def _fmt9(x):
    return f"{float(x):.9g}"


def _range_pair(text):
    """Parse 'lo:hi' or a scalar into an (lo, hi) float pair."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return v, v
        if len(parts) == 2:
            lo, hi = float(parts[0]), float(parts[1])
            return min(lo, hi), max(lo, hi)
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected a number or lo:hi range, got {text!r}")


def _print_verdict(name, verdict):
    word = "solvable" if verdict.solvable else "not-solvable"
    print(f"{name:<11} {word:<13} margin = {_fmt9(verdict.margin)}")


class SystemExit2(Exception):
    """Usage error discovered after argparse; mapped to exit code 2."""


def _resolve_ab(args):
    """(A, B) from either --A/--B or sup-norm data --tplus/--tminus/--a/--b."""
    has_ab = args.A is not None or args.B is not None
    has_norms = args.tplus is not None or args.tminus is not None
    if has_ab and has_norms:
        raise SystemExit2("give either --A/--B or --tplus/--tminus, not both")
    if has_ab:
        if args.A is None or args.B is None:
            raise SystemExit2("need both --A and --B")
        return args.A, args.B
    if args.tplus is None or args.tminus is None:
        raise SystemExit2("need --A/--B or --tplus/--tminus")
    data = criteria.NormData(t_plus=args.tplus, t_minus=args.tminus, a=args.a, b=args.b)
    return data.dimensionless()


def cmd_check(args):
    A, B = _resolve_ab(args)
    thm2 = criteria.check_theorem2(A, B)
    rows = [
        ("theorem2", thm2),
        ("corollary1", criteria.check_corollary1(A, B)),
        ("cor2_cond1", criteria.check_cor2_cond1(A, B)),
        ("cor2_cond2", criteria.check_cor2_cond2(A, B)),
        ("cor2_cond3", criteria.check_cor2_cond3(A, B)),
    ]
    print(f"A = {_fmt9(A)}  B = {_fmt9(B)}")
    for name, verdict in rows:
        _print_verdict(name, verdict)
    return 0 if thm2.solvable else 1


def _region_points(args):
    a_vals = np.linspace(args.A[0], args.A[1], args.nA)
    b_vals = np.linspace(args.B[0], args.B[1], args.nB)
    seen = set()
    points = []
    for a in a_vals:
        for b in b_vals:
            key = (float(a), float(b))
            if key not in seen:
                seen.add(key)
                points.append(key)
    points.sort()
    return points


def _region_row(task):
    A, B, n_tau = task
    thm2 = criteria.check_theorem2(A, B)
    cor1 = criteria.check_corollary1(A, B)
    c1 = criteria.check_cor2_cond1(A, B)
    c2 = criteria.check_cor2_cond2(A, B)
    c3 = criteria.check_cor2_cond3(A, B)
    m_analytic = determinant.min_delta_analytic(A, B).m_value
    m_grid = determinant.min_delta_grid(A, B, n_tau).m_value
    flags = "".join(f",{1 if v.solvable else 0}" for v in (thm2, cor1, c1, c2, c3))
    return f"{_fmt9(A)},{_fmt9(B)}{flags},{_fmt9(m_analytic)},{_fmt9(m_grid)}"


def _worker_count(n_points):
    raw = os.environ.get("FDE_THREADS", "")
    try:
        requested = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise SystemExit2(f"FDE_THREADS must be an integer, got {raw!r}")
    return max(1, min(requested, n_points))


def cmd_region(args):
    points = _region_points(args)
    workers = _worker_count(len(points))
    tasks = [(a, b, args.ntau) for a, b in points]
    if workers == 1:
        rows = [_region_row(t) for t in tasks]
    else:
        # Warm the grid kernel before forking so children inherit it.
        determinant.min_delta_grid(0.0, 0.0, 1)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_region_row, tasks, chunksize=8))
    text = CSV_HEADER + "\n" + "\n".join(rows) + "\n"
    return _emit(text, args.out)


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(out_path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return 3
    return 0


def cmd_minimize(args):
    report = determinant.min_delta_analytic(args.A, args.B)
    cfg = report.argmin
    print(f"m_analytic = {_fmt9(report.m_value)}")
    print(f"argmin: tau1 = {_fmt9(cfg.tau1)}  tau2 = {_fmt9(cfg.tau2)}  "
          f"alpha = {_fmt9(cfg.alpha)}  beta = {_fmt9(cfg.beta)}")
    if args.ntau is not None:
        grid = determinant.min_delta_grid(args.A, args.B, args.ntau)
        print(f"m_grid(ntau={args.ntau}) = {_fmt9(grid.m_value)}")
    return 0 if report.m_value > 0.0 else 1


def cmd_counterexample(args):
    A, B = args.A, args.B
    try:
        prob = equations.construct_counterexample(A, B)
    except equations.NotOnBoundary as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    delta_val = equations.problem_delta(prob)
    coeffs = equations.homogeneous_nullspace(prob)
    kernel = equations.homogeneous_solution(prob, coeffs)
    resid = equations.residual(prob, kernel)
    print(f"counterexample at A = {_fmt9(A)}, B = {_fmt9(B)}")
    print(f"tau1 = {_fmt9(prob.tau1)}  tau2 = {_fmt9(prob.tau2)}  "
          f"delta = {delta_val:.3e}")
    print(f"null vector: ({_fmt9(coeffs[0])}, {_fmt9(coeffs[1])})")
    print(f"kernel residual = {resid:.3e}")
    if args.out is not None:
        extra = {
            "A": A, "B": B, "delta": delta_val,
            "null_vector": list(coeffs), "residual": resid,
        }
        code = _emit(equations.problem_to_json(prob, extra=extra), args.out)
        if code:
            return code
        print(f"written: {args.out}")
    return 0


def _parse_nonlinearity(spec):
    name, _, params_text = spec.partition(":")
    params = {}
    if params_text:
        for item in params_text.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise SystemExit2(f"bad nonlinearity parameter {item!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise SystemExit2(f"bad nonlinearity parameter {item!r}")
    try:
        if name == "power":
            return quasilinear.power_nonlinearity(
                kappa=params.pop("kappa", 1.0), gamma=params.pop("gamma", 0.5))
        if name == "tanh":
            return quasilinear.tanh_nonlinearity(kappa=params.pop("kappa", 1.0))
    except ValueError as exc:
        raise SystemExit2(str(exc))
    raise SystemExit2(f"unknown nonlinearity {name!r} (have: power, tanh)")


def cmd_solve(args):
    try:
        with open(args.problem) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.problem}: {exc}", file=sys.stderr)
        return 3
    try:
        prob = equations.problem_from_json(text)
    except json.JSONDecodeError as exc:
        print(f"error: {args.problem}: invalid JSON at line {exc.lineno}, "
              f"column {exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {args.problem}: {exc}", file=sys.stderr)
        return 2

    try:
        if args.quasilinear is not None:
            nl = _parse_nonlinearity(args.quasilinear)
            x = quasilinear.solve_quasilinear(
                prob, nl, tol=args.tol, max_iter=args.max_iter, theta=args.theta)
            resid = quasilinear.quasilinear_residual(prob, nl, x)
        else:
            x = equations.solve_two_point(prob)
            resid = equations.residual(prob, x)
    except equations.SingularProblem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except quasilinear.NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(f"solved: {x.breaks.size} nodes  x(tau1) = {_fmt9(x(prob.tau1))}  "
          f"x(tau2) = {_fmt9(x(prob.tau2))}  residual = {resid:.3e}")
    if args.out is not None:
        code = _emit(equations.solution_to_json(x), args.out)
        if code:
            return code
        print(f"written: {args.out}")
    return 0


def cmd_oracle(args):
    a_lo, a_hi = args.A
    b_lo, b_hi = args.B
    if a_lo == a_hi and b_lo == b_hi:
        A, B = a_lo, b_lo
        grid = determinant.min_delta_grid(A, B, args.ntau)
        print(f"m_grid(ntau={args.ntau}) = {_fmt9(grid.m_value)}")
        for branch in ("vertex", "alt"):
            rep = determinant.min_delta_analytic(A, B, branch=branch)
            thr = determinant.branch_threshold(A, branch)
            print(f"m_analytic[{branch}] = {_fmt9(rep.m_value)}  "
                  f"threshold_B = {_fmt9(thr)}")
        return 0 if grid.m_value > 0.0 else 1
    report = determinant.reconcile_thresholds(
        a_lo=a_lo, a_hi=a_hi, b_lo=b_lo, b_hi=b_hi,
        n_a=args.nA, n_b=args.nB, n_tau=args.ntau)
    print(f"checked {report.checked} lattice points")
    for branch in ("vertex", "alt"):
        print(f"{branch}: {len(report.mismatches[branch])} sign mismatches, "
              f"{report.banded[branch]} banded")
    if report.certified is None:
        print("certified: none (ambiguous)")
        return 1
    print(f"certified: {report.certified}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fdecauchy",
        description="Unique-solvability analysis for Cauchy problems with "
                    "two-point positive operators of prescribed norms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run every criterion at one (A, B)")
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--tplus", type=float, default=None, help="ess-sup norm of T+")
    p.add_argument("--tminus", type=float, default=None, help="ess-sup norm of T-")
    p.add_argument("--a", type=float, default=0.0, help="interval start")
    p.add_argument("--b", type=float, default=1.0, help="interval end")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("region", help="CSV scan of the (A, B) rectangle")
    p.add_argument("--A", type=_range_pair, default=(0.0, 0.95), metavar="LO:HI")
    p.add_argument("--B", type=_range_pair, default=(0.0, 3.2), metavar="LO:HI")
    p.add_argument("--nA", type=int, default=20)
    p.add_argument("--nB", type=int, default=20)
    p.add_argument("--ntau", type=int, default=2000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("minimize", help="determinant minimum at one (A, B)")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--ntau", type=int, default=None,
                   help="also run the grid oracle at this resolution")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("counterexample",
                       help="build a kernel problem at non-solvable (A, B)")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--out", default=None, help="write problem JSON here")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("solve", help="solve a problem from a JSON file")
    p.add_argument("problem", help="path to problem JSON")
    p.add_argument("--out", default=None, help="write solution JSON here")
    p.add_argument("--quasilinear", default=None, metavar="NAME:PARAMS",
                   help="e.g. power:kappa=1,gamma=0.5 or tanh:kappa=2")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--theta", type=float, default=0.5)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle",
                       help="grid oracle at a point, or threshold arbitration "
                            "over ranges")
    p.add_argument("--A", type=_range_pair, default=(0.2, 0.9), metavar="X|LO:HI")
    p.add_argument("--B", type=_range_pair, default=(1.0, 1.6), metavar="X|LO:HI")
    p.add_argument("--nA", type=int, default=15)
    p.add_argument("--nB", type=int, default=13)
    p.add_argument("--ntau", type=int, default=2000)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SystemExit2, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
