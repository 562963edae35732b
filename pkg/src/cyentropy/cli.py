"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence or
exhausted time budget, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import cohomology, dynamics, entropy, geometry, report
from .numerics import ConvergenceError, InvariantViolation, NoSignChangeError, Polynomial
from .verify import DEFAULT_BUDGET, verify_suite

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return report.parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _dims(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--dim", type=int, default=3, help="dimension d >= 3 (default 3)")
    common.add_argument("--degree", type=int, help="hypersurface degree (must be d+2)")
    common.add_argument(
        "--hilbert",
        help="user Hilbert polynomial, comma-separated coefficients c0,c1,...,cd (p/q allowed)",
    )
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--output", "-o", type=Path, help="write to this file instead of stdout")
    common.add_argument("--tol", type=_rational, default=entropy.DEFAULT_TOL,
                        help="relative bracket tolerance on x = e^-lambda (default 2^-64)")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="cyentropy", description="Categorical entropy of T_O o (- (x) O(-1)) on CY hypersurfaces")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("variety", parents=[common], help="show a_k, Hilbert polynomial, Chern/Todd data")

    p = sub.add_parser("solve", parents=[common], help="solve for h_t at one t")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t", type=float, help="real parameter t (default 0)")
    g.add_argument("--rhs", type=_rational, help="exact rational value of e^{(d-1)t}")

    p = sub.add_parser("sweep", parents=[common], help="solve on a uniform t grid")
    p.add_argument("--t-min", type=float, default=-2.0)
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=101)

    sub.add_parser("curve", parents=[common], help="integer curve F(e^t, e^h_t) = 0")

    p = sub.add_parser("dynamics", parents=[common], help="C_n recursion and growth estimate")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--s", type=_rational, help="exact s = e^{-(d-1)t} (default 1)")
    g.add_argument("--t", type=float)
    p.add_argument("--n-max", type=int, default=2000)
    p.add_argument("--mode", choices=["log-space", "exact"], default="log-space")

    sub.add_parser("cohomology", parents=[common], help="matrices and spectra of the induced action")
    sub.add_parser("counterexample", parents=[common], help="Kikuta-Takahashi verdict")

    p = sub.add_parser("verify", parents=[common], help="run every cross-module check")
    p.add_argument("--dims", type=_dims, default=[3, 4], help="comma-separated dimensions in 3..8 (default 3,4)")
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="time budget in seconds")
    return parser


def _variety(args) -> geometry.VarietySpec:
    hilbert = None
    if args.hilbert:
        try:
            hilbert = Polynomial(report.parse_rational(c) for c in args.hilbert.split(","))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return geometry.make_variety(args.dim, args.degree, hilbert)


def _emit(args, text: str) -> None:
    if args.output:
        args.output.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _frac_list(values) -> list[str]:
    return [report.exact_str(v) for v in values]


def cmd_variety(args) -> int:
    X = _variety(args)
    out = {
        "dim": X.d,
        "degree": X.degree,
        "mode": X.mode,
        "top_intersection": X.top_intersection,
        "hilbert_polynomial": _frac_list(geometry.hilbert_polynomial(X).coeffs),
        "a_k": geometry.a_sequence(X, 10),
        "chi_O": geometry.euler_characteristic(X, 0),
    }
    if X.is_builtin:
        cc = geometry.characteristic_classes(X)
        out.update(chern=_frac_list(cc.chern), todd=_frac_list(cc.todd), sqrt_todd=_frac_list(cc.sqrt_todd))
    if args.format == "json":
        _emit(args, report.dumps_json(out))
    else:
        _emit(args, "".join(f"{k}: {v}\n" for k, v in out.items()))
    return EXIT_OK


def cmd_solve(args) -> int:
    X = _variety(args)
    if args.rhs is not None:
        res = entropy.solve_entropy(X, None, tol=args.tol, certified_rhs=args.rhs)
    else:
        res = entropy.solve_entropy(X, 0.0 if args.t is None else args.t, tol=args.tol)
    if args.format == "json":
        _emit(args, report.dumps_json(report.solve_json(X, res)))
    elif args.format == "csv":
        row = report.sweep_rows([entropy.SweepRow(0, res, entropy.curve_residual(entropy.entropy_curve(X), res.t, res.lam))])
        _emit(args, report.dumps_csv(report.SWEEP_COLUMNS, row))
    else:
        _emit(args, f"{X.name}, t = {res.t!r}: h_t = {res.lam!r}  (x = e^-h in [{float(res.bracket.lo)!r}, {float(res.bracket.hi)!r}])\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    X = _variety(args)
    rows = entropy.sweep(X, args.t_min, args.t_max, args.steps, tol=args.tol)
    if args.format == "json":
        _emit(args, report.dumps_json({
            "variety": {"dim": X.d, "degree": X.degree, "mode": X.mode},
            "rows": [dict(report.solve_json(X, r.result), curve_residual=r.curve_residual) for r in rows],
        }))
    else:
        _emit(args, report.dumps_csv(report.SWEEP_COLUMNS, report.sweep_rows(rows)))
    return EXIT_OK


def cmd_curve(args) -> int:
    X = _variety(args)
    F = entropy.entropy_curve(X)
    if args.format == "json":
        _emit(args, report.dumps_json({
            "variety": {"dim": X.d, "degree": X.degree, "mode": X.mode},
            "variables": {"u": "e^t", "y": "e^lambda"},
            "terms": [list(t) for t in F.terms()],
            "polynomial": str(F),
            "spurious_root": "y = 1" if X.is_builtin else None,
        }))
    elif args.format == "csv":
        _emit(args, report.dumps_csv(["u_power", "y_power", "coefficient"], [list(t) for t in F.terms()]))
    else:
        _emit(args, f"F(u, y) = {F}\n")
    return EXIT_OK


def cmd_dynamics(args) -> int:
    X = _variety(args)
    if args.t is not None:
        s = dynamics.s_from_t(X.d, args.t)
    else:
        s = args.s if args.s is not None else Fraction(1)
    table = dynamics.c_sequence(X, s, args.n_max, mode=args.mode)
    if args.format == "csv":
        _emit(args, report.dumps_csv(report.DYNAMICS_COLUMNS, report.dynamics_rows(table)))
        return EXIT_OK
    est = dynamics.growth_estimate(table)
    t = -math.log(float(s)) / (X.d - 1)
    lam = entropy.solve_entropy(X, t).lam
    out = {
        "variety": {"dim": X.d, "degree": X.degree, "mode": X.mode},
        "s": report.exact_str(s) if isinstance(s, Fraction) else repr(s),
        "n_max": args.n_max,
        "mode": args.mode,
        "lambda_hat": est.lambda_hat,
        "lambda_cesaro": est.cesaro,
        "tail_oscillation": est.tail_oscillation,
        "lambda_solver": lam,
        "abs_difference": abs(est.lambda_hat - lam),
    }
    if args.format == "json":
        _emit(args, report.dumps_json(out))
    else:
        _emit(args, "".join(f"{k}: {v}\n" for k, v in out.items()))
    return EXIT_OK


def _matrix_json(M: cohomology.ActionMatrix) -> list[list[str]]:
    return [_frac_list(row) for row in M.rows]


def cmd_cohomology(args) -> int:
    X = _variety(args)
    act = cohomology.phi_action_matrix(X)
    rep = cohomology.counterexample_report(X)
    out = rep.to_json()
    out["matrices"] = {
        "twist": _matrix_json(act.twist),
        "tensor": _matrix_json(act.tensor),
        "phi": _matrix_json(act.phi),
    }
    out["mukai_vector_O"] = _frac_list(cohomology.mukai_vector(X, 0).coords)
    if args.format == "json":
        _emit(args, report.dumps_json(out))
    else:
        _emit(args, "".join(f"{k}: {v}\n" for k, v in out.items()))
    return EXIT_OK


def cmd_counterexample(args) -> int:
    X = _variety(args)
    rep = cohomology.counterexample_report(X)
    if args.format == "json":
        _emit(args, report.dumps_json(rep.to_json()))
    else:
        verdict = "holds" if rep.kt_holds else "FAILS"
        _emit(args, (
            f"{X.name}: h_0 = {rep.h0!r}, log rho = {rep.log_rho_full!r}, "
            f"phi^{X.d + 2} = I: {rep.quasi_unipotent}; Kikuta-Takahashi {verdict}\n"
        ))
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = verify_suite(args.dims, budget=args.budget, seed=args.seed)
    _emit(args, report.dumps_json(rep.to_json()) if args.format == "json" else rep.to_text())
    if not rep.complete:
        return EXIT_NUMERIC
    return EXIT_OK if rep.passed else EXIT_INVARIANT


COMMANDS = {
    "variety": cmd_variety,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "curve": cmd_curve,
    "dynamics": cmd_dynamics,
    "cohomology": cmd_cohomology,
    "counterexample": cmd_counterexample,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except InvariantViolation as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ConvergenceError, NoSignChangeError) as exc:
        print(f"error: no convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
