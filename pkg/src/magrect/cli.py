"""Command-line front end.

Subcommands: nu, eigen, scan, derivs, mu, bounds, figure1.  Outputs are
CSV or JSON with solver metadata embedded; the report subcommands (scan,
figure1) also render a PNG figure next to the data file unless --no-plot
is given.  Exit status: 0 success, 2 invalid flags, 3 solver
non-convergence (partial results are still written, with failure markers).

Numeric sweep flags accept either comma lists ("0,0.5,1") or ranges in
start:stop:step form ("0.5:2:0.05", endpoints inclusive up to rounding).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    DerivReport,
    derivative_report,
    lambda1_detail,
    lower_bounds,
    scan_conjecture,
    upper_bound_nu,
    upper_bound_quadratic,
    write_scan_csv,
    write_scan_json,
)
from .eigensolve import NonConvergenceError
from .lattice import GridSpec
from .muopt import minimize_J, write_mu_json
from .oscillator1d import nu, nu_curve_data, write_nu_curve_csv
from .textio import fmt, write_csv, write_json

STATUS_OK = 0
STATUS_USAGE = 2
STATUS_SOLVER = 3


def _fail(message, status):
    print(json.dumps({"error": message}), file=sys.stderr)
    return status


def parse_values(text):
    """Parse a comma list or a start:stop:step range into floats."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(
                f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-12 * max(1.0, abs(stop)):
                break
            values.append(round(v, 12))
            k += 1
        return values
    try:
        return [float(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad numeric list {text!r}") from exc


def positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


def grid_size(text):
    v = int(text)
    if v < 3:
        raise argparse.ArgumentTypeError("grid size must be at least 3")
    return v


def _metadata(**extra):
    meta = {"generator": f"magrect {__version__}"}
    meta.update(extra)
    return meta


def build_parser():
    parser = argparse.ArgumentParser(
        prog="magrect",
        description="Spectral toolkit for the magnetic Dirichlet Laplacian "
                    "on unit-area rectangles.",
    )
    parser.add_argument("--version", action="version",
                        version=f"magrect {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("nu", help="1D boxed-oscillator ground eigenvalue")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--resolution", type=grid_size, default=2048)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("eigen", help="lowest 2D eigenvalue for one (a, B)")
    p.add_argument("--a", type=positive_float, default=1.0)
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--n", type=grid_size, default=63,
                   help="coarse grid; the refinement 2n+1 is solved too")
    p.add_argument("--tol", type=positive_float, default=1e-9)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("bounds", help="closed-form bound family for one (a, B)")
    p.add_argument("--a", type=positive_float, default=1.0)
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--resolution", type=grid_size, default=2048)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("scan", help="conjecture margin sweep over (a, B)")
    p.add_argument("--a", type=parse_values, default=parse_values("0.5:2:0.05"))
    p.add_argument("--B", type=parse_values, default=parse_values("0,0.5,1,2,5,10,20"))
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--n", type=grid_size, default=127)
    p.add_argument("--tol", type=positive_float, default=1e-7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("--plot", type=Path, help="figure path (default: out with .png)")

    p = sub.add_parser("derivs", help="aspect-derivative report at the square")
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--n", type=grid_size, default=63)
    p.add_argument("--step", type=positive_float, default=0.02)
    p.add_argument("--tol", type=positive_float, default=1e-9)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("mu", help="non-convex product-functional minimization")
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--n", type=grid_size, default=127)
    p.add_argument("--tol", type=positive_float, default=1e-8)
    p.add_argument("--max-outer", type=int, default=60)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("figure1",
                       help="nu(beta) curve with both asymptotes, CSV + figure")
    p.add_argument("--betas", type=parse_values, default=parse_values("0:50:0.5"))
    p.add_argument("--resolution", type=grid_size, default=2048)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("--plot", type=Path)

    return parser


def _write_table(out, fmt_choice, columns, row, metadata):
    if fmt_choice == "csv":
        write_csv(out, columns, [tuple(fmt(v) if isinstance(v, float) else str(v)
                                       for v in row)], metadata=metadata)
    else:
        write_json(out, {"metadata": metadata,
                         "record": dict(zip(columns, row))})


def _cmd_nu(args):
    point = nu(args.beta, args.resolution)
    print(f"nu({fmt(point.beta)}) = {fmt(point.nu)}")
    if args.out:
        _write_table(
            args.out, args.format,
            ("beta", "nu", "lower_check", "upper_check", "asymptote"),
            (point.beta, point.nu, point.lower_check, point.upper_check,
             point.asymptote),
            _metadata(resolution=args.resolution),
        )
    return STATUS_OK


def _cmd_eigen(args):
    grid = GridSpec(args.n, args.n)
    detail = lambda1_detail(args.a, args.B, args.theta, grid, args.tol)
    print(f"lambda = {fmt(detail.value)}")
    if args.out:
        _write_table(
            args.out, args.format,
            ("a", "B", "theta", "n", "lambda", "lambda_coarse", "lambda_fine",
             "residual", "iterations"),
            (args.a, args.B, args.theta, args.n, detail.value, detail.coarse,
             detail.fine, detail.residual, detail.iterations),
            _metadata(n=args.n, tol=args.tol),
        )
    return STATUS_OK


def _cmd_bounds(args):
    dia, landau, strip = lower_bounds(args.a, args.B, args.resolution)
    up_q = upper_bound_quadratic(args.a, args.B)
    up_n = upper_bound_nu(args.a, args.B, args.resolution)
    for name, value in (("lower_dia", dia), ("lower_landau", landau),
                        ("lower_strip", strip), ("upper_quad", up_q),
                        ("upper_nu", up_n)):
        print(f"{name} = {fmt(value)}")
    if args.out:
        _write_table(
            args.out, args.format,
            ("a", "B", "lower_dia", "lower_landau", "lower_strip",
             "upper_quad", "upper_nu"),
            (args.a, args.B, dia, landau, strip, up_q, up_n),
            _metadata(resolution=args.resolution),
        )
    return STATUS_OK


def _cmd_scan(args):
    grid = GridSpec(args.n, args.n)
    records = scan_conjecture(args.a, args.B, args.theta, grid,
                              tol=args.tol, jobs=max(1, args.jobs))
    residuals = [r.residual for r in records if not r.error]
    meta = _metadata(n=args.n, tol=args.tol, theta=args.theta,
                     max_residual=max(residuals) if residuals else "nan")
    if args.format == "csv":
        write_scan_csv(records, args.out, metadata=meta)
    else:
        write_scan_json(records, args.out, metadata=meta)
    if not args.no_plot:
        from .figures import render_scan_margins

        render_scan_margins(records, args.plot or args.out.with_suffix(".png"))
    failures = [r for r in records if r.error]
    if failures:
        return _fail(f"{len(failures)} sweep points failed to converge",
                     STATUS_SOLVER)
    return STATUS_OK


def _cmd_derivs(args):
    grid = GridSpec(args.n, args.n)
    report = derivative_report(args.B, grid, step=args.step, tol=args.tol)
    fields = (
        ("B", report.B),
        ("lambda_at_1", report.lambda_at_1),
        ("first_derivative_fd", report.first_derivative_fd),
        ("half_second_derivative_fd", report.half_second_derivative_fd),
        ("half_second_derivative_formula", report.half_second_derivative_formula),
        ("udot_norm", report.udot_norm),
        ("eigen_gap", report.eigen_gap),
    )
    for name, value in fields:
        print(f"{name} = {fmt(value)}")
    if args.out:
        _write_table(args.out, args.format,
                     tuple(n for n, _ in fields), tuple(v for _, v in fields),
                     _metadata(n=args.n, step=args.step, tol=args.tol))
    return STATUS_OK


def _cmd_mu(args):
    grid = GridSpec(args.n, args.n)
    result = minimize_J(args.B, args.theta, grid, tol=args.tol,
                        max_outer=args.max_outer)
    print(f"mu = {fmt(result.mu)}")
    print(f"alpha = {fmt(result.alpha)}")
    print(f"symmetry_residual = {fmt(result.symmetry_residual)}")
    if args.out:
        write_mu_json(result, args.out,
                      metadata=_metadata(n=args.n, B=args.B, theta=args.theta,
                                         tol=args.tol))
    if not result.converged:
        return _fail("mu minimization did not converge in all restarts",
                     STATUS_SOLVER)
    return STATUS_OK


def _cmd_figure1(args):
    points = nu_curve_data(args.betas, args.resolution)
    write_nu_curve_csv(points, args.out,
                       metadata=_metadata(resolution=args.resolution))
    if not args.no_plot:
        from .figures import render_nu_curve

        render_nu_curve(points, args.plot or args.out.with_suffix(".png"))
    return STATUS_OK


_COMMANDS = {
    "nu": _cmd_nu,
    "eigen": _cmd_eigen,
    "bounds": _cmd_bounds,
    "scan": _cmd_scan,
    "derivs": _cmd_derivs,
    "mu": _cmd_mu,
    "figure1": _cmd_figure1,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except NonConvergenceError as exc:
        return _fail(str(exc), STATUS_SOLVER)
    except ValueError as exc:
        return _fail(str(exc), STATUS_USAGE)


if __name__ == "__main__":
    sys.exit(main())
