"""Bounds, conjecture sweeps, and the perturbation report at the square.

Everything here combines the 2D lattice solver with the closed-form
quantities: the quadratic and oscillator upper bounds, the diamagnetic,
uniform-field and strip lower bounds, the margin scan over aspect ratios,
and the two independent routes to the second aspect-derivative of the
ground eigenvalue at a = 1.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .domain import FieldGauge, aspect_value, bounds_certified_region
from .eigensolve import (
    richardson_extrapolate,
    smallest_eigenpair,
    smallest_eigenpairs,
    solve_deflated,
)
from .lattice import (
    GridSpec,
    covariant_norms,
    directional_stiffness,
    hamiltonian_from_parts,
)
from .oscillator1d import c_constant, nu
from .textio import fmt, fmt_bool, write_csv, write_json

__all__ = [
    "ScanRecord",
    "DerivReport",
    "RouteMismatchError",
    "SCAN_CSV_COLUMNS",
    "lambda1",
    "lambda1_detail",
    "upper_bound_quadratic",
    "upper_bound_nu",
    "lower_bounds",
    "scan_conjecture",
    "derivative_report",
    "symmetry_check_square",
    "write_scan_csv",
    "write_scan_json",
]

SCAN_CSV_COLUMNS = (
    "a", "B", "theta", "n", "lambda",
    "lower_dia", "lower_landau", "lower_strip",
    "upper_quad", "upper_nu", "margin", "in_thm12_region",
)


class RouteMismatchError(RuntimeError):
    """The two second-derivative routes disagree beyond the sanity threshold."""


@dataclass
class ScanRecord:
    """One point of the conjecture sweep with its bound sandwich."""

    a: float
    B: float
    theta: float
    n: int
    lam: float
    lower_dia: float
    lower_landau: float
    lower_strip: float
    upper_quad: float
    upper_nu: float
    margin: float
    in_thm12_region: bool
    tol: float
    iterations: int
    residual: float
    error: str | None = None

    def sandwich_ok(self, slack=1e-2) -> bool:
        if not math.isfinite(self.lam):
            return False
        lower = max(self.lower_dia, self.lower_landau, self.lower_strip)
        upper = min(self.upper_quad, self.upper_nu)
        return lower - slack <= self.lam <= upper + slack


@dataclass
class DerivReport:
    """Aspect derivatives of the ground eigenvalue at the square.

    The finite-difference route differentiates the extrapolated eigenvalue
    in a; the formula route evaluates the perturbation expression built
    from the eigenvector response, obtained by the deflated solve.
    """

    B: float
    lambda_at_1: float
    first_derivative_fd: float
    half_second_derivative_fd: float
    half_second_derivative_formula: float
    udot_norm: float
    eigen_gap: float
    degenerate: bool


@dataclass
class SolveDetail:
    value: float
    coarse: float
    fine: float
    residual: float
    iterations: int


def lambda1_detail(a, B, theta, grid: GridSpec, tol=1e-9) -> SolveDetail:
    """Two-grid solve of the lowest eigenvalue with extrapolation metadata."""
    a = aspect_value(a)
    gauge = FieldGauge(B, theta)
    fine_grid = grid.refine()
    pair_c = smallest_eigenpair(
        hamiltonian_from_parts(*directional_stiffness(grid, gauge), a),
        tol=tol, cell_area=grid.cell,
    )
    pair_f = smallest_eigenpair(
        hamiltonian_from_parts(*directional_stiffness(fine_grid, gauge), a),
        tol=tol, cell_area=fine_grid.cell,
    )
    value = richardson_extrapolate(pair_c.eigenvalue, pair_f.eigenvalue, 2.0, 2)
    return SolveDetail(
        value=value,
        coarse=pair_c.eigenvalue,
        fine=pair_f.eigenvalue,
        residual=max(pair_c.residual, pair_f.residual),
        iterations=pair_c.iterations + pair_f.iterations,
    )


def lambda1(a, B, theta=0.5, grid: GridSpec | None = None, tol=1e-9) -> float:
    """Extrapolated lowest eigenvalue of the aspect-a rectangle at field B.

    Solves on `grid` and its refinement (spacing halved) and removes the
    O(h^2) discretization error; deterministic for identical inputs.
    """
    grid = grid or GridSpec(63, 63)
    return lambda1_detail(a, B, theta, grid, tol).value


def upper_bound_quadratic(a, B) -> float:
    """Closed-form bound pi^2 (a^-2 + a^2) + c a^2 / (1 + a^4) B^2."""
    a = aspect_value(a)
    return (
        math.pi ** 2 * (a ** -2 + a ** 2)
        + c_constant() * a ** 2 / (1.0 + a ** 4) * B ** 2
    )


def upper_bound_nu(a, B, resolution=2048) -> float:
    """Oscillator product bound (a^-2 + a^2) nu(a^2 B / (1 + a^4)).

    Sharper than the quadratic bound for strong fields; the argument of nu
    corresponds to the optimizing gauge split theta = a^4 / (1 + a^4).
    """
    a = aspect_value(a)
    return (a ** -2 + a ** 2) * nu(a ** 2 * B / (1.0 + a ** 4), resolution).nu


def lower_bounds(a, B, resolution=2048):
    """Lower bounds (diamagnetic, uniform-field, strip) for lambda(a, B).

    dia    : field-free value pi^2 (a^-2 + a^2);
    landau : |B|, from comparison with the whole-plane operator;
    strip  : max(a^-2 nu(a^2 B), a^2 nu(a^-2 B)), from domain monotonicity
             into the two infinite strips containing the rectangle.
    """
    a = aspect_value(a)
    dia = math.pi ** 2 * (a ** -2 + a ** 2)
    landau = abs(B)
    strip = max(
        a ** -2 * nu(a ** 2 * B, resolution).nu,
        a ** 2 * nu(a ** -2 * B, resolution).nu,
    )
    return dia, landau, strip


def _scan_point(args):
    a, B, theta, grid, tol, base_lam = args
    in_region = bounds_certified_region(a, B)
    dia, landau, strip = lower_bounds(a, B)
    up_q = upper_bound_quadratic(a, B)
    up_n = upper_bound_nu(a, B)
    try:
        if a == 1.0:
            detail = base_lam
        else:
            detail = lambda1_detail(a, B, theta, grid, tol)
        lam = detail.value
        margin = lam - base_lam.value
        error = None
        iterations, residual = detail.iterations, detail.residual
    except Exception as exc:  # aggregated, the sweep keeps going
        lam = math.nan
        margin = math.nan
        error = str(exc)
        iterations, residual = 0, math.nan
    return ScanRecord(
        a=a, B=B, theta=theta, n=grid.n1, lam=lam,
        lower_dia=dia, lower_landau=landau, lower_strip=strip,
        upper_quad=up_q, upper_nu=up_n, margin=margin,
        in_thm12_region=in_region,
        tol=tol, iterations=iterations, residual=residual, error=error,
    )


def scan_conjecture(a_values, B_values, theta=0.5, grid: GridSpec | None = None,
                    tol=1e-7, jobs=1) -> list[ScanRecord]:
    """Margin sweep lambda(a, B) - lambda(1, B) over a grid of parameters.

    One record per (a, B) pair in deterministic order (a outer, B inner);
    the reference solve at a = 1 is shared per field value, so the margin
    at a = 1 is exactly zero.  Per-point solver failures are recorded in
    the `error` field without aborting the sweep.
    """
    grid = grid or GridSpec(63, 63)
    a_values = [aspect_value(a) for a in a_values]
    B_values = [float(B) for B in B_values]
    base = {B: lambda1_detail(1.0, B, theta, grid, tol) for B in B_values}
    tasks = [
        (a, B, theta, grid, tol, base[B]) for a in a_values for B in B_values
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_point, tasks))
    return [_scan_point(t) for t in tasks]


def _formula_half_second(B, grid: GridSpec, tol):
    """Perturbation-formula value of half the second aspect-derivative.

    Solves the deflated response problem (H - lambda) w = 2 (K1 - K2) u
    with w orthogonal to the ground state u, then evaluates
    2 lambda + lambda ||w||^2 - ||d1 w||^2 - ||d2 w||^2 in the discrete
    inner product.  Returns the value, the response norm and the gap to
    the second eigenvalue.
    """
    gauge = FieldGauge(B, 0.5)
    K1, K2 = directional_stiffness(grid, gauge)
    H = hamiltonian_from_parts(K1, K2, 1.0)
    ground, second = smallest_eigenpairs(H, k=2, tol=tol, cell_area=grid.cell)
    lam, u = ground.eigenvalue, ground.vector
    gap = second.eigenvalue - lam
    rhs = 2.0 * (K1 @ u - K2 @ u)
    deflate_tol = max(1e-13, 1e-11 * float(np.linalg.norm(rhs)))
    w = solve_deflated(H, lam, rhs, u, tol=deflate_tol)
    wnorm_sq = grid.cell * float(np.vdot(w, w).real)
    d1, d2 = covariant_norms(K1, K2, w, grid.cell)
    value = 2.0 * lam + lam * wnorm_sq - d1 ** 2 - d2 ** 2
    return value, math.sqrt(wnorm_sq), gap


def derivative_report(B, grid: GridSpec | None = None, step=0.02, tol=1e-9,
                      route_check=0.05) -> DerivReport:
    """Derivatives of lambda(a) at a = 1 by two independent routes.

    The symmetric gauge theta = 1/2 is enforced.  Central differences of
    the extrapolated eigenvalue are taken at the given step and at half
    the step, and combined to cancel the leading truncation term; the
    formula route is evaluated on the coarse and fine grids and
    extrapolated the same way.

    Emits a warning (and sets `degenerate`) when the gap to the second
    eigenvalue falls below 10x the solver tolerance; raises
    RouteMismatchError when the two second-derivative routes disagree by
    more than `route_check` relative.
    """
    grid = grid or GridSpec(63, 63)
    if step <= 0:
        raise ValueError("step must be positive")
    theta = 0.5

    lam = {
        da: lambda1_detail(1.0 + da, B, theta, grid, tol).value
        for da in (-step, -step / 2, 0.0, step / 2, step)
    }

    def central_first(s):
        return (lam[s] - lam[-s]) / (2.0 * s)

    def central_second(s):
        return (lam[s] - 2.0 * lam[0.0] + lam[-s]) / s ** 2

    first = richardson_extrapolate(central_first(step), central_first(step / 2), 2.0, 2)
    second = richardson_extrapolate(central_second(step), central_second(step / 2), 2.0, 2)

    formula_c, _, _ = _formula_half_second(B, grid, tol)
    formula_f, udot_norm, gap = _formula_half_second(B, grid.refine(), tol)
    formula = richardson_extrapolate(formula_c, formula_f, 2.0, 2)

    degenerate = gap < 10.0 * tol
    if degenerate:
        warnings.warn(
            f"eigenvalue gap {gap:.3e} below simplicity threshold; "
            "perturbation formulas are unreliable here",
            RuntimeWarning,
            stacklevel=2,
        )
    half_fd = 0.5 * second
    if abs(formula - half_fd) > route_check * abs(half_fd):
        raise RouteMismatchError(
            f"second-derivative routes disagree: fd {half_fd!r} vs formula {formula!r}"
        )
    return DerivReport(
        B=float(B),
        lambda_at_1=lam[0.0],
        first_derivative_fd=first,
        half_second_derivative_fd=half_fd,
        half_second_derivative_formula=formula,
        udot_norm=udot_norm,
        eigen_gap=gap,
        degenerate=degenerate,
    )


def symmetry_check_square(B, grid: GridSpec | None = None, tol=1e-9) -> float:
    """Relative mismatch of the two covariant derivative norms at a = 1.

    Returns | ||d1 u|| - ||d2 u|| | / max(...) for the computed ground
    state of the square in the symmetric gauge; the quarter-turn symmetry
    of the square makes this vanish up to solver accuracy.
    """
    grid = grid or GridSpec(63, 63)
    gauge = FieldGauge(B, 0.5)
    K1, K2 = directional_stiffness(grid, gauge)
    H = hamiltonian_from_parts(K1, K2, 1.0)
    pair = smallest_eigenpair(H, tol=tol, cell_area=grid.cell)
    d1, d2 = covariant_norms(K1, K2, pair.vector, grid.cell)
    return abs(d1 - d2) / max(d1, d2)


def _record_cells(r: ScanRecord):
    return (
        fmt(r.a), fmt(r.B), fmt(r.theta), str(r.n), fmt(r.lam),
        fmt(r.lower_dia), fmt(r.lower_landau), fmt(r.lower_strip),
        fmt(r.upper_quad), fmt(r.upper_nu), fmt(r.margin),
        fmt_bool(r.in_thm12_region),
    )


def write_scan_csv(records, path, metadata=None) -> None:
    """Emit sweep records as CSV with the fixed column schema."""
    write_csv(path, SCAN_CSV_COLUMNS, (_record_cells(r) for r in records),
              metadata=metadata)


def write_scan_json(records, path, metadata=None) -> None:
    """Emit sweep records as JSON, mirroring the CSV keys plus solver data."""
    payload = {
        "metadata": metadata or {},
        "records": [
            {
                "a": r.a, "B": r.B, "theta": r.theta, "n": r.n,
                "lambda": r.lam,
                "lower_dia": r.lower_dia, "lower_landau": r.lower_landau,
                "lower_strip": r.lower_strip,
                "upper_quad": r.upper_quad, "upper_nu": r.upper_nu,
                "margin": r.margin, "in_thm12_region": r.in_thm12_region,
                "tol": r.tol, "iterations": r.iterations,
                "residual": r.residual, "error": r.error,
            }
            for r in records
        ],
    }
    write_json(path, payload)
