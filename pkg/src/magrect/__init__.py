"""Spectral toolkit for the magnetic Dirichlet Laplacian on unit-area rectangles.

Computes the lowest eigenvalue of (-i grad - A)^2 with zero boundary
values on rectangles of sides a, 1/a via a gauge-covariant lattice
discretization, evaluates the closed-form upper and lower bounds built
from the boxed-oscillator eigenvalue nu(beta), and probes whether the
square minimizes the eigenvalue among all such rectangles.
"""

__version__ = "0.1.0"

from .domain import (
    Aspect,
    FieldGauge,
    analytic_lambda_zero_field,
    bounds_certified_region,
    vector_potential,
)
from .eigensolve import (
    DeflationError,
    EigenPair,
    NonConvergenceError,
    richardson_extrapolate,
    smallest_eigenpair,
    smallest_eigenpairs,
    solve_deflated,
)
from .lattice import (
    GridSpec,
    assemble_hamiltonian,
    covariant_norms,
    directional_stiffness,
    discrete_gauge_transform,
    dump_matrix,
    hamiltonian_from_parts,
)
from .oscillator1d import (
    NuPoint,
    OscillatorEigenfunction,
    c_constant,
    nu,
    nu_curve_data,
    phi_beta,
)
from .analysis import (
    DerivReport,
    ScanRecord,
    derivative_report,
    lambda1,
    lower_bounds,
    scan_conjecture,
    symmetry_check_square,
    upper_bound_nu,
    upper_bound_quadratic,
)
from .muopt import MuResult, minimize_J, rotate_state, symmetry_residual

__all__ = [
    "__version__",
    "Aspect",
    "FieldGauge",
    "GridSpec",
    "EigenPair",
    "NuPoint",
    "OscillatorEigenfunction",
    "ScanRecord",
    "DerivReport",
    "MuResult",
    "NonConvergenceError",
    "DeflationError",
    "vector_potential",
    "analytic_lambda_zero_field",
    "bounds_certified_region",
    "assemble_hamiltonian",
    "directional_stiffness",
    "hamiltonian_from_parts",
    "discrete_gauge_transform",
    "covariant_norms",
    "dump_matrix",
    "smallest_eigenpair",
    "smallest_eigenpairs",
    "solve_deflated",
    "richardson_extrapolate",
    "c_constant",
    "nu",
    "phi_beta",
    "nu_curve_data",
    "lambda1",
    "upper_bound_quadratic",
    "upper_bound_nu",
    "lower_bounds",
    "scan_conjecture",
    "derivative_report",
    "symmetry_check_square",
    "minimize_J",
    "symmetry_residual",
    "rotate_state",
]
