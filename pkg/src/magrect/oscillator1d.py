"""Oscillator in a box: lowest Dirichlet eigenvalue of -d^2/dx^2 + beta^2 x^2.

The operator lives on the interval (-1/2, 1/2) with zero boundary values.
Its ground energy nu(beta) interpolates between pi^2 (empty box) and |beta|
(unconfined oscillator) and underlies the closed-form upper and lower
bounds of the 2D rectangle problem.

Eigenvalues come from the symmetric tridiagonal finite-difference matrix,
Richardson-extrapolated over a half/full resolution pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .eigensolve import richardson_extrapolate
from .textio import fmt, write_csv

__all__ = [
    "PI_SQUARED",
    "NuPoint",
    "OscillatorEigenfunction",
    "c_constant",
    "nu",
    "phi_beta",
    "nu_curve_data",
    "write_nu_curve_csv",
    "NU_CSV_COLUMNS",
]

PI_SQUARED = math.pi ** 2

NU_CSV_COLUMNS = ("beta", "nu", "quad_upper", "abs_beta")


def c_constant() -> float:
    """Quadratic growth coefficient of the upper bound on nu(beta).

    Equals the second moment of the squared box ground state,
    integral of x^2 * 2 cos(pi x)^2 over (-1/2, 1/2), in closed form
    1/12 - 1/(2 pi^2) = 0.032672...
    """
    return 1.0 / 12.0 - 1.0 / (2.0 * PI_SQUARED)


@dataclass(frozen=True)
class NuPoint:
    """nu(beta) together with the closed-form bounds it must respect."""

    beta: float
    nu: float
    lower_check: float   # pi^2
    upper_check: float   # pi^2 + c beta^2
    asymptote: float     # |beta|

    def bounds_ok(self, slack=1e-8) -> bool:
        return (
            self.nu >= self.lower_check - slack
            and self.nu <= self.upper_check + slack
            and self.nu >= self.asymptote - slack
        )


@dataclass(frozen=True)
class OscillatorEigenfunction:
    """Positive normalized ground state sampled on the interior grid."""

    beta: float
    x: np.ndarray
    samples: np.ndarray
    normalization: float
    positive: bool


def _interior_grid(m: int):
    h = 1.0 / (m + 1)
    return h, -0.5 + h * np.arange(1, m + 1)


def _nu_single(beta: float, m: int) -> float:
    h, x = _interior_grid(m)
    diag = 2.0 / h ** 2 + beta ** 2 * x ** 2
    off = np.full(m - 1, -1.0 / h ** 2)
    w = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0),
                         eigvals_only=True)
    return float(w[0])


def _check_resolution(resolution):
    if resolution < 64:
        raise ValueError("resolution must be at least 64")


def nu(beta: float, resolution: int = 2048) -> NuPoint:
    """Ground eigenvalue nu(beta), extrapolated over two nested grids.

    The coarse grid has resolution // 2 interior points; the exact spacing
    ratio (resolution + 1) / (resolution // 2 + 1) feeds the second-order
    Richardson step.
    """
    _check_resolution(resolution)
    beta = float(beta)
    m_coarse = resolution // 2
    lam_c = _nu_single(beta, m_coarse)
    lam_f = _nu_single(beta, resolution)
    ratio = (resolution + 1) / (m_coarse + 1)
    value = richardson_extrapolate(lam_c, lam_f, ratio, 2)
    return NuPoint(
        beta=beta,
        nu=value,
        lower_check=PI_SQUARED,
        upper_check=PI_SQUARED + c_constant() * beta ** 2,
        asymptote=abs(beta),
    )


def phi_beta(beta: float, resolution: int = 2048) -> OscillatorEigenfunction:
    """Positive ground eigenfunction of the boxed oscillator.

    Samples are taken at the interior finite-difference nodes and
    normalized to unit discrete L2 norm, h * sum(phi^2) = 1.  The ground
    state of the even potential is even; at beta = 0 the samples coincide
    with sqrt(2) cos(pi x) at the nodes.
    """
    _check_resolution(resolution)
    beta = float(beta)
    h, x = _interior_grid(resolution)
    diag = 2.0 / h ** 2 + beta ** 2 * x ** 2
    off = np.full(resolution - 1, -1.0 / h ** 2)
    _, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    samples = v[:, 0]
    if samples[resolution // 2] < 0:
        samples = -samples
    samples = samples / (math.sqrt(h) * np.linalg.norm(samples))
    norm = h * float(np.dot(samples, samples))
    return OscillatorEigenfunction(
        beta=beta,
        x=x,
        samples=samples,
        normalization=norm,
        positive=bool(np.all(samples > 0)),
    )


def nu_curve_data(betas, resolution: int = 2048) -> list[NuPoint]:
    """nu(beta) on a grid of betas, with its two asymptotes attached.

    One row per beta: the eigenvalue, the quadratic small-beta bound
    pi^2 + c beta^2, and the large-beta asymptote |beta|.
    """
    return [nu(beta, resolution) for beta in betas]


def write_nu_curve_csv(points, path, metadata=None) -> None:
    """Emit the curve table as CSV: beta, nu, quad_upper, abs_beta."""
    rows = (
        (fmt(p.beta), fmt(p.nu), fmt(p.upper_check), fmt(p.asymptote))
        for p in points
    )
    write_csv(path, NU_CSV_COLUMNS, rows, metadata=metadata)
