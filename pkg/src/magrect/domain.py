"""Geometry, gauge, and closed-form reference quantities.

The computational domain is always the open unit square (-1/2, 1/2)^2.
A rectangle with sides a and 1/a enters only through the anisotropic
weights a^-2, a^2 of the quadratic form, never through the mesh, so one
grid serves every aspect ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .oscillator1d import c_constant

__all__ = [
    "FieldGauge",
    "Aspect",
    "aspect_value",
    "vector_potential",
    "analytic_lambda_zero_field",
    "bounds_certified_region",
]


@dataclass(frozen=True)
class FieldGauge:
    """Field strength B and split parameter theta of the linear potential.

    The potential A(x) = (-theta x2, (1 - theta) x1) B has curl identically
    equal to B for every theta; theta = 1/2 is the symmetric default.
    """

    B: float
    theta: float = 0.5

    def __post_init__(self):
        if not (math.isfinite(self.B) and math.isfinite(self.theta)):
            raise ValueError("field strength and gauge parameter must be finite")


@dataclass(frozen=True)
class Aspect:
    """Side-length parameter a > 0 of the unit-area rectangle with sides a, 1/a."""

    a: float

    def __post_init__(self):
        aspect_value(self.a)


def aspect_value(a) -> float:
    """Coerce an Aspect or plain number to a validated positive float."""
    value = a.a if isinstance(a, Aspect) else float(a)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"aspect parameter must be positive and finite, got {value}")
    return value


def vector_potential(gauge: FieldGauge, x):
    """Evaluate the linear vector potential at a point of the closed unit square."""
    x1, x2 = float(x[0]), float(x[1])
    if max(abs(x1), abs(x2)) > 0.5 + 1e-12:
        raise ValueError(f"point ({x1}, {x2}) lies outside the closed unit square")
    return (-gauge.theta * x2 * gauge.B, (1.0 - gauge.theta) * x1 * gauge.B)


def analytic_lambda_zero_field(a) -> float:
    """Exact field-free ground eigenvalue pi^2 (a^-2 + a^2).

    Separation of variables on the rectangle with sides a, 1/a; invariant
    under a -> 1/a and uniquely minimal (value 2 pi^2) at the square.
    """
    value = aspect_value(a)
    return math.pi ** 2 * (value ** -2 + value ** 2)


def bounds_certified_region(a, B) -> bool:
    """True where the closed-form bounds alone force lambda(a, B) >= lambda(1, B).

    The condition is |a - 1| >= sqrt(c / (2 pi^2)) |B| with c from
    `c_constant`; inside it no eigensolve is needed to certify that the
    square does not lose to the rectangle.
    """
    value = aspect_value(a)
    threshold = math.sqrt(c_constant() / (2.0 * math.pi ** 2)) * abs(B)
    return abs(value - 1.0) >= threshold
