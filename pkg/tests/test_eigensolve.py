import numpy as np
import pytest
import scipy.sparse as sp

from magrect.domain import FieldGauge
from magrect.eigensolve import (
    DeflationError,
    NonConvergenceError,
    richardson_extrapolate,
    smallest_eigenpair,
    smallest_eigenpairs,
    solve_deflated,
)
from magrect.lattice import (
    GridSpec,
    assemble_hamiltonian,
    directional_stiffness,
    discrete_gauge_transform,
    hamiltonian_from_parts,
)
from magrect.oscillator1d import nu

PI2 = np.pi ** 2


@pytest.fixture(scope="module")
def square_grid():
    return GridSpec(31, 31)


def test_laplacian_eigenvalue_closed_form():
    grid = GridSpec(63, 63)
    H = assemble_hamiltonian(grid, FieldGauge(0.0, 0.5), 1.0)
    pair = smallest_eigenpair(H, tol=1e-9, cell_area=grid.cell)
    h = grid.h1
    assert pair.eigenvalue == pytest.approx(
        (4.0 / h ** 2) * (1.0 - np.cos(np.pi * h)), rel=1e-11)
    assert pair.residual <= 1e-9
    # unit norm in the scaled inner product
    assert grid.cell * np.vdot(pair.vector, pair.vector).real == pytest.approx(
        1.0, abs=1e-12)
    # phase convention: largest component real positive
    k = np.argmax(np.abs(pair.vector))
    assert pair.vector[k].imag == pytest.approx(0.0, abs=1e-14)
    assert pair.vector[k].real > 0


def test_extrapolated_anisotropic_laplacian():
    from magrect.analysis import lambda1

    value = lambda1(2.0, 0.0, grid=GridSpec(63, 63))
    assert value == pytest.approx(PI2 * 4.25, rel=1e-3)


def test_strong_field_sandwich_and_baseline():
    """lambda(1, 10) must sit between the closed-form bounds."""
    from magrect.analysis import lambda1

    value = lambda1(1.0, 10.0, grid=GridSpec(63, 63))
    assert value >= max(2 * PI2, 10.0)
    assert value <= 2 * nu(5.0).nu
    assert value == pytest.approx(21.315551419447594, abs=1e-8)


def test_eigenvalue_below_any_rayleigh_quotient(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(4.0, 0.5), 1.2)
    pair = smallest_eigenpair(H, cell_area=square_grid.cell)
    rng = np.random.default_rng(3)
    for _ in range(10):
        v = rng.standard_normal(square_grid.dim) + 1j * rng.standard_normal(
            square_grid.dim)
        rq = np.vdot(v, H @ v).real / np.vdot(v, v).real
        assert pair.eigenvalue <= rq + 1e-12


def test_eigenvalue_invariant_under_gauge_transform(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(6.0, 0.5), 1.0)
    rng = np.random.default_rng(5)
    phi = rng.uniform(0, 2 * np.pi, square_grid.dim)
    Ht = discrete_gauge_transform(square_grid, phi, H)
    a = smallest_eigenpair(H, cell_area=square_grid.cell).eigenvalue
    b = smallest_eigenpair(Ht, cell_area=square_grid.cell).eigenvalue
    assert abs(a - b) / a <= 1e-12


def test_zero_field_vector_is_real_after_phase_fix(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(0.0, 0.5), 1.0)
    pair = smallest_eigenpair(H, cell_area=square_grid.cell)
    assert np.max(np.abs(pair.vector.imag)) <= 1e-8


def test_two_pairs_ordered_with_gap(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(2.0, 0.5), 1.0)
    ground, second = smallest_eigenpairs(H, k=2, cell_area=square_grid.cell)
    assert second.eigenvalue > ground.eigenvalue
    assert ground.residual <= 1e-9 and second.residual <= 1e-9


def test_nonconvergence_reports_best_residual(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(1.0, 0.5), 1.0)
    with pytest.raises(NonConvergenceError) as info:
        smallest_eigenpair(H, tol=1e-30, cell_area=square_grid.cell)
    assert info.value.best_residual is not None
    assert info.value.best_residual > 1e-30


def test_input_validation():
    bad = sp.csr_matrix(np.array([[np.nan, 0], [0, 1.0]], dtype=complex))
    with pytest.raises(ValueError):
        smallest_eigenpair(bad)
    H = assemble_hamiltonian(GridSpec(5, 5), FieldGauge(0.0), 1.0)
    with pytest.raises(ValueError):
        smallest_eigenpair(H, tol=0.0)
    with pytest.raises(ValueError):
        smallest_eigenpairs(H, k=0)


def test_deflated_solve_trivial_right_sides(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(1.5, 0.5), 1.0)
    pair = smallest_eigenpair(H, cell_area=square_grid.cell)
    zero = solve_deflated(H, pair.eigenvalue, np.zeros(square_grid.dim),
                          pair.vector, tol=1e-10)
    assert np.linalg.norm(zero) == 0.0
    # rhs parallel to the kernel direction is annihilated by the projection
    same = solve_deflated(H, pair.eigenvalue, pair.vector, pair.vector,
                          tol=1e-10)
    assert np.linalg.norm(same) <= 1e-12 * np.linalg.norm(pair.vector)


def test_deflated_solve_orthogonality_and_residual(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(3.0, 0.5), 1.0)
    pair = smallest_eigenpair(H, cell_area=square_grid.cell)
    rng = np.random.default_rng(17)
    rhs = rng.standard_normal(square_grid.dim) + 1j * rng.standard_normal(
        square_grid.dim)
    w = solve_deflated(H, pair.eigenvalue, rhs, pair.vector, tol=1e-10)
    uhat = pair.vector / np.linalg.norm(pair.vector)
    assert abs(np.vdot(uhat, w)) <= 1e-10
    proj_res = (H @ w - pair.eigenvalue * w) - (rhs - uhat * np.vdot(uhat, rhs))
    proj_res -= uhat * np.vdot(uhat, proj_res)
    assert np.linalg.norm(proj_res) <= 1e-9


def test_deflated_solve_symmetric_ground_state_gives_zero(square_grid):
    """At B = 0 the directional forms act identically on the product state."""
    gauge = FieldGauge(0.0, 0.5)
    K1, K2 = directional_stiffness(square_grid, gauge)
    H = hamiltonian_from_parts(K1, K2, 1.0)
    pair = smallest_eigenpair(H, cell_area=square_grid.cell)
    rhs = 2.0 * (K1 @ pair.vector - K2 @ pair.vector)
    w = solve_deflated(H, pair.eigenvalue, rhs, pair.vector, tol=1e-10)
    assert np.sqrt(square_grid.cell) * np.linalg.norm(w) <= 1e-8


def test_deflated_solve_dimension_mismatch(square_grid):
    H = assemble_hamiltonian(square_grid, FieldGauge(1.0), 1.0)
    with pytest.raises(ValueError):
        solve_deflated(H, 20.0, np.zeros(3), np.ones(square_grid.dim), 1e-8)


def test_richardson_extrapolation():
    assert richardson_extrapolate(5.0, 5.0, 2.0, 2) == 5.0
    assert richardson_extrapolate(19.70, 19.73, 2.0, 2) == pytest.approx(19.74)
    with pytest.raises(ValueError):
        richardson_extrapolate(1.0, 1.0, 1.0, 2)
    with pytest.raises(ValueError):
        richardson_extrapolate(1.0, 1.0, 2.0, 0)


def test_richardson_removes_leading_error():
    from magrect.analysis import lambda1

    value = lambda1(1.0, 0.0, grid=GridSpec(63, 63))
    assert value == pytest.approx(2 * PI2, rel=1e-5)
