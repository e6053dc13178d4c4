import numpy as np
import pytest
import scipy.sparse as sp

from magrect.domain import FieldGauge
from magrect.eigensolve import smallest_eigenpair
from magrect.lattice import (
    GridSpec,
    assemble_hamiltonian,
    covariant_norms,
    directional_stiffness,
    discrete_gauge_transform,
    dump_matrix,
)

PI2 = np.pi ** 2


def reference_laplacian(grid):
    """Plain real 5-point Dirichlet Laplacian, site order i fastest."""
    def tridiag(n, h):
        main = np.full(n, 2.0 / h ** 2)
        off = np.full(n - 1, -1.0 / h ** 2)
        return sp.diags([off, main, off], [-1, 0, 1])

    T1 = tridiag(grid.n1, grid.h1)
    T2 = tridiag(grid.n2, grid.h2)
    return (sp.kron(sp.identity(grid.n2), T1)
            + sp.kron(T2, sp.identity(grid.n1))).tocsr()


def test_gridspec_basics():
    g = GridSpec(7, 15)
    assert g.h1 == 1.0 / 8 and g.h2 == 1.0 / 16
    assert g.dim == 105
    assert g.cell == g.h1 * g.h2
    assert g.refine() == GridSpec(15, 31)
    # coarse spacing is exactly twice the fine spacing
    assert g.h1 == 2 * g.refine().h1
    X1, X2 = g.coordinates()
    # site p = j * n1 + i with i fastest
    assert X1[0] == pytest.approx(-0.5 + g.h1)
    assert X1[1] == pytest.approx(-0.5 + 2 * g.h1)
    assert X2[0] == X2[g.n1 - 1]
    assert X2[g.n1] == pytest.approx(-0.5 + 2 * g.h2)
    with pytest.raises(ValueError):
        GridSpec(2, 63)


def test_zero_field_matrix_is_real_laplacian():
    grid = GridSpec(9, 5)
    H = assemble_hamiltonian(grid, FieldGauge(0.0, 0.5), 1.0)
    assert np.max(np.abs(H.imag.toarray())) == 0.0
    diff = (H - reference_laplacian(grid)).toarray()
    assert np.max(np.abs(diff)) == 0.0


def test_zero_field_smallest_eigenvalue_closed_form():
    n = 63
    grid = GridSpec(n, n)
    h = grid.h1
    H = assemble_hamiltonian(grid, FieldGauge(0.0, 0.5), 1.0)
    pair = smallest_eigenpair(H, tol=1e-9, cell_area=grid.cell)
    exact = 2 * (2.0 / h ** 2) * (1.0 - np.cos(np.pi * h))
    assert pair.eigenvalue == pytest.approx(exact, rel=1e-11)


def test_zero_field_aspect_two_extrapolates_to_analytic():
    from magrect.analysis import lambda1

    value = lambda1(2.0, 0.0, grid=GridSpec(63, 63))
    assert value == pytest.approx(PI2 * 4.25, rel=1e-3)


def test_hermitian_exactly():
    grid = GridSpec(21, 17)
    H = assemble_hamiltonian(grid, FieldGauge(7.3, 0.3), 1.7)
    delta = (H - H.getH()).toarray()
    assert np.max(np.abs(delta)) == 0.0


def test_stencil_structure():
    grid = GridSpec(11, 11)
    H = assemble_hamiltonian(grid, FieldGauge(4.0, 0.5), 1.25)
    nnz_per_row = np.diff(H.tocsr().indptr)
    assert nnz_per_row.max() <= 5
    w1, w2 = 1.25 ** -2, 1.25 ** 2
    expected_diag = 2 * w1 / grid.h1 ** 2 + 2 * w2 / grid.h2 ** 2
    assert np.allclose(H.diagonal(), expected_diag, rtol=1e-14, atol=0)


def test_positive_definite_a_posteriori():
    grid = GridSpec(15, 15)
    H = assemble_hamiltonian(grid, FieldGauge(10.0, 0.5), 0.7)
    pair = smallest_eigenpair(H, cell_area=grid.cell)
    assert pair.eigenvalue > 0


@pytest.mark.parametrize("B", [1.0, 5.0, 20.0])
def test_discrete_diamagnetic_property(B):
    grid = GridSpec(31, 31)
    zero = smallest_eigenpair(
        assemble_hamiltonian(grid, FieldGauge(0.0, 0.5), 1.0),
        cell_area=grid.cell).eigenvalue
    withB = smallest_eigenpair(
        assemble_hamiltonian(grid, FieldGauge(B, 0.5), 1.0),
        cell_area=grid.cell).eigenvalue
    assert withB >= zero - 1e-9


def test_dense_oracle_regression_B5():
    """Sparse path against full dense eigendecomposition, value frozen."""
    from oracles import dense_smallest

    grid = GridSpec(63, 63)
    H = assemble_hamiltonian(grid, FieldGauge(5.0, 0.5), 1.0)
    dense = dense_smallest(H, k=1)[0]
    assert dense == pytest.approx(20.132525974121755, abs=1e-8)
    pair = smallest_eigenpair(H, tol=1e-9, cell_area=grid.cell)
    assert pair.eigenvalue == pytest.approx(dense, abs=1e-9)


def test_extrapolated_regression_baseline_B5():
    from magrect.analysis import lambda1

    value = lambda1(1.0, 5.0, grid=GridSpec(63, 63))
    assert value == pytest.approx(20.1369006364615, abs=1e-9)


def test_gauge_transform_identity():
    grid = GridSpec(9, 9)
    H = assemble_hamiltonian(grid, FieldGauge(3.0, 0.5), 1.0)
    out = discrete_gauge_transform(grid, np.zeros(grid.dim), H)
    assert np.max(np.abs((out - H).toarray())) == 0.0


def test_gauge_transform_random_field_preserves_spectrum():
    grid = GridSpec(31, 31)
    H = assemble_hamiltonian(grid, FieldGauge(3.0, 0.5), 1.0)
    rng = np.random.default_rng(11)
    phi = rng.uniform(-np.pi, np.pi, grid.dim)
    Ht = discrete_gauge_transform(grid, phi, H)
    lam = smallest_eigenpair(H, cell_area=grid.cell).eigenvalue
    lam_t = smallest_eigenpair(Ht, cell_area=grid.cell).eigenvalue
    assert abs(lam - lam_t) / lam <= 1e-12


def test_gauge_transform_converts_between_linear_gauges():
    """phi = B x1 x2 / 2 maps the theta=0 assembly onto theta=1/2."""
    B = 5.0
    grid = GridSpec(63, 63)
    H0 = assemble_hamiltonian(grid, FieldGauge(B, 0.0), 1.0)
    Hhalf = assemble_hamiltonian(grid, FieldGauge(B, 0.5), 1.0)
    X1, X2 = grid.coordinates()
    Ht = discrete_gauge_transform(grid, 0.5 * B * X1 * X2, H0)
    scale = np.max(np.abs(Hhalf.data))
    assert np.max(np.abs((Ht - Hhalf).toarray())) <= 1e-13 * scale
    lam0 = smallest_eigenpair(H0, cell_area=grid.cell).eigenvalue
    lam_half = smallest_eigenpair(Hhalf, cell_area=grid.cell).eigenvalue
    assert abs(lam0 - lam_half) / lam_half <= 1e-12


def test_aspect_swap_matches_axis_relabeling():
    grid = GridSpec(31, 31)
    gauge = FieldGauge(3.0, 0.5)
    la = smallest_eigenpair(assemble_hamiltonian(grid, gauge, 1.4),
                            cell_area=grid.cell).eigenvalue
    lb = smallest_eigenpair(assemble_hamiltonian(grid, gauge, 1 / 1.4),
                            cell_area=grid.cell).eigenvalue
    assert la == pytest.approx(lb, rel=1e-10)


def test_covariant_norms_sum_to_form_value():
    grid = GridSpec(15, 15)
    gauge = FieldGauge(2.0, 0.5)
    K1, K2 = directional_stiffness(grid, gauge)
    H = assemble_hamiltonian(grid, gauge, 1.0)
    pair = smallest_eigenpair(H, cell_area=grid.cell)
    d1, d2 = covariant_norms(K1, K2, pair.vector, grid.cell)
    assert d1 ** 2 + d2 ** 2 == pytest.approx(pair.eigenvalue, rel=1e-10)


def test_matrix_dump_roundtrip(tmp_path):
    grid = GridSpec(3, 3)
    H = assemble_hamiltonian(grid, FieldGauge(2.0, 0.5), 1.3)
    path = tmp_path / "matrix.txt"
    dump_matrix(H, path)
    rows, cols, res, ims = [], [], [], []
    for line in path.read_text().splitlines():
        r, c, re_, im_ = line.split()
        rows.append(int(r)); cols.append(int(c))
        res.append(float(re_)); ims.append(float(im_))
    rebuilt = sp.coo_matrix(
        (np.array(res) + 1j * np.array(ims), (rows, cols)),
        shape=H.shape).tocsr()
    assert np.max(np.abs((rebuilt - H).toarray())) == 0.0
    # entries are sorted by (row, col)
    assert sorted(zip(rows, cols)) == list(zip(rows, cols))
