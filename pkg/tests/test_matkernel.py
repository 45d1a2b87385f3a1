import numpy as np
import pytest

from lueders import matkernel as mk
from lueders.errors import DimensionMismatch, NotHermitian, NotPositive, NotSquare


def _rand_hermitian(d, seed):
    rng = np.random.Generator(np.random.Philox(seed))
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def test_eigendecompose_identity():
    eig = mk.hermitian_eigendecompose(np.eye(3))
    assert np.abs(eig.eigenvalues - 1.0).max() < 1e-14
    assert np.abs(eig.eigenvectors @ eig.eigenvectors.conj().T - np.eye(3)).max() < 1e-14


def test_eigendecompose_diagonal_orders_ascending():
    eig = mk.hermitian_eigendecompose(np.diag([0.75, 0.25]))
    assert np.abs(eig.eigenvalues - [0.25, 0.75]).max() < 1e-14


@pytest.mark.parametrize("seed", range(25))
def test_eigendecompose_reconstructs(seed):
    h = _rand_hermitian(6, seed)
    eig = mk.hermitian_eigendecompose(h)
    rebuilt = (eig.eigenvectors * eig.eigenvalues) @ eig.eigenvectors.conj().T
    assert np.linalg.norm(rebuilt - h) < 1e-10 * np.linalg.norm(h)
    unitary_defect = eig.eigenvectors.conj().T @ eig.eigenvectors - np.eye(6)
    assert np.abs(unitary_defect).max() < 1e-12


def test_eigendecompose_rejects_nonsquare():
    with pytest.raises(NotSquare):
        mk.hermitian_eigendecompose(np.zeros((2, 3)))


def test_eigendecompose_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        mk.hermitian_eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_operator_norm_examples():
    assert mk.operator_norm(np.zeros((3, 3))) == 0.0
    assert abs(mk.operator_norm(np.diag([0.3, 0.8])) - 0.8) < 1e-14
    assert abs(mk.operator_norm(np.array([[0.0, 1.0], [0.0, 0.0]])) - 1.0) < 1e-14


def test_nullspace_of_singular_diagonal():
    basis = mk.nullspace(np.diag([1.0, 0.0]))
    assert basis.shape == (2, 1)
    proj = basis @ basis.conj().T
    assert np.abs(proj - np.diag([0.0, 1.0])).max() < 1e-12


def test_nullspace_of_invertible_is_empty():
    basis = mk.nullspace(_rand_hermitian(3, 5) + 10 * np.eye(3))
    assert basis.shape == (3, 0)


def test_nullspace_rank_deficient_product():
    # rank 5 by construction, so the kernel has dimension 3
    rng = np.random.Generator(np.random.Philox(42))
    a = rng.standard_normal((8, 5)) @ rng.standard_normal((5, 8))
    basis = mk.nullspace(a)
    assert basis.shape == (8, 3)
    assert np.abs(a @ basis).max() < 1e-8
    gram = basis.conj().T @ basis
    assert np.abs(gram - np.eye(3)).max() < 1e-12


def test_nullspace_of_zero_and_dust_is_everything():
    assert mk.nullspace(np.zeros((4, 4))).shape == (4, 4)
    dust = 1e-15 * _rand_hermitian(4, 9)
    assert mk.nullspace(dust).shape == (4, 4)


def test_sqrt_psd_examples():
    assert np.abs(mk.sqrt_psd(np.eye(2)) - np.eye(2)).max() < 1e-14
    root = mk.sqrt_psd(np.diag([4.0, 0.25]))
    assert np.abs(root - np.diag([2.0, 0.5])).max() < 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_sqrt_psd_squares_back(seed):
    rng = np.random.Generator(np.random.Philox(100 + seed))
    g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    m = g @ g.conj().T
    root = mk.sqrt_psd(m)
    assert np.linalg.norm(root @ root - m) < 1e-10 * np.linalg.norm(m)
    assert mk.hermitian_defect(root) < 1e-12


def test_sqrt_psd_rejects_negative():
    with pytest.raises(NotPositive):
        mk.sqrt_psd(np.diag([1.0, -1.0]))


def test_vec_convention_is_column_stacking():
    rng = np.random.Generator(np.random.Philox(7))
    a, x, b = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(3))
    lhs = mk.vec(a @ x @ b)
    rhs = np.kron(b.T, a) @ mk.vec(x)
    assert np.abs(lhs - rhs).max() < 1e-12
    assert np.abs(mk.unvec(mk.vec(x), 3) - x).max() == 0.0


def test_orthonormalize_drops_dependent_vectors():
    e11 = np.diag([1.0, 0.0]).astype(complex)
    e22 = np.diag([0.0, 1.0]).astype(complex)
    basis = mk.orthonormalize([e11, e22, e11 + e22, 2 * e11])
    assert len(basis) == 2
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            want = 1.0 if i == j else 0.0
            assert abs(mk.hs_inner(a, b) - want) < 1e-12


def test_subspace_projector_and_trace():
    d = 3
    units = [np.zeros((d, d), dtype=complex) for _ in range(d * d)]
    for idx in range(d * d):
        units[idx][idx % d, idx // d] = 1.0
    full = mk.OperatorSubspace(d, tuple(units))
    proj = mk.subspace_projector(full)
    assert np.abs(proj - np.eye(d * d)).max() < 1e-12
    empty = mk.OperatorSubspace(d, ())
    assert np.abs(mk.subspace_projector(empty)).max() == 0.0


def test_subspace_projector_is_idempotent():
    rng = np.random.Generator(np.random.Philox(11))
    cols, _ = np.linalg.qr(rng.standard_normal((9, 4)) + 1j * rng.standard_normal((9, 4)))
    sub = mk.OperatorSubspace.from_vectors(cols, 3)
    p = mk.subspace_projector(sub)
    assert np.abs(p @ p - p).max() < 1e-12
    assert abs(np.trace(p).real - sub.dim) < 1e-8


def test_subspaces_equal_reports_distance():
    e11 = mk.OperatorSubspace(2, (np.diag([1.0, 0.0]).astype(complex),))
    e22 = mk.OperatorSubspace(2, (np.diag([0.0, 1.0]).astype(complex),))
    same = mk.subspaces_equal(e11, e11)
    assert same.equal and same.distance == 0.0
    crossed = mk.subspaces_equal(e11, e22)
    assert not crossed.equal
    assert abs(crossed.distance - np.sqrt(2)) < 1e-12


def test_subspaces_equal_is_basis_independent():
    rng = np.random.Generator(np.random.Philox(13))
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    left = mk.OperatorSubspace(3, tuple(mk.orthonormalize([a, b])))
    mixed = mk.OperatorSubspace(3, tuple(mk.orthonormalize([a + 2 * b, 1j * a - b])))
    cmp = mk.subspaces_equal(left, mixed)
    assert cmp.equal and cmp.distance < 1e-12


def test_subspaces_equal_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mk.subspaces_equal(mk.OperatorSubspace(2, ()), mk.OperatorSubspace(3, ()))
