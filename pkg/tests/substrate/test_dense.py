import numpy as np
import pytest
from numpy.testing import assert_allclose

from pencil_rpd.exceptions import ShapeMismatchError, SingularMatrixError
from pencil_rpd.pencil import Pencil
from pencil_rpd.substrate.dense import (
    as_cmatrix,
    is_at_infinity,
    matmul,
    ql_full,
    qr_full,
    ref_eig,
    ref_eig_decomposition,
    residual_bound,
    rq_full,
    smallest_sv,
    solve,
    solve_right,
    spectral_norm,
)
from pencil_rpd.substrate.rng import RngStream, complex_gaussian


@pytest.mark.parametrize("shape", [(5, 5), (8, 3)])
def test_qr_full_reconstructs_with_unitary_factor(shape):
    M = complex_gaussian(shape, RngStream(1))
    Q, R = qr_full(M)

    assert Q.shape == (shape[0], shape[0])
    assert_allclose(Q.conj().T @ Q, np.eye(shape[0]), atol=1e-12)
    assert_allclose(Q @ R, M, atol=residual_bound(M))
    assert np.allclose(np.tril(R, -1), 0.0)


@pytest.mark.parametrize("shape", [(6, 6), (8, 3)])
def test_ql_full_is_lower_triangular(shape):
    rows, cols = shape
    M = complex_gaussian(shape, RngStream(2))
    Q, L = ql_full(M)

    assert_allclose(Q @ L, M, atol=residual_bound(M))
    assert_allclose(Q.conj().T @ Q, np.eye(rows), atol=1e-12)
    assert np.all(L[: rows - cols] == 0)
    assert np.all(np.triu(L[rows - cols :], 1) == 0)
    # Q is the index-reversed QR factor of the reversed matrix
    assert_allclose(Q, qr_full(M[::-1, ::-1])[0][::-1, ::-1])


def test_rq_full_puts_the_unitary_on_the_right():
    M = complex_gaussian((6, 6), RngStream(3))
    R, Q = rq_full(M)

    assert_allclose(R @ Q, M, atol=1e-12)
    assert np.all(np.tril(R, -1) == 0)
    assert_allclose(Q @ Q.conj().T, np.eye(6), atol=1e-12)


def test_rank_deficient_input_is_accepted():
    v = complex_gaussian((5, 1), RngStream(4))
    M = v @ v.conj().T
    Q, R = qr_full(M)
    assert_allclose(Q @ R, M, atol=1e-12)
    assert np.sum(np.abs(np.diagonal(R)) > 1e-10) == 1


def test_solve_and_solve_right():
    M = np.eye(4) + 0.3 * complex_gaussian((4, 4), RngStream(5))
    rhs = complex_gaussian((4, 2), RngStream(6))

    assert_allclose(M @ solve(M, rhs), rhs, atol=1e-12)
    X = solve_right(rhs.T, M)
    assert_allclose(X @ M, rhs.T, atol=1e-12)


def test_solve_refuses_singular_matrix():
    M = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError, match="singular"):
        solve(M, np.eye(2))


def test_solve_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        solve(np.eye(3), np.ones((4, 1)))


def test_as_cmatrix_rejects_non_finite():
    with pytest.raises(ValueError, match="non-finite"):
        as_cmatrix([[1.0, np.nan], [0.0, 1.0]])


def test_norms_of_diagonal_matrix():
    M = np.diag([3.0, -0.5, 1.0])
    assert spectral_norm(M) == pytest.approx(3.0)
    assert smallest_sv(M) == pytest.approx(0.5)


def test_ref_eig_with_nonsingular_b(similar_pencil):
    values = np.sort_complex(ref_eig(similar_pencil))
    expected = np.sort_complex(np.array([-1.3 + 0.1j, -0.6 - 0.35j, 0.4 + 0.6j, 1.2 - 0.15j]))
    assert_allclose(values, expected, atol=1e-10)


def test_ref_eig_maps_singular_b_to_infinity():
    P = Pencil(np.diag([2.0, 3.0, 1.0]), np.diag([1.0, 1.0, 0.0]))
    values = ref_eig(P)

    assert np.count_nonzero(is_at_infinity(values)) == 1
    finite = np.sort(values[~is_at_infinity(values)].real)
    assert_allclose(finite, [2.0, 3.0], atol=1e-12)


def test_ref_eig_falls_back_to_qz_when_both_are_singular(caplog):
    A = np.diag([1.0, 0.0, 2.0])
    B = np.diag([1.0, 1.0, 0.0])
    values = ref_eig(Pencil(A, B))

    assert "falling back to QZ" in caplog.text
    assert np.count_nonzero(is_at_infinity(values)) == 1


def test_ref_eig_decomposition_returns_unit_eigenvectors(similar_pencil):
    alpha, beta, vectors = ref_eig_decomposition(similar_pencil.A, similar_pencil.B)

    assert_allclose(np.linalg.norm(vectors, axis=0), 1.0)
    lhs = similar_pencil.A @ vectors * beta[None, :]
    rhs = similar_pencil.B @ vectors * alpha[None, :]
    assert_allclose(lhs, rhs, atol=1e-10)


def test_matmul_checks_conformity():
    X = complex_gaussian((3, 4), RngStream(5))
    Y = complex_gaussian((4, 2), RngStream(6))

    assert_allclose(matmul(X, Y), X @ Y)
    with pytest.raises(ShapeMismatchError):
        matmul(Y, X)


def test_residual_bound_accepts_a_known_norm():
    M = complex_gaussian((5, 5), RngStream(7))
    assert residual_bound(M, norm=spectral_norm(M)) == pytest.approx(residual_bound(M))
