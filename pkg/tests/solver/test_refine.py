import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from pencil_rpd.pencil import Pencil
from pencil_rpd.solver.refine import homogeneous_rayleigh, refine_column, refine_eigenpairs
from pencil_rpd.substrate.rng import RngStream, complex_gaussian


@pytest.fixture
def exact_pairs(similar_pencil):
    values, vectors = np.linalg.eig(np.linalg.solve(similar_pencil.B, similar_pencil.A))
    return values, vectors / np.linalg.norm(vectors, axis=0)


def test_homogeneous_rayleigh_of_an_eigenvector(diag_pencil):
    x = np.zeros(4, dtype=np.complex128)
    x[2] = 1.0
    residual, alpha, beta = homogeneous_rayleigh(diag_pencil.A, diag_pencil.B, x)

    assert residual == pytest.approx(0.0, abs=1e-15)
    assert alpha / beta == pytest.approx(diag_pencil.A[2, 2])
    assert abs(alpha) ** 2 + abs(beta) ** 2 == pytest.approx(1.0)


def test_homogeneous_rayleigh_at_infinity():
    P = Pencil(np.diag([1.0, 2.0]), np.diag([1.0, 0.0]))
    residual, alpha, beta = homogeneous_rayleigh(P.A, P.B, np.array([0.0, 1.0 + 0j]))

    assert residual == pytest.approx(0.0, abs=1e-15)
    assert abs(beta) < 1e-15
    assert abs(alpha) == pytest.approx(1.0)


def test_refine_column_restores_an_eigenvector(similar_pencil, exact_pairs):
    values, vectors = exact_pairs
    noise = 1e-7 * complex_gaussian(4, RngStream(71))
    t = 3.0 * (vectors[:, 1] + noise)

    x, alpha, beta, before, after = refine_column(similar_pencil, t)

    assert before > 1e-9
    assert after < 1e-13
    assert np.linalg.norm(x) == pytest.approx(np.linalg.norm(t))
    # the phase of t is kept
    assert abs(np.vdot(x, t) / np.vdot(t, t) - 1.0) < 1e-6
    assert alpha / beta == pytest.approx(values[1], abs=1e-12)


def test_refine_column_keeps_a_zero_column(similar_pencil):
    t = np.zeros(4, dtype=np.complex128)
    x, _, _, before, after = refine_column(similar_pencil, t)
    assert_array_equal(x, t)
    assert before == after == 0.0


def test_refine_eigenpairs_polishes_every_column(similar_pencil, exact_pairs):
    values, vectors = exact_pairs
    noise = 1e-8 * complex_gaussian((4, 4), RngStream(72))
    T, d1, d2, report = refine_eigenpairs(
        similar_pencil, vectors + noise, 2.0 * (values + 1e-8), 2.0 * np.ones(4)
    )

    assert report.columns == report.refined == 4
    assert report.max_residual_after < 1e-13 < report.max_residual_before
    assert_allclose(d1 / d2, values, atol=1e-12)
    # the pair keeps its scale
    assert_allclose(np.hypot(np.abs(d1), np.abs(d2)), np.hypot(2 * np.abs(values + 1e-8), 2.0))
    lhs = similar_pencil.A @ T @ np.diag(d2)
    rhs = similar_pencil.B @ T @ np.diag(d1)
    assert np.linalg.norm(lhs - rhs, 2) < 1e-12


def test_refine_eigenpairs_honours_the_skip_mask(similar_pencil, exact_pairs):
    values, vectors = exact_pairs
    T0 = vectors + 1e-8 * complex_gaussian((4, 4), RngStream(73))
    skip = np.array([True, False, True, False])
    T, d1, d2, report = refine_eigenpairs(similar_pencil, T0, values, np.ones(4), skip=skip)

    assert report.refined == 2
    assert_array_equal(T[:, skip], T0[:, skip])
    assert_array_equal(d1[skip], values[skip])
