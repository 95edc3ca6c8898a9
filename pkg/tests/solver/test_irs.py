import numpy as np
import pytest
from numpy.testing import assert_allclose

from pencil_rpd.exceptions import ShapeMismatchError
from pencil_rpd.grid import Orientation
from pencil_rpd.pencil import Pencil
from pencil_rpd.solver.irs import (
    irs,
    left_projector_approx,
    mobius_left,
    mobius_right,
    right_projector_approx,
)
from pencil_rpd.substrate.dense import ref_eig
from pencil_rpd.substrate.rng import RngStream, ginibre


def _well_conditioned(n, stream):
    A = np.eye(n) + 0.25 * ginibre(n, stream.child("A"))
    B = np.eye(n) + 0.25 * ginibre(n, stream.child("B"))
    return A, B


def test_irs_matches_explicit_powers():
    root = RngStream(21)
    for trial in range(100):
        stream = root.child(f"trial-{trial}")
        n = 1 + trial % 8
        p = trial % 4
        A, B = _well_conditioned(n, stream)
        out = irs(A, B, p)

        expected = np.linalg.matrix_power(np.linalg.solve(A, B), 2**p)
        got = np.linalg.solve(out.Ap, out.Bp)
        rel = np.linalg.norm(got - expected, 2) / np.linalg.norm(expected, 2)
        assert rel <= 1e-8, f"trial {trial}: n={n}, p={p}, relative error {rel:.2e}"


def test_irs_with_zero_steps_is_identity():
    A, B = _well_conditioned(3, RngStream(1))
    out = irs(A, B, 0)
    assert out.steps == 0
    assert_allclose(out.Ap, A)
    assert_allclose(out.Bp, B)


def test_irs_rejects_bad_input():
    with pytest.raises(ShapeMismatchError):
        irs(np.eye(2), np.eye(3), 1)
    with pytest.raises(ValueError):
        irs(np.eye(2), np.eye(2), -1)


def test_right_projector_selects_outside_eigenvalues():
    A = np.diag([3.0, 0.2, 2.5, 0.5])
    out = irs(A, np.eye(4), 7)
    assert_allclose(right_projector_approx(out), np.diag([1.0, 0.0, 1.0, 0.0]), atol=1e-10)


def test_left_projector_of_a_similar_pencil():
    rng = RngStream(22)
    X = np.eye(4) + 0.3 * ginibre(4, rng.child("X"))
    Y = np.eye(4) + 0.3 * ginibre(4, rng.child("Y"))
    Yinv = np.linalg.inv(Y)
    lam = np.array([3.0, 0.2, 2.5j, 0.5])
    P = Pencil(X @ np.diag(lam) @ Yinv, X @ Yinv)

    out = irs(P.A.conj().T, P.B.conj().T, 8)
    left = left_projector_approx(out)
    # projector onto span X[:, outside] along span X[:, inside]
    expected = X @ np.diag([1.0, 0.0, 1.0, 0.0]) @ np.linalg.inv(X)
    assert_allclose(left, expected, atol=1e-8)


@pytest.mark.parametrize(
    "orientation, beyond, before",
    [
        (Orientation.VERTICAL, 0.7 + 0.3j, 0.1 - 0.4j),
        (Orientation.HORIZONTAL, -0.2 + 0.9j, 0.5 + 0.1j),
    ],
)
def test_mobius_maps_the_far_side_outside(orientation, beyond, before):
    h = 0.4
    P = Pencil(np.diag([beyond, before]), np.eye(2))

    right = np.abs(ref_eig(mobius_right(P, h, orientation)))
    left = np.abs(ref_eig(mobius_left(P, h, orientation)))
    assert right[0] > 1 > right[1]
    assert left[0] < 1 < left[1]
