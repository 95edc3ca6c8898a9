import numpy as np
import pytest
import scipy.linalg as la

from pencil_rpd.exceptions import InvalidKError
from pencil_rpd.pencil import Pencil
from pencil_rpd.solver.deflate import deflate
from pencil_rpd.substrate.rng import RngStream, ginibre


def _separated_pencil(stream, n=12):
    """Pencil with half its spectrum at |λ| ≥ 2 and half at |λ| ≤ 1/2, plus X and Y"""
    gen = stream.child("spectrum").generator()
    k = n // 2
    outside = gen.uniform(2.0, 4.0, k) * np.exp(2j * np.pi * gen.uniform(size=k))
    inside = gen.uniform(0.0, 0.5, n - k) * np.exp(2j * np.pi * gen.uniform(size=n - k))
    lam = np.concatenate([outside, inside])
    X = np.eye(n) + 0.3 * ginibre(n, stream.child("X"))
    Y = np.eye(n) + 0.3 * ginibre(n, stream.child("Y"))
    Yinv = np.linalg.inv(Y)
    return Pencil(X @ np.diag(lam) @ Yinv, X @ Yinv), X, Y, k


def test_deflate_recovers_both_deflating_subspaces():
    root = RngStream(41)
    accurate = 0
    for trial in range(100):
        stream = root.child(f"trial-{trial}")
        P, X, Y, k = _separated_pencil(stream)
        pair = deflate(P, 8, k, stream.child("deflate"))

        right_angle = np.max(la.subspace_angles(pair.UR, Y[:, :k]))
        left_angle = np.max(la.subspace_angles(pair.UL, X[:, :k]))
        if max(right_angle, left_angle) <= 1e-6:
            accurate += 1
    assert accurate >= 95


def test_deflate_returns_orthonormal_bases():
    P, _, _, k = _separated_pencil(RngStream(42))
    pair = deflate(P, 8, k, RngStream(42).child("deflate"))

    assert pair.k == k
    assert pair.UR.shape == (12, k)
    np.testing.assert_allclose(pair.UR.conj().T @ pair.UR, np.eye(k), atol=1e-12)
    np.testing.assert_allclose(pair.UL.conj().T @ pair.UL, np.eye(k), atol=1e-12)


def test_compression_keeps_the_outside_eigenvalues():
    P, X, Y, k = _separated_pencil(RngStream(43))
    pair = deflate(P, 8, k, RngStream(43).child("deflate"))

    A = pair.UL.conj().T @ P.A @ pair.UR
    B = pair.UL.conj().T @ P.B @ pair.UR
    got = np.sort_complex(la.eigvals(A, B))
    expected = np.sort_complex(la.eigvals(P.A, P.B)[np.abs(la.eigvals(P.A, P.B)) > 1])
    np.testing.assert_allclose(got, expected, atol=1e-8)


def test_right_only_variant_reuses_the_right_basis():
    P, _, _, k = _separated_pencil(RngStream(44))
    pair = deflate(P, 8, k, RngStream(44), left=False)
    assert pair.UL is pair.UR


@pytest.mark.parametrize("k", [0, 13])
def test_invalid_k(k):
    P, _, _, _ = _separated_pencil(RngStream(45))
    with pytest.raises(InvalidKError):
        deflate(P, 4, k, RngStream(45))
