"""Test pencils of the numerical experiments, all normalized so max(‖A‖₂, ‖B‖₂) = 1."""

import logging

import numpy as np
import scipy.linalg as la

from ..exceptions import RecipeError, SingularMatrixError
from ..pencil import Pencil
from ..solver.rpd_metrics import EigenOrder
from ..substrate.dense import solve_right
from ..substrate.matrix_market import read_matrix
from ..substrate.rng import RngStream, complex_gaussian
from .models.records import ExperimentConfig

MAX_RESAMPLES = 5

# Integer 4x4 singular pencil whose only eigenvalue is 1
SINGULAR_PENCIL_A = np.array(
    [[2, -1, -5, -1], [6, -2, -11, -2], [5, 0, -2, 0], [3, 1, 3, 1]], dtype=np.complex128
)
SINGULAR_PENCIL_B = np.array(
    [[1, -1, -4, -2], [2, -3, -12, -6], [-1, -3, -11, -6], [-2, -2, -7, -4]],
    dtype=np.complex128,
)


def planted_eigenvalues(n: int) -> np.ndarray:
    """n equispaced real eigenvalues in [−2, 2]"""
    if n < 2:
        raise ValueError(f"planted spectrum needs n >= 2, got {n}")
    return -2.0 + 4.0 * np.arange(n) / (n - 1)


def make_planted(n: int, rng: RngStream) -> Pencil:
    """A = XΛY⁻¹, B = XY⁻¹ for independent complex Gaussian X, Y, then normalized"""
    lam = planted_eigenvalues(n)
    stream = rng
    for attempt in range(MAX_RESAMPLES):
        X = complex_gaussian((n, n), stream.child("X"))
        Y = complex_gaussian((n, n), stream.child("Y"))
        try:
            A = solve_right(X * lam[None, :], Y)
            B = solve_right(X, Y)
        except SingularMatrixError:
            logging.warning(f"planted recipe: singular Y on attempt {attempt + 1}, resampling")
            stream = rng.child(f"resample-{attempt + 1}")
            continue
        return Pencil(A, B, name="planted").normalized()[0]
    raise RecipeError(f"could not draw a nonsingular Y in {MAX_RESAMPLES} attempts")


def make_jordan(n: int) -> Pencil:
    """A single nilpotent Jordan block against B = I"""
    if n < 2:
        raise ValueError(f"Jordan recipe needs n >= 2, got {n}")
    A = np.eye(n, k=1, dtype=np.complex128)
    return Pencil(A, np.eye(n, dtype=np.complex128), name="jordan").normalized()[0]


def make_singular_b(n: int, rng: RngStream) -> Pencil:
    """Gaussian A and B with B's smallest singular triplet removed"""
    if n < 2:
        raise ValueError(f"singular-B recipe needs n >= 2, got {n}")
    A = complex_gaussian((n, n), rng.child("A"))
    B = complex_gaussian((n, n), rng.child("B"))
    U, s, Vh = la.svd(B)
    B = B - s[-1] * np.outer(U[:, -1], Vh[-1, :])
    return Pencil(A, B, name="singular_b").normalized()[0]


def make_singular_pencil() -> Pencil:
    return Pencil(SINGULAR_PENCIL_A, SINGULAR_PENCIL_B, name="singular_pencil").normalized()[0]


def make_custom(a_path, b_path) -> Pencil:
    A = read_matrix(a_path)
    B = read_matrix(b_path)
    return Pencil(A, B, name="custom").normalized()[0]


def build_pencil(cfg: ExperimentConfig, rng: RngStream) -> Pencil:
    if cfg.name == "planted":
        return make_planted(cfg.n, rng)
    if cfg.name == "jordan":
        return make_jordan(cfg.n)
    if cfg.name == "singular_b":
        return make_singular_b(cfg.n, rng)
    if cfg.name == "singular_pencil":
        return make_singular_pencil()
    return make_custom(cfg.a_path, cfg.b_path)


def eigen_order(name: str) -> EigenOrder:
    """Pairing for eigen_error; the planted spectrum is symmetric about the origin"""
    return EigenOrder.REAL if name == "planted" else EigenOrder.MAGNITUDE
