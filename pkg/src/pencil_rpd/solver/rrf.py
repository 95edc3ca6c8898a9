"""Randomized rank-revealing factorizations: RURV, RULV and the two-factor GRURV."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import ShapeMismatchError
from ..substrate.dense import as_cmatrix, ql_full, qr_full, rq_full
from ..substrate.rng import RngStream, haar_unitary


@dataclass(frozen=True)
class RurvResult:
    """A = U·R·V with V Haar; R is lower triangular for the RULV variant"""

    U: np.ndarray
    R: np.ndarray
    V: np.ndarray


@dataclass(frozen=True)
class GrurvResult:
    """A1^m1 · A2^m2 = U · R1^m1 · R2^m2 · V with R1, R2 upper triangular"""

    U: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    V: np.ndarray


def _square(A, name: str) -> np.ndarray:
    A = as_cmatrix(A, name)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got shape {A.shape}")
    return A


def rurv(A, rng: RngStream) -> RurvResult:
    A = _square(A, "A")
    V = haar_unitary(A.shape[0], rng)
    U, R = qr_full(A @ V.conj().T)
    return RurvResult(U, R, V)


def rulv(A, rng: RngStream) -> RurvResult:
    A = _square(A, "A")
    V = haar_unitary(A.shape[0], rng)
    U, L = ql_full(A @ V.conj().T)
    return RurvResult(U, L, V)


def grurv2(A1, A2, m1: int, m2: int, rng: RngStream) -> GrurvResult:
    """Rank-revealing factorization of A1^m1·A2^m2 for exponents ±1, no inverses formed.

    The randomized factorization is applied to A2 (or A2ᴴ for m2 = −1) and the
    resulting U is pushed through A1 by a QR (m1 = +1) or RQ (m1 = −1)
    factorization.
    """
    A1 = _square(A1, "A1")
    A2 = _square(A2, "A2")
    if A1.shape != A2.shape:
        raise ShapeMismatchError(f"grurv2 needs equal sizes, got {A1.shape} and {A2.shape}")
    if m1 not in (1, -1) or m2 not in (1, -1):
        raise ValueError(f"exponents must be +1 or -1, got ({m1}, {m2})")

    if m2 == 1:
        first = rurv(A2, rng)
        U, R2, V = first.U, first.R, first.V
    else:
        first = rulv(A2.conj().T, rng)
        U, R2, V = first.U, first.R.conj().T, first.V

    if m1 == 1:
        U, R1 = qr_full(A1 @ U)
    else:
        R1, Q = rq_full(U.conj().T @ A1)
        U = Q.conj().T
    return GrurvResult(U, R1, R2, V)


def diagonal_ratios(R1, R2) -> np.ndarray:
    """|R2(i,i)/R1(i,i)| with a zero denominator reported as +inf"""
    d1 = np.abs(np.diagonal(R1))
    d2 = np.abs(np.diagonal(R2))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = d2 / d1
    ratios[d1 == 0] = np.inf
    return ratios


def rank_count(R1, R2, threshold: float) -> int:
    """Number of diagonal ratios |R2(i,i)/R1(i,i)| at or above threshold"""
    if not threshold > 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    if np.shape(R1) != np.shape(R2):
        raise ShapeMismatchError(f"triangular factors differ in shape: {np.shape(R1)} and {np.shape(R2)}")
    return int(np.count_nonzero(diagonal_ratios(R1, R2) >= threshold))
