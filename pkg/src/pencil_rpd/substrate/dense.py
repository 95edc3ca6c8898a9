"""Dense complex linear-algebra primitives.

Everything the solver needs is expressed through QR (and its QL/RQ
reflections), SVD-based norms, triangular/dense solves and matrix products.
Factorizations come from scipy's LAPACK bindings; QL and RQ are reduced to QR
by index reversal so a single kernel carries the stability assumptions.
"""

import logging
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np
import scipy.linalg as la

from ..exceptions import ShapeMismatchError, SingularMatrixError

if TYPE_CHECKING:
    from ..pencil import Pencil

MACHINE_EPS = float(np.finfo(np.float64).eps)

# ‖QR − M‖₂ ≤ FACTORIZATION_CONSTANT · max(rows, cols) · u · ‖M‖₂
FACTORIZATION_CONSTANT = 10.0

# ref_eig trusts solve(B, A) only when σₙ(B) exceeds this fraction of ‖B‖₂
ORACLE_CONDITION = 1e-8

# |μ| of solve(A, B) at or below this fraction of its norm means "at infinity"
AT_INFINITY_TOL = 1e-12

AT_INFINITY = complex(np.inf, 0.0)


def as_cmatrix(M, name: str = "matrix", check_finite: bool = True) -> np.ndarray:
    """Coerce to a 2-D complex128 array and validate the CMatrix invariants"""
    arr = np.asarray(M, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeMismatchError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if check_finite and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _require_square(M: np.ndarray, name: str) -> None:
    if M.shape[0] != M.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got shape {M.shape}")


def qr_full(M) -> Tuple[np.ndarray, np.ndarray]:
    """Full QR factorization M = Q·R with Q unitary (rows×rows).

    R is upper trapezoidal; entries below the diagonal are zeroed exactly.
    Rank-deficient inputs are accepted (R may carry zero diagonal entries).
    """
    M = as_cmatrix(M)
    rows, cols = M.shape
    if rows < cols:
        raise ShapeMismatchError(f"qr_full needs rows >= cols, got shape {M.shape}")
    q, r = la.qr(M, mode="full")
    return q, np.triu(r)


def ql_full(M) -> Tuple[np.ndarray, np.ndarray]:
    """Full QL factorization M = Q·L with L lower trapezoidal.

    With J the index reversal, J·M·J = Q'R' gives M = (J Q' J)(J R' J), and
    J R' J is lower trapezoidal.
    """
    M = as_cmatrix(M)
    rows, cols = M.shape
    if rows < cols:
        raise ShapeMismatchError(f"ql_full needs rows >= cols, got shape {M.shape}")
    q_flip, r_flip = qr_full(M[::-1, ::-1])
    q = np.ascontiguousarray(q_flip[::-1, ::-1])
    lower = np.tril(np.ascontiguousarray(r_flip[::-1, ::-1]), k=cols - rows)
    return q, lower


def rq_full(M) -> Tuple[np.ndarray, np.ndarray]:
    """Full RQ factorization M = R·Q with R upper triangular and Q on the right.

    Obtained from the QL factorization of Mᴴ: Mᴴ = Q·L gives M = Lᴴ·Qᴴ.
    """
    M = as_cmatrix(M)
    rows, cols = M.shape
    if rows > cols:
        raise ShapeMismatchError(f"rq_full needs rows <= cols, got shape {M.shape}")
    q, lower = ql_full(M.conj().T)
    return np.triu(lower.conj().T, k=cols - rows), q.conj().T


def svd_values(M) -> np.ndarray:
    """Singular values in nonincreasing order (length min(rows, cols))"""
    return la.svdvals(as_cmatrix(M))


def smallest_sv(M) -> float:
    return float(svd_values(M)[-1])


def spectral_norm(M) -> float:
    return float(svd_values(M)[0])


def matmul(X, Y) -> np.ndarray:
    """X·Y for conformable complex matrices.

    Raises:
        ShapeMismatchError: X has a column count other than Y's row count
    """
    X = as_cmatrix(X, "left factor")
    Y = as_cmatrix(Y, "right factor")
    if X.shape[1] != Y.shape[0]:
        raise ShapeMismatchError(f"cannot multiply shapes {X.shape} and {Y.shape}")
    return X @ Y


def is_singular(M, values: Optional[np.ndarray] = None) -> bool:
    """True when σₙ(M) ≤ n·u·‖M‖₂ (the solve() refusal criterion)"""
    if values is None:
        values = svd_values(M)
    n = len(values)
    return bool(values[-1] <= n * MACHINE_EPS * values[0])


def solve(M, RHS) -> np.ndarray:
    """Solve M·X = RHS for square nonsingular M.

    Raises:
        SingularMatrixError: when σₙ(M) ≤ n·u·‖M‖₂
    """
    M = as_cmatrix(M)
    _require_square(M, "solve matrix")
    rhs = np.asarray(RHS, dtype=np.complex128)
    vector_rhs = rhs.ndim == 1
    rhs2 = rhs.reshape(-1, 1) if vector_rhs else as_cmatrix(rhs, "right-hand side")
    if rhs2.shape[0] != M.shape[0]:
        raise ShapeMismatchError(
            f"right-hand side with shape {rhs.shape} does not match matrix {M.shape}"
        )
    values = svd_values(M)
    if is_singular(M, values):
        raise SingularMatrixError(
            f"matrix of size {M.shape[0]} is numerically singular "
            f"(smallest singular value {values[-1]:.3e}, norm {values[0]:.3e})"
        )
    x = la.solve(M, rhs2)
    return x.ravel() if vector_rhs else x


def solve_right(RHS, M) -> np.ndarray:
    """Solve X·M = RHS, i.e. X = RHS·M⁻¹, without forming the inverse"""
    return solve(as_cmatrix(M).T, as_cmatrix(RHS).T).T


def residual_bound(M, norm: Optional[float] = None) -> float:
    """Documented factorization residual bound c·max(rows, cols)·u·‖M‖₂.

    ``norm`` replaces ‖M‖₂ by a known upper bound and skips the SVD.
    """
    M = as_cmatrix(M)
    if norm is None:
        norm = spectral_norm(M)
    return FACTORIZATION_CONSTANT * max(M.shape) * MACHINE_EPS * norm


def is_at_infinity(values) -> np.ndarray:
    values = np.asarray(values, dtype=np.complex128)
    return np.isinf(values.real) | np.isinf(values.imag)


def ref_eig(pencil: "Pencil") -> np.ndarray:
    """Reference generalized eigenvalues of (A, B), used only for verification.

    Eigenvalues of solve(B, A) when B is comfortably nonsingular; otherwise the
    eigenvalues of solve(A, B) inverted elementwise, with near-zero values
    mapped to AT_INFINITY. When both A and B fail the conditioning test the
    QZ algorithm is used directly; results there are not authoritative.
    """
    A, B = pencil.A, pencil.B
    b_values = svd_values(B)
    if b_values[0] > 0 and b_values[-1] > ORACLE_CONDITION * b_values[0]:
        return la.eigvals(solve(B, A))

    a_values = svd_values(A)
    if a_values[0] > 0 and a_values[-1] > ORACLE_CONDITION * a_values[0]:
        product = solve(A, B)
        mu = la.eigvals(product)
        scale = max(spectral_norm(product), 1.0)
        infinite = np.abs(mu) <= AT_INFINITY_TOL * scale
        lam = np.full(mu.shape, AT_INFINITY, dtype=np.complex128)
        lam[~infinite] = 1.0 / mu[~infinite]
        return lam

    logging.warning("ref_eig: both A and B are near-singular, falling back to QZ")
    pairs = la.eigvals(A, B, homogeneous_eigvals=True)
    alpha, beta = pairs[0], pairs[1]
    infinite = np.abs(beta) <= AT_INFINITY_TOL * np.maximum(np.abs(alpha), 1.0)
    lam = np.full(alpha.shape, AT_INFINITY, dtype=np.complex128)
    lam[~infinite] = alpha[~infinite] / beta[~infinite]
    return lam


def ref_eig_decomposition(
    A, B=None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Homogeneous eigenvalues ⟨α, β⟩ and unit-norm right eigenvectors.

    QZ for a pencil, QR-based eig when B is None (single-matrix problems, β = 1).
    """
    A = as_cmatrix(A, "A")
    if B is None:
        alpha, vectors = la.eig(A)
        beta = np.ones_like(alpha)
    else:
        pairs, vectors = la.eig(A, as_cmatrix(B, "B"), homogeneous_eigvals=True)
        alpha, beta = pairs[0], pairs[1]
    norms = np.linalg.norm(vectors, axis=0)
    norms[norms == 0] = 1.0
    return alpha, beta, vectors / norms


def unit_columns(M) -> np.ndarray:
    M = as_cmatrix(M)
    norms = np.linalg.norm(M, axis=0)
    norms[norms == 0] = 1.0
    return M / norms


def condition_number(M) -> float:
    values = svd_values(M)
    if values[-1] == 0:
        return float(np.inf)
    return float(values[0] / values[-1])
