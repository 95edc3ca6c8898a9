"""Accuracy and cost metrics of a diagonalization."""

import math
from enum import Enum
from functools import lru_cache
from typing import Dict, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from ..exceptions import LengthMismatchError, OracleUnavailableError
from ..pencil import Pencil
from ..substrate.dense import (
    ORACLE_CONDITION,
    condition_number,
    is_at_infinity,
    solve,
    solve_right,
    spectral_norm,
    svd_values,
    unit_columns,
)
from .models.results import DiagResult, RunStats

ERROR_FLOOR = -17.0


def _log_error(value: float) -> float:
    if value == 0.0:
        return ERROR_FLOOR
    if math.isinf(value) or math.isnan(value):
        return math.inf
    return max(ERROR_FLOOR, math.log10(value))


def residuals(P: Pencil, res: DiagResult) -> Tuple[float, float]:
    """(‖A − S·diag(D)·T⁻¹‖₂, ‖B − S·T⁻¹‖₂) with T⁻¹ applied through solves

    Raises:
        SingularMatrixError: T is numerically singular
    """
    if np.any(res.at_infinity):
        return math.inf, spectral_norm(P.B - solve_right(res.S, res.T))
    a_fit = solve_right(res.S * res.D[None, :], res.T)
    b_fit = solve_right(res.S, res.T)
    return spectral_norm(P.A - a_fit), spectral_norm(P.B - b_fit)


def diag_error(P: Pencil, res: DiagResult) -> float:
    """log₁₀ max(‖A − SDT⁻¹‖₂, ‖B − ST⁻¹‖₂), floored at −17"""
    return _log_error(max(residuals(P, res)))


def diag_error_right(P: Pencil, res: DiagResult) -> float:
    """log₁₀ max(‖AT − S·diag(D)‖₂, ‖BT − S‖₂)/‖T‖₂ over columns with finite D"""
    keep = ~res.at_infinity
    if not np.any(keep):
        return math.inf
    T = res.T[:, keep]
    S = res.S[:, keep]
    a_res = spectral_norm(P.A @ T - S * res.D[keep][None, :])
    b_res = spectral_norm(P.B @ T - S)
    return _log_error(max(a_res, b_res) / spectral_norm(res.T))


def diag_errors(P: Pencil, res: DiagResult) -> Dict[str, float]:
    a_res, b_res = residuals(P, res)
    return {
        "diag_error": _log_error(max(a_res, b_res)),
        "diag_error_right": diag_error_right(P, res),
        "a_residual": a_res,
        "b_residual": b_res,
    }


def is_success(error: float, eps_user: float) -> bool:
    return error <= math.log10(eps_user)


class EigenOrder(str, Enum):
    """How eigen_error pairs approximations with oracle eigenvalues"""

    MAGNITUDE = "magnitude"
    REAL = "real"


def _sorted(values: np.ndarray, order: EigenOrder) -> np.ndarray:
    if order == EigenOrder.REAL:
        return np.sort_complex(values)
    return values[np.lexsort((values.imag, values.real, np.abs(values)))]


def eigen_error(
    approx: Sequence[complex],
    oracle: Sequence[complex],
    order: EigenOrder = EigenOrder.MAGNITUDE,
) -> float:
    """Mean |λ̃ᵢ − λᵢ| over the finite oracle eigenvalues.

    Oracle eigenvalues at infinity are dropped together with the same number
    of largest-magnitude approximations. The remaining lists are paired after
    sorting both by magnitude, or by real part then imaginary part with
    ``order=EigenOrder.REAL`` (spectra symmetric about the origin need the
    latter).
    """
    order = EigenOrder(order)
    approx = np.asarray(list(approx), dtype=np.complex128)
    oracle = np.asarray(list(oracle), dtype=np.complex128)
    if approx.size != oracle.size:
        raise LengthMismatchError(f"{approx.size} approximations for {oracle.size} eigenvalues")
    infinite = is_at_infinity(oracle)
    dropped = int(np.count_nonzero(infinite))
    oracle = oracle[~infinite]
    approx = approx[np.argsort(np.abs(approx), kind="stable")]
    approx = approx[: approx.size - dropped]
    if oracle.size == 0:
        return 0.0
    return float(np.mean(np.abs(_sorted(approx, order) - _sorted(oracle, order))))


def forward_bound(P: Pencil, kappaV: float, gap: float, eps: float) -> Tuple[float, float]:
    """(eigenvalue bound 4·gap·κ_V·ε, eigenvector bound 24·n·κ_V·ε)"""
    return 4.0 * gap * kappaV * eps, 24.0 * P.n * kappaV * eps


@lru_cache(maxsize=None)
def optimal_cost(m: int, cutoff: int) -> float:
    """Cost Σ m³ of a recursion that always halves and never retries a line"""
    if m <= cutoff or m <= 1:
        return 0.0
    return float(m) ** 3 + optimal_cost(-(-m // 2), cutoff) + optimal_cost(m // 2, cutoff)


def efficiency_factor(stats: RunStats, n: int, cutoff: int = 1) -> float:
    spent = sum(float(s.m) ** 3 * s.lines_checked for s in stats.splits)
    best = optimal_cost(n, cutoff)
    if best == 0.0:
        return 1.0
    return spent / best


def gap_and_kappaV(P: Pencil) -> Tuple[float, float]:
    """Eigenvalue gap and the unit-column eigenvector condition number of B⁻¹A

    Raises:
        OracleUnavailableError: B is too close to singular for the oracle
    """
    values = svd_values(P.B)
    if values[0] == 0 or values[-1] <= ORACLE_CONDITION * values[0]:
        raise OracleUnavailableError(
            f"B is near-singular (sigma_min={values[-1]:.3e}, norm={values[0]:.3e})"
        )
    lam, vectors = la.eig(solve(P.B, P.A))
    if lam.size < 2:
        gap = math.inf
    else:
        distances = np.abs(lam[:, None] - lam[None, :])
        distances[np.diag_indices_from(distances)] = np.inf
        gap = float(np.min(distances))
    return gap, condition_number(unit_columns(vectors))
