"""Polishing of the eigenpairs returned by the divide-and-conquer recursion.

Every column t of T is an approximate eigenvector of the pencil and the
assembled residual A·T − B·T·D reaches A − S·D·T⁻¹ multiplied by T⁻¹. Two
steps of inverse iteration with the homogeneous shift ⟨α, β⟩ of the column,
each followed by a homogeneous Rayleigh quotient, bring the column residual
down to rounding level.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as la

from ..pencil import Pencil
from ..substrate.dense import qr_full, residual_bound
from .models.results import BaseModel

REFINEMENT_STEPS = 2

# a polished column must keep |⟨x, t⟩| ≥ MIN_OVERLAP with the unit column it replaces
MIN_OVERLAP = 0.5


@dataclass
class RefinementReport(BaseModel):
    columns: int = 0
    refined: int = 0
    max_residual_before: float = 0.0
    max_residual_after: float = 0.0


def homogeneous_rayleigh(
    A: np.ndarray, B: np.ndarray, x: np.ndarray
) -> Tuple[float, complex, complex]:
    """min ‖β·Ax − α·Bx‖₂ over |α|² + |β|² = 1 and the minimizing ⟨α, β⟩.

    The minimizer is the right singular vector of the n×2 matrix [Ax, Bx] for
    its smallest singular value, so infinite eigenvalues (β = 0) need no
    special case.
    """
    stacked = np.column_stack([A @ x, B @ x])
    _, sigma, vh = la.svd(stacked)
    v = vh[-1].conj()
    residual = float(sigma[1]) if sigma.size > 1 else 0.0
    return residual, complex(-v[1]), complex(v[0])


def _inverse_step(
    A: np.ndarray,
    B: np.ndarray,
    alpha: complex,
    beta: complex,
    x: np.ndarray,
    norm_bound: float,
) -> Optional[np.ndarray]:
    """Unit solution of (βA − αB)·y = x through QR; tiny pivots are lifted to the QR residual level"""
    M = beta * A - alpha * B
    q, r = qr_full(M)
    floor = max(residual_bound(M, norm=norm_bound), np.finfo(np.float64).tiny)
    pivots = np.diagonal(r).copy()
    magnitude = np.abs(pivots)
    phases = np.ones_like(pivots)
    nonzero = magnitude > 0
    phases[nonzero] = pivots[nonzero] / magnitude[nonzero]
    np.fill_diagonal(r, np.where(magnitude < floor, floor * phases, pivots))

    y = la.solve_triangular(r, q.conj().T @ x)
    norm = np.linalg.norm(y)
    if not np.isfinite(norm) or norm == 0.0:
        return None
    return y / norm


def refine_column(
    P: Pencil,
    t: np.ndarray,
    steps: int = REFINEMENT_STEPS,
    norms: Optional[Tuple[float, float]] = None,
) -> Tuple[np.ndarray, complex, complex, float, float]:
    """Polish one eigenvector.

    Returns (x, α, β, residual before, residual after) with x of the norm of
    t and the phase of ⟨x, t⟩ removed. When polishing does not lower the
    residual, or drifts away from t, the original column and its own
    Rayleigh quotient come back unchanged.
    """
    scale = np.linalg.norm(t)
    if scale == 0.0 or not np.isfinite(scale):
        return t, 0j, 0j, 0.0, 0.0
    unit = t / scale
    before, alpha, beta = homogeneous_rayleigh(P.A, P.B, unit)
    norm_a, norm_b = P.norms() if norms is None else norms

    x = unit
    after, new_alpha, new_beta = before, alpha, beta
    for _ in range(steps):
        bound = abs(new_beta) * norm_a + abs(new_alpha) * norm_b
        y = _inverse_step(P.A, P.B, new_alpha, new_beta, x, bound)
        if y is None:
            break
        x = y
        after, new_alpha, new_beta = homogeneous_rayleigh(P.A, P.B, x)

    overlap = np.vdot(x, unit)
    if not after < before or abs(overlap) < MIN_OVERLAP:
        return t, alpha, beta, before, before
    x = x * (np.conj(overlap) / abs(overlap))
    return x * scale, new_alpha, new_beta, before, after


def refine_eigenpairs(
    P: Pencil,
    T: np.ndarray,
    d1: np.ndarray,
    d2: np.ndarray,
    skip: Optional[np.ndarray] = None,
    steps: int = REFINEMENT_STEPS,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, RefinementReport]:
    """Polish every column of T not masked by ``skip``.

    ``d1``/``d2`` are the homogeneous eigenvalues belonging to the columns;
    they are replaced by the Rayleigh quotient of each accepted column.
    """
    T = np.array(T, dtype=np.complex128)
    d1 = np.array(d1, dtype=np.complex128)
    d2 = np.array(d2, dtype=np.complex128)
    skip = np.zeros(T.shape[1], dtype=bool) if skip is None else np.asarray(skip, dtype=bool)
    report = RefinementReport(columns=int(T.shape[1]))
    norms = P.norms()

    for i in np.flatnonzero(~skip):
        x, alpha, beta, before, after = refine_column(P, T[:, i], steps, norms)
        report.max_residual_before = max(report.max_residual_before, before)
        if after < before:
            T[:, i] = x
            # keep the scale of the incoming pair so D1/D2 stay comparable
            size = np.hypot(abs(d1[i]), abs(d2[i])) or 1.0
            d1[i], d2[i] = alpha * size, beta * size
            report.refined += 1
        report.max_residual_after = max(report.max_residual_after, after)

    logging.debug(
        f"refined {report.refined}/{report.columns} eigenvectors, max column residual "
        f"{report.max_residual_before:.3e} -> {report.max_residual_after:.3e}"
    )
    return T, d1, d2, report
