"""Implicit repeated squaring and the Möbius maps that feed it."""

import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import ShapeMismatchError
from ..grid import Orientation
from ..pencil import Pencil
from ..substrate.dense import as_cmatrix, qr_full, solve, solve_right


@dataclass(frozen=True)
class IrsOutput:
    """Ap, Bp with Ap⁻¹Bp = (A⁻¹B)^(2^steps), formed without any inverse"""

    Ap: np.ndarray
    Bp: np.ndarray
    steps: int


def irs(A, B, p: int) -> IrsOutput:
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    if A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise ShapeMismatchError(f"irs needs square matrices of equal size, got {A.shape} and {B.shape}")
    if p < 0:
        raise ValueError(f"number of squaring steps must be nonnegative, got {p}")
    n = A.shape[0]
    for _ in range(p):
        Q, _ = qr_full(np.vstack([B, -A]))
        # Q12 = Q[:n, n:], Q22 = Q[n:, n:]
        A = Q[:n, n:].conj().T @ A
        B = Q[n:, n:].conj().T @ B
    logging.debug(f"irs: {p} squaring steps on a {n}x{n} pencil")
    return IrsOutput(A, B, p)


def right_projector_approx(out: IrsOutput) -> np.ndarray:
    """(Ap + Bp)⁻¹Ap, the projector onto eigenvalues outside the unit circle"""
    return solve(out.Ap + out.Bp, out.Ap)


def left_projector_approx(out: IrsOutput) -> np.ndarray:
    """𝒜pᴴ(𝒜p + ℬp)⁻ᴴ where ``out`` came from irs on the conjugate-transposed pencil"""
    return solve_right(out.Ap.conj().T, (out.Ap + out.Bp).conj().T)


def _centers(h: float, orientation: Orientation):
    unit = 1.0 if orientation == Orientation.VERTICAL else 1j
    return unit * (h - 1.0), unit * (h + 1.0)


def mobius_right(P: Pencil, h: float, orientation: Orientation) -> Pencil:
    """(A − c₋B, A − c₊B) with c∓ the reflections of each other in the line at h.

    Eigenvalues map by λ ↦ (λ − c₋)/(λ − c₊): the side Re(λ) > h (Im(λ) > h
    for horizontal lines) goes outside the unit circle.
    """
    lower, upper = _centers(h, orientation)
    return Pencil(P.A - lower * P.B, P.A - upper * P.B, P.name)


def mobius_left(P: Pencil, h: float, orientation: Orientation) -> Pencil:
    """mobius_right with the two sides exchanged"""
    lower, upper = _centers(h, orientation)
    return Pencil(P.A - upper * P.B, P.A - lower * P.B, P.name)
