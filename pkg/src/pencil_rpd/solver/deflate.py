"""Orthonormal bases of the deflating subspaces for eigenvalues outside the unit circle."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..exceptions import InvalidKError
from ..pencil import Pencil
from ..substrate.rng import RngStream
from .irs import IrsOutput, irs
from .rrf import GrurvResult, grurv2


@dataclass(frozen=True)
class DeflatePair:
    UR: np.ndarray
    UL: np.ndarray

    @property
    def k(self) -> int:
        return self.UR.shape[1]


def right_pass(P: Pencil, p: int, rng: RngStream) -> Tuple[IrsOutput, GrurvResult]:
    """irs on (A, B) followed by the rank-revealing factorization of (Ap + Bp)⁻¹Ap"""
    out = irs(P.A, P.B, p)
    return out, grurv2(out.Ap + out.Bp, out.Ap, -1, 1, rng)


def left_pass(P: Pencil, p: int, rng: RngStream) -> Tuple[IrsOutput, GrurvResult]:
    """irs on (Aᴴ, Bᴴ) followed by the factorization of 𝒜pᴴ(𝒜p + ℬp)⁻ᴴ"""
    out = irs(P.A.conj().T, P.B.conj().T, p)
    return out, grurv2(out.Ap.conj().T, (out.Ap + out.Bp).conj().T, 1, -1, rng)


def deflate(
    P: Pencil,
    p: int,
    k: int,
    rng: RngStream,
    right: Optional[GrurvResult] = None,
    left: bool = True,
) -> DeflatePair:
    """Right and left bases (n×k) for the k eigenvalues of (A, B) outside the unit circle.

    ``right`` reuses a right-pass factorization computed on
    ``rng.child("right")``. With ``left=False`` only the right pass runs and
    UL is UR, which is what the standard (B = I) eigenproblem needs.
    """
    n = P.n
    if not 1 <= k <= n:
        raise InvalidKError(f"k must lie in [1, {n}], got {k}")
    if right is None:
        _, right = right_pass(P, p, rng.child("right"))
    UR = right.U[:, :k]
    if not left:
        return DeflatePair(UR, UR)
    _, left_factor = left_pass(P, p, rng.child("left"))
    return DeflatePair(UR, left_factor.U[:, :k])
