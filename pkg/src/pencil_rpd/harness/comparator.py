"""Diagonalization through the explicitly formed product B̃⁻¹Ã.

The comparator consumes the same perturbation and grid as rpd when handed the
same stream, so paired runs differ only in how the problem is posed.
"""

import dataclasses
import logging

import numpy as np

from ..pencil import Pencil
from ..solver.eigsolve import eig
from ..solver.models.results import DiagResult, Mode
from ..solver.rpd import perturb, rpd_setup, shattering_grid
from ..substrate.dense import solve
from ..substrate.rng import RngStream


def comparator_inversion(
    P: Pencil,
    eps_user: float,
    rng: RngStream,
    cutoff: int = 1,
    mode: Mode = Mode.PRACTICAL,
) -> DiagResult:
    """Diagonalize X = B̃⁻¹Ã with the single-matrix eigensolver and set S = B̃T.

    Raises:
        SingularMatrixError: B̃ is numerically singular
    """
    n = P.n
    setup = rpd_setup(n, eps_user, mode, cutoff)
    params = dataclasses.replace(setup.params, single_matrix=True)
    perturbed = perturb(P, setup.gamma, rng)
    grid = shattering_grid(setup.omega, rng)
    scale_b = float(n) ** setup.alpha

    X = solve(perturbed.B, perturbed.A)
    logging.info(f"comparator: n={n}, formed product with norm {np.linalg.norm(X, 2):.3e}")
    identity = np.eye(n, dtype=np.complex128)
    result = eig(Pencil(X / scale_b, identity), grid, params, rng.child("eig"))

    D = scale_b * np.diagonal(result.D1) / np.diagonal(result.D2)
    return DiagResult(
        S=perturbed.B @ result.T,
        T=result.T,
        D=D,
        at_infinity=np.zeros(n, dtype=bool),
        perturbed=perturbed,
        grid=grid,
        params=params,
        stats=result.stats,
        algorithm="comparator",
    )
