"""Randomized pencil diagonalization: perturb, grid, divide and conquer, assemble."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from ..grid import Grid, random_grid
from ..pencil import Pencil
from ..substrate.dense import matmul
from ..substrate.matrix_market import write_matrix
from ..substrate.rng import RngStream, complex_gaussian, ginibre
from ..utils import atomic_write_json
from .eigsolve import eig
from .models.results import DiagResult, EigParams, Mode
from .refine import refine_eigenpairs

AT_INFINITY_THRESHOLD = 1e-300
NORM_SLACK = 1e-10


@dataclass(frozen=True)
class RpdSetup:
    """Everything derived from (n, ε) before any random draw"""

    gamma: float
    alpha: float
    omega: float
    params: EigParams


def rpd_setup(n: int, eps_user: float, mode: Mode, cutoff: int = 1) -> RpdSetup:
    """Perturbation size, scaling exponent, grid box side and eigensolver parameters.

    Practical mode drops the n^α scaling and sets ε = β = ω = γ/n.
    """
    if not 0 < eps_user < 1:
        raise ValueError(f"accuracy must lie in (0, 1), got {eps_user}")
    if n < 1:
        raise ValueError(f"pencil size must be positive, got {n}")
    mode = Mode(mode)
    gamma = eps_user / 16.0
    theta = 1.0 / n if n > 1 else 0.5

    if mode == Mode.PRACTICAL:
        eps = gamma / n
        params = EigParams(
            mode=mode,
            epsilon=eps,
            alpha=0.0,
            beta=eps,
            theta=theta,
            n_global=n,
            cutoff=cutoff,
            omega=eps,
            gamma=gamma,
        )
        return RpdSetup(gamma, 0.0, eps, params)

    alpha = math.ceil(2.0 * math.log(1.0 / gamma, n) + 3.0) / 2.0 if n > 1 else 0.0
    eps = gamma**5 / (64.0 * n ** ((11.0 * alpha + 25.0) / 3.0) + gamma**5)
    beta = eps_user * gamma**2 / (24.0 * (1.0 + 4.0 * gamma)) * n ** (-3.0 * alpha - 5.0)
    omega = gamma**4 / 4.0 * n ** (-(8.0 * alpha + 13.0) / 3.0)
    params = EigParams(
        mode=mode,
        epsilon=eps,
        alpha=alpha,
        beta=beta,
        theta=theta,
        n_global=n,
        cutoff=cutoff,
        omega=omega,
        gamma=gamma,
    )
    return RpdSetup(gamma, alpha, omega, params)


def perturb(P: Pencil, gamma: float, rng: RngStream, variance: Optional[float] = None) -> Pencil:
    """(A + γG1, B + γG2) with G1, G2 independent draws on streams G1 and G2.

    G1, G2 are Ginibre (entry variance 1/n) unless ``variance`` is given.
    """
    n = P.n

    def draw(label: str) -> np.ndarray:
        if variance is None:
            return ginibre(n, rng.child(label))
        return complex_gaussian((n, n), rng.child(label), variance=variance)

    return Pencil(P.A + gamma * draw("G1"), P.B + gamma * draw("G2"), P.name)


def shattering_grid(omega: float, rng: RngStream) -> Grid:
    return random_grid(omega, rng.child("grid"))


def rpd(
    P: Pencil, eps_user: float, mode: Mode, rng: RngStream, cutoff: int = 1
) -> DiagResult:
    """Diagonalize a pencil with ‖A‖₂, ‖B‖₂ ≤ 1 to backward error eps_user.

    Raises:
        NoSplitFoundError: the eigensolver found no dividing line
    """
    norm_a, norm_b = P.norms()
    if max(norm_a, norm_b) > 1.0 + NORM_SLACK:
        raise ValueError(
            f"pencil norms must not exceed 1 (got {norm_a:.6g}, {norm_b:.6g}); use rpd_normalized"
        )
    n = P.n
    setup = rpd_setup(n, eps_user, mode, cutoff)
    perturbed = perturb(P, setup.gamma, rng)
    grid = shattering_grid(setup.omega, rng)
    scale_b = float(n) ** setup.alpha
    logging.info(
        f"rpd: n={n} mode={setup.params.mode.value} gamma={setup.gamma:.3e} "
        f"omega={setup.omega:.3e} grid={grid.s1}x{grid.s2}"
    )

    scaled = Pencil(perturbed.A, scale_b * perturbed.B)
    result = eig(scaled, grid, setup.params, rng.child("eig"))
    at_infinity = np.abs(np.diagonal(result.D2)) <= AT_INFINITY_THRESHOLD
    T, d1, d2, refinement = refine_eigenpairs(
        scaled, result.T, np.diagonal(result.D1), np.diagonal(result.D2), skip=at_infinity
    )
    at_infinity |= np.abs(d2) <= AT_INFINITY_THRESHOLD
    D = np.zeros(n, dtype=np.complex128)
    D[~at_infinity] = scale_b * d1[~at_infinity] / d2[~at_infinity]
    if np.any(at_infinity):
        logging.warning(f"rpd: {int(np.count_nonzero(at_infinity))} eigenvalues flagged at infinity")

    return DiagResult(
        S=matmul(perturbed.B, T),
        T=T,
        D=D,
        at_infinity=at_infinity,
        perturbed=perturbed,
        grid=grid,
        params=setup.params,
        stats=result.stats,
        metrics={
            "refined_columns": refinement.refined,
            "column_residual": refinement.max_residual_after,
        },
    )


def rescale(res: DiagResult, scale: float) -> DiagResult:
    """Map a result for (A/scale, B/scale) back to (A, B): S and the perturbed pencil grow by scale"""
    if scale == 1.0:
        return res
    return DiagResult(
        S=res.S * scale,
        T=res.T,
        D=res.D,
        at_infinity=res.at_infinity,
        perturbed=Pencil(res.perturbed.A * scale, res.perturbed.B * scale, res.perturbed.name),
        grid=res.grid,
        params=res.params,
        stats=res.stats,
        scale=scale,
        algorithm=res.algorithm,
        metrics=dict(res.metrics),
    )


def rpd_normalized(
    P: Pencil, eps_user: float, mode: Mode, rng: RngStream, cutoff: int = 1
) -> DiagResult:
    """rpd on P/max(‖A‖₂, ‖B‖₂), returned at the original scale"""
    normalized, scale = P.normalized()
    return rescale(rpd(normalized, eps_user, mode, rng, cutoff), scale)


def emit_diag_result(res: DiagResult, out_dir: Path) -> Dict[str, Path]:
    """Write S.mtx, T.mtx and D.json into out_dir"""
    out_dir = Path(out_dir)
    paths = {
        "S": write_matrix(out_dir / "S.mtx", res.S),
        "T": write_matrix(out_dir / "T.mtx", res.T),
    }
    data = res.to_dict()
    data["files"] = {"S": "S.mtx", "T": "T.mtx"}
    paths["D"] = atomic_write_json(out_dir / "D.json", data)
    return paths
