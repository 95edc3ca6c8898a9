"""Recursive spectral divide-and-conquer over a shattered grid."""

import logging
import math
from typing import Optional, Set, Tuple

import numpy as np

from ..exceptions import NoSplitFoundError, ParameterUnderflowError, ShapeMismatchError
from ..grid import Grid, GridLine, Orientation, Side, half_grid, median_order, zeta
from ..pencil import Pencil
from ..substrate.dense import matmul, ref_eig_decomposition
from ..substrate.rng import RngStream
from .deflate import deflate, right_pass
from .irs import mobius_left, mobius_right
from .models.results import DerivedParams, EigParams, EigResult, Mode, RunStats, SplitRecord
from .rrf import GrurvResult, diagonal_ratios


def split_bounds(m: int) -> Tuple[int, int]:
    """Accepted split sizes ⌈m/5⌉ ≤ k ≤ ⌊4m/5⌋"""
    return -(-m // 5), (4 * m) // 5


def compute_params(
    mode: Mode,
    n: int,
    m: int,
    epsilon: float,
    beta: float,
    theta: float,
    g: Grid,
    alpha: float = 0.0,
) -> DerivedParams:
    """Derive ζ, η, δ, the number of squaring steps p and the rank threshold.

    Args:
        mode: theoretical evaluates every formula with the given α; practical
            uses α = 0, p = ⌈log₂(n/ε)⌉ and drops the 1/n³ factor of the
            threshold
        n: size of the top-level problem
        m: size of the current subproblem
        g: grid of the current subproblem; its box side plays the role of ω

    Raises:
        ParameterUnderflowError: δ or η underflows, or p is not finite
            (theoretical mode only)
    """
    mode = Mode(mode)
    z = zeta(g)
    omega = g.omega
    a = alpha if mode == Mode.THEORETICAL else 0.0
    na = float(n) ** a

    log_term = 1.0 / (2.0 * math.log(n, 1.25)) if n > 1 else math.inf
    eta = min(4.0 * math.pi / (315.0 * math.sqrt(8.0)) * beta * epsilon**2 / (omega * na), log_term)
    scale = math.sqrt(theta / 10.0)
    power = float(n) ** (2.0 * a + 3.0)
    delta = min(
        scale * epsilon**2 / (7200.0 * power),
        theta / (2.0 * (theta + 10.0 * float(n) ** 6 * z)),
        scale * eta**2 / (288.0 * power),
    )
    threshold = math.sqrt(theta / (10.0 * z)) * (1.0 - delta)

    if mode == Mode.PRACTICAL:
        p = max(0, math.ceil(math.log2(n / epsilon)))
        return DerivedParams(zeta=z, eta=eta, delta=delta, p=p, rank_threshold=threshold)

    if delta == 0.0 or eta == 0.0:
        raise ParameterUnderflowError(
            f"theoretical parameters underflow at n={n} (eta={eta:.3e}, delta={delta:.3e}); use practical mode"
        )
    x = epsilon / (105.0 * na)
    log_shrink = math.log1p(-x) / math.log(2.0)
    inner = delta * math.pi * epsilon / (12.0 * na * m * omega + delta * math.pi * epsilon)
    candidates = [
        7.0,
        math.log2(1.0 / x - 1.0),
        -2.0 * math.log2(-0.5 * log_shrink),
    ]
    if inner > 0.0:
        candidates.append(1.0 + math.log2(math.log2(inner) / log_shrink))
    else:
        candidates.append(math.inf)
    p_real = max(candidates)
    if not math.isfinite(p_real):
        raise ParameterUnderflowError(
            f"number of squaring steps is not finite at n={n}, m={m}; use practical mode"
        )
    return DerivedParams(
        zeta=z,
        eta=eta,
        delta=delta,
        p=math.ceil(p_real),
        rank_threshold=threshold / float(n) ** 3,
    )


class LineSearch:
    """Chooses the grid lines probed in one orientation.

    Probes follow a binary search on the line index steered by the observed
    count k: too few eigenvalues beyond a line moves the search down, too many
    moves it up. An untrusted count or an exhausted interval switches to the
    remaining lines in median-first order. At most ``budget`` lines are probed.
    """

    def __init__(self, g: Grid, orientation: Orientation, budget: int):
        self.g = g
        self.orientation = orientation
        self.budget = budget
        self.lo = 1
        self.hi = g.count(orientation) - 1
        self.steering = True
        self.tried: Set[int] = set()
        self._fallback = median_order(self.lo, self.hi)

    def next_line(self) -> Optional[GridLine]:
        if len(self.tried) >= self.budget:
            return None
        if self.steering and self.lo <= self.hi:
            index = (self.lo + self.hi) // 2
        else:
            self.steering = False
            index = next((i for i in self._fallback if i not in self.tried), None)
            if index is None:
                return None
        self.tried.add(index)
        return self.g.line(self.orientation, index)

    def report(self, line: GridLine, direction: Optional[int]) -> None:
        """direction −1: k below the accepted range, +1: above it, None: untrusted"""
        if direction is None:
            self.steering = False
        elif self.steering:
            if direction < 0:
                self.hi = line.index - 1
            else:
                self.lo = line.index + 1


def _probe(
    P: Pencil, line: GridLine, p: int, threshold: float, rng: RngStream
) -> Tuple[Optional[int], GrurvResult]:
    pencil = mobius_right(P, line.coordinate, line.orientation)
    _, factor = right_pass(pencil, p, rng.child("right"))
    ratios = diagonal_ratios(factor.R1, factor.R2)
    if np.any(np.isnan(ratios)) or not np.all(np.isfinite(factor.R2)):
        return None, factor
    return int(np.count_nonzero(ratios >= threshold)), factor


def _base_case(P: Pencil, params: EigParams) -> EigResult:
    m = P.n
    if m == 1:
        return EigResult(np.ones((1, 1), dtype=np.complex128), P.A.copy(), P.B.copy())
    if params.single_matrix:
        alpha, beta, vectors = ref_eig_decomposition(P.A)
    else:
        alpha, beta, vectors = ref_eig_decomposition(P.A, P.B)
    logging.debug(f"delegated a {m}x{m} subproblem to the dense eigensolver")
    return EigResult(vectors, np.diag(alpha), np.diag(beta), RunStats(delegated=1))


def assemble(
    UR_k: np.ndarray, UR_mk: np.ndarray, right: EigResult, left: EigResult
) -> EigResult:
    """T = [UR_k UR_mk]·blockdiag(T̂, T̃) with D1, D2 block-diagonal.

    ``right`` is the result for the k-block (eigenvalues beyond the line),
    ``left`` the one for the remaining m − k.
    """
    k, rest = UR_k.shape[1], UR_mk.shape[1]
    if UR_k.shape[0] != UR_mk.shape[0]:
        raise ShapeMismatchError(f"bases have different heights: {UR_k.shape} and {UR_mk.shape}")
    if right.T.shape != (k, k) or left.T.shape != (rest, rest):
        raise ShapeMismatchError(
            f"children of sizes {right.T.shape} and {left.T.shape} do not match bases of widths {k} and {rest}"
        )
    T = np.hstack([matmul(UR_k, right.T), matmul(UR_mk, left.T)])
    D1 = np.diag(np.concatenate([np.diagonal(right.D1), np.diagonal(left.D1)]))
    D2 = np.diag(np.concatenate([np.diagonal(right.D2), np.diagonal(left.D2)]))
    return EigResult(T, D1, D2, right.stats.merge(left.stats))


def eig(
    P: Pencil,
    g: Grid,
    params: EigParams,
    rng: RngStream,
    depth: int = 0,
    branch: str = "",
) -> EigResult:
    """Diagonalize a pencil whose ε-pseudospectrum is shattered by g.

    Vertical lines are searched first, then horizontal ones; each orientation
    gets ζ/2 probes steered as a binary search on the observed count.

    Raises:
        NoSplitFoundError: no probed line produced an acceptable split
    """
    m = P.n
    if m == 1 or m <= params.cutoff:
        return _base_case(P, params)

    derived = compute_params(
        params.mode, params.n_global, m, params.epsilon, params.beta, params.theta, g, params.alpha
    )
    k_min, k_max = split_bounds(m)
    budget = max(1, derived.zeta // 2)
    checked = 0

    for orientation in (Orientation.VERTICAL, Orientation.HORIZONTAL):
        search = LineSearch(g, orientation, budget)
        line = search.next_line()
        while line is not None:
            checked += 1
            line_rng = rng.child(line.label)
            k, factor = _probe(P, line, derived.p, derived.rank_threshold, line_rng)
            logging.debug(
                f"m={m} depth={depth}: {line.orientation.value} line {line.index} "
                f"(h={line.coordinate:.6g}) gives k={k}"
            )
            if k is None:
                logging.warning(f"untrusted rank count on {line.label} at m={m}")
                search.report(line, None)
            elif k_min <= k <= k_max:
                return _divide(P, g, params, rng, depth, branch, line, k, derived.p, factor, line_rng, checked)
            else:
                search.report(line, -1 if k < k_min else 1)
            line = search.next_line()

    raise NoSplitFoundError(
        f"no grid line split the {m}x{m} subproblem into sizes within [{k_min}, {k_max}] "
        f"after {checked} lines",
        m=m,
        lines_checked=checked,
    )


def _divide(
    P: Pencil,
    g: Grid,
    params: EigParams,
    rng: RngStream,
    depth: int,
    branch: str,
    line: GridLine,
    k: int,
    p: int,
    factor: GrurvResult,
    line_rng: RngStream,
    checked: int,
) -> EigResult:
    m = P.n
    both_sides = not params.single_matrix
    head = deflate(
        mobius_right(P, line.coordinate, line.orientation), p, k, line_rng, right=factor, left=both_sides
    )
    tail = deflate(
        mobius_left(P, line.coordinate, line.orientation),
        p,
        m - k,
        line_rng.child("complement"),
        left=both_sides,
    )
    logging.info(
        f"split m={m} into {k}+{m - k} at {line.orientation.value} line h={line.coordinate:.6g} "
        f"after {checked} lines (depth {depth})"
    )

    def compress(pair) -> Pencil:
        A = pair.UL.conj().T @ P.A @ pair.UR
        if params.single_matrix:
            return Pencil(A, np.eye(pair.k, dtype=np.complex128))
        return Pencil(A, pair.UL.conj().T @ P.B @ pair.UR)

    child_params = params.child()
    right = eig(
        compress(head),
        half_grid(g, line, Side.RIGHT),
        child_params,
        rng.child("R"),
        depth + 1,
        branch + "R",
    )
    left = eig(
        compress(tail),
        half_grid(g, line, Side.LEFT),
        child_params,
        rng.child("L"),
        depth + 1,
        branch + "L",
    )
    result = assemble(head.UR, tail.UR, right, left)
    stats = RunStats()
    stats.record(
        SplitRecord(
            m=m,
            k=k,
            lines_checked=checked,
            orientation=line.orientation.value,
            depth=depth,
            branch=branch,
            coordinate=line.coordinate,
        )
    )
    result.stats = stats.merge(result.stats)
    return result
