"""Pseudospectrum oracles: membership, level fields, Bauer–Fike radii, shattering checks.

These are verification tools. The solver never calls them; tests and the
``pseudospectrum``/``shatter-check`` commands do.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .exceptions import (
    DegeneratePointError,
    OnGridLineError,
    UnboundedPseudospectrumError,
)
from .grid import Grid, box_of, random_grid
from .pencil import Pencil
from .substrate.dense import (
    is_at_infinity,
    smallest_sv,
    solve,
    spectral_norm,
)
from .substrate.rng import RngStream

LEVEL_CAP = 16.0
DEFAULT_SAMPLES_PER_EDGE = 64
DEFAULT_GRID_ATTEMPTS = 1000

# entries per stacked SVD batch
_BATCH_ENTRIES = 1 << 20


@dataclass(frozen=True)
class Region:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"empty region {self}")

    @classmethod
    def parse(cls, text: str) -> "Region":
        """Parse "re_min,re_max,im_min,im_max" """
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"region needs four comma-separated numbers, got {text!r}")
        return cls(*(float(p) for p in parts))

    def to_dict(self) -> dict:
        return {
            "re_min": self.re_min,
            "re_max": self.re_max,
            "im_min": self.im_min,
            "im_max": self.im_max,
        }


@dataclass
class LevelField:
    """Values on a resolution×resolution lattice; ``values[j, i]`` sits at re[i] + i·im[j]"""

    region: Region
    resolution: int
    re: np.ndarray
    im: np.ndarray
    values: np.ndarray
    kind: str = "pencil"
    cap: float = LEVEL_CAP

    def value_at(self, i: int, j: int) -> float:
        return float(self.values[j, i])

    def to_frame(self) -> pd.DataFrame:
        RE, IM = np.meshgrid(self.re, self.im)
        return pd.DataFrame(
            {"re": RE.ravel(), "im": IM.ravel(), "value": self.values.ravel()}
        )

    def header(self) -> dict:
        return {
            "kind": self.kind,
            "region": self.region.to_dict(),
            "resolution": self.resolution,
            "cap": self.cap,
        }


@dataclass
class ShatterReport:
    shattered: bool
    min_grid_sigma_ratio: float
    eigenvalue_boxes: List[Tuple[complex, Optional[Tuple[int, int]]]] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)
    segments_sampled: int = 0
    samples: int = 0

    def to_dict(self) -> dict:
        return {
            "shattered": self.shattered,
            "min_grid_sigma_ratio": self.min_grid_sigma_ratio,
            "eigenvalue_boxes": [
                {"eigenvalue": lam, "box": list(box) if box is not None else None}
                for lam, box in self.eigenvalue_boxes
            ],
            "violations": list(self.violations),
            "segments_sampled": self.segments_sampled,
            "samples": self.samples,
        }


def _chunks(points: np.ndarray, n: int) -> List[np.ndarray]:
    size = max(1, _BATCH_ENTRIES // max(1, n * n))
    return [points[i : i + size] for i in range(0, len(points), size)]


def smallest_sv_batch(
    A: np.ndarray, B: np.ndarray, points: np.ndarray, workers: int = 1
) -> np.ndarray:
    """σₙ(A − zB) for every z in points, via stacked SVDs"""
    points = np.asarray(points, dtype=np.complex128).ravel()
    if points.size == 0:
        return np.empty(0)
    n = A.shape[0]

    def _evaluate(chunk: np.ndarray) -> np.ndarray:
        stack = A[None, :, :] - chunk[:, None, None] * B[None, :, :]
        return np.linalg.svd(stack, compute_uv=False)[:, -1]

    chunks = _chunks(points, n)
    if workers <= 1 or len(chunks) == 1:
        return np.concatenate([_evaluate(c) for c in chunks])
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return np.concatenate(list(executor.map(_evaluate, chunks)))


def in_pseudospectrum(P: Pencil, z: complex, eps: float) -> bool:
    """True iff σₙ(A − zB) ≤ ε(1 + |z|)"""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return smallest_sv(P.at(z)) <= eps * (1.0 + abs(z))


def _lattice(region: Region, resolution: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    re = np.linspace(region.re_min, region.re_max, resolution)
    im = np.linspace(region.im_min, region.im_max, resolution)
    RE, IM = np.meshgrid(re, im)
    return re, im, (RE + 1j * IM).ravel()


def _clamped_log(numerator: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        values = np.log10(numerator) - np.log10(sigma)
    return np.minimum(np.nan_to_num(values, nan=LEVEL_CAP, posinf=LEVEL_CAP), LEVEL_CAP)


def pseudospec_levels(
    P: Pencil, region: Region, resolution: int, workers: int = 1
) -> LevelField:
    """log₁₀[(1 + |z|)/σₙ(A − zB)] on a lattice, clamped at LEVEL_CAP near eigenvalues"""
    re, im, points = _lattice(region, resolution)
    sigma = smallest_sv_batch(P.A, P.B, points, workers=workers)
    values = _clamped_log(1.0 + np.abs(points), sigma)
    return LevelField(region, resolution, re, im, values.reshape(resolution, resolution))


def product_levels(
    P: Pencil, region: Region, resolution: int, workers: int = 1
) -> LevelField:
    """log₁₀[1/σₙ(X − zI)] for the explicitly formed product X = B⁻¹A.

    Raises:
        SingularMatrixError: B is numerically singular
    """
    X = solve(P.B, P.A)
    re, im, points = _lattice(region, resolution)
    sigma = smallest_sv_batch(X, np.eye(P.n, dtype=np.complex128), points, workers=workers)
    values = _clamped_log(np.ones_like(sigma), sigma)
    return LevelField(
        region, resolution, re, im, values.reshape(resolution, resolution), kind="product"
    )


def bounded_check(P: Pencil, eps: float) -> bool:
    """Λ_ε(A, B) is bounded iff ε < σₙ(B)"""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return eps < smallest_sv(P.B)


def bauer_fike_radius(P: Pencil, eps: float, kappaV: float) -> float:
    """Radius r_ε with Λ_ε(A, B) inside the union of r_ε-balls around the eigenvalues"""
    if kappaV < 1:
        raise ValueError(f"kappaV must be at least 1, got {kappaV}")
    sigma_b = smallest_sv(P.B)
    if not eps < sigma_b:
        raise UnboundedPseudospectrumError(
            f"eps={eps:.3e} is not below sigma_min(B)={sigma_b:.3e}; the pseudospectrum is unbounded"
        )
    inv_b = 1.0 / sigma_b
    inv_b_a = spectral_norm(solve(P.B, P.A))
    return eps * kappaV * inv_b * (1.0 + (eps * inv_b + inv_b_a) / (1.0 - eps * inv_b))


def _distance_to_segment(z: np.ndarray, start: complex, end: complex) -> float:
    direction = end - start
    t = np.clip(((z - start) * np.conj(direction)).real / abs(direction) ** 2, 0.0, 1.0)
    return float(np.min(np.abs(z - (start + t * direction))))


def verify_shattering(
    P: Pencil,
    g: Grid,
    eps: float,
    oracle_eigs: Sequence[complex],
    samples_per_edge: int = DEFAULT_SAMPLES_PER_EDGE,
    margin: Optional[float] = None,
    workers: int = 1,
) -> ShatterReport:
    """Check that Λ_ε(A, B) misses the grid and each eigenvalue has its own box.

    Grid edges are sampled at ``samples_per_edge`` equispaced points. With a
    ``margin`` only edges within that distance of an oracle eigenvalue are
    sampled.
    """
    if samples_per_edge < 2:
        raise ValueError(f"samples_per_edge must be at least 2, got {samples_per_edge}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")

    eigs = np.asarray(list(oracle_eigs), dtype=np.complex128)
    finite = eigs[~is_at_infinity(eigs)] if eigs.size else eigs
    violations: List[str] = []

    t = np.linspace(0.0, 1.0, samples_per_edge)
    sampled = []
    for start, end in g.segments():
        if margin is not None and finite.size and _distance_to_segment(finite, start, end) > margin:
            continue
        sampled.append(start + t * (end - start))
    points = np.concatenate(sampled) if sampled else np.empty(0, dtype=np.complex128)

    min_ratio = math.inf
    if points.size:
        sigma = smallest_sv_batch(P.A, P.B, points, workers=workers)
        ratios = sigma / (eps * (1.0 + np.abs(points)))
        min_ratio = float(np.min(ratios))
        hits = int(np.count_nonzero(ratios <= 1.0))
        if hits:
            worst = points[int(np.argmin(ratios))]
            violations.append(
                f"pseudospectrum meets the grid at {hits} sampled points (worst near {worst:.6g})"
            )

    boxes: List[Tuple[complex, Optional[Tuple[int, int]]]] = []
    seen = {}
    for lam in finite:
        try:
            box = box_of(g, lam)
        except OnGridLineError:
            violations.append(f"eigenvalue {lam:.6g} lies on a grid line")
            boxes.append((complex(lam), None))
            continue
        boxes.append((complex(lam), box))
        if box is None:
            violations.append(f"eigenvalue {lam:.6g} lies outside the grid")
        elif box in seen:
            violations.append(f"eigenvalues {seen[box]:.6g} and {lam:.6g} share box {box}")
        else:
            seen[box] = complex(lam)
    if finite.size < eigs.size:
        violations.append(f"{eigs.size - finite.size} eigenvalues at infinity")

    logging.debug(
        f"shattering check: {len(sampled)} segments, {points.size} samples, min ratio {min_ratio:.3e}"
    )
    return ShatterReport(
        shattered=not violations,
        min_grid_sigma_ratio=min_ratio,
        eigenvalue_boxes=boxes,
        violations=violations,
        segments_sampled=len(sampled),
        samples=int(points.size),
    )


@dataclass
class GridSearch:
    """Outcome of search_shattering_grid; ``grid`` and ``report`` belong to the last grid verified"""

    found: bool
    grid: Grid
    report: ShatterReport
    attempts: int
    screened: int

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "attempts": self.attempts,
            "screened": self.screened,
            "grid": self.grid.to_dict(),
            **self.report.to_dict(),
        }


def _screen(P: Pencil, g: Grid, eps: float, eigs: np.ndarray) -> bool:
    """Cheap necessary condition for shattering.

    Every eigenvalue needs a box of its own, and the points of that box's four
    edges closest to the eigenvalue must lie outside Λ_ε(A, B).
    """
    if eigs.size == 0 or np.any(is_at_infinity(eigs)):
        return False
    seen = set()
    nearest = []
    for lam in eigs:
        try:
            box = box_of(g, lam)
        except OnGridLineError:
            return False
        if box is None or box in seen:
            return False
        seen.add(box)
        re_lo = g.z0.real + box[0] * g.omega
        im_lo = g.z0.imag + box[1] * g.omega
        nearest.extend(
            [
                complex(re_lo, lam.imag),
                complex(re_lo + g.omega, lam.imag),
                complex(lam.real, im_lo),
                complex(lam.real, im_lo + g.omega),
            ]
        )
    points = np.asarray(nearest, dtype=np.complex128)
    sigma = smallest_sv_batch(P.A, P.B, points)
    return bool(np.all(sigma > eps * (1.0 + np.abs(points))))


def search_shattering_grid(
    P: Pencil,
    eps: float,
    omega: float,
    oracle_eigs: Sequence[complex],
    rng: RngStream,
    attempts: int = DEFAULT_GRID_ATTEMPTS,
    samples_per_edge: int = DEFAULT_SAMPLES_PER_EDGE,
    margin: Optional[float] = None,
    workers: int = 1,
) -> GridSearch:
    """Draw random grids of box side omega until one shatters Λ_ε(A, B).

    Attempt i draws its corner from the stream ``rng/grid-i``. Draws that fail
    the cheap screen are discarded without sampling their edges.
    """
    if attempts < 1:
        raise ValueError(f"attempts must be at least 1, got {attempts}")
    eigs = np.asarray(list(oracle_eigs), dtype=np.complex128)
    screened = 0
    first: Optional[Grid] = None
    last: Optional[Tuple[Grid, ShatterReport]] = None
    for attempt in range(attempts):
        g = random_grid(omega, rng.child(f"grid-{attempt}"))
        first = first or g
        if not _screen(P, g, eps, eigs):
            continue
        screened += 1
        report = verify_shattering(P, g, eps, eigs, samples_per_edge, margin, workers)
        if report.shattered:
            logging.info(f"grid search: attempt {attempt + 1} shatters the {eps:g}-pseudospectrum")
            return GridSearch(True, g, report, attempt + 1, screened)
        last = (g, report)

    logging.warning(f"grid search: no shattering grid with omega={omega:g} in {attempts} attempts")
    if last is None:
        last = (first, verify_shattering(P, first, eps, eigs, samples_per_edge, margin, workers))
    return GridSearch(False, last[0], last[1], attempts, screened)


def projective(value: complex) -> Tuple[complex, complex]:
    """⟨α, β⟩ representative of an eigenvalue; at-infinity maps to ⟨1, 0⟩"""
    value = complex(value)
    if math.isinf(value.real) or math.isinf(value.imag):
        return 1.0 + 0j, 0j
    return value, 1.0 + 0j


def chordal_distance(l1: Tuple[complex, complex], l2: Tuple[complex, complex]) -> float:
    """|α₁β₂ − β₁α₂| / (‖(α₁, β₁)‖ ‖(α₂, β₂)‖), a metric on projective eigenvalues"""
    a1, b1 = complex(l1[0]), complex(l1[1])
    a2, b2 = complex(l2[0]), complex(l2[1])
    n1 = math.hypot(abs(a1), abs(b1))
    n2 = math.hypot(abs(a2), abs(b2))
    if n1 == 0 or n2 == 0:
        raise DegeneratePointError("the pair (0, 0) is not a projective eigenvalue")
    return min(1.0, abs(a1 * b2 - b1 * a2) / (n1 * n2))
