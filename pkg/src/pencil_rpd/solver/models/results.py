from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ...grid import Grid
from ...pencil import Pencil
from ...utils import to_jsonable


class Mode(str, Enum):
    THEORETICAL = "theoretical"
    PRACTICAL = "practical"


@dataclass
class BaseModel:
    def to_dict(self) -> Dict[str, Any]:
        return {
            k: to_jsonable(v)
            for k, v in self.__dict__.items()
            if not k.startswith("_") and not callable(v)
        }


@dataclass
class EigParams(BaseModel):
    """Tuning parameters of the divide-and-conquer eigensolver.

    ``n_global`` is the size of the top-level problem; subproblems keep it.
    ``single_matrix`` switches to the standard eigenproblem of A (B stays I).
    """

    mode: Mode = Mode.PRACTICAL
    epsilon: float = 1e-6
    alpha: float = 0.0
    beta: float = 1e-6
    theta: float = 0.5
    n_global: int = 1
    cutoff: int = 1
    omega: Optional[float] = None
    gamma: Optional[float] = None
    single_matrix: bool = False

    def __post_init__(self):
        self.mode = Mode(self.mode)
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be at least 1, got {self.cutoff}")

    def child(self) -> "EigParams":
        """Parameters handed to both recursive calls"""
        if self.mode == Mode.THEORETICAL:
            return EigParams(
                mode=self.mode,
                epsilon=self.epsilon * 4.0 / 5.0,
                alpha=self.alpha,
                beta=self.beta / 3.0,
                theta=self.theta,
                n_global=self.n_global,
                cutoff=self.cutoff,
                omega=self.omega,
                gamma=self.gamma,
                single_matrix=self.single_matrix,
            )
        return self


@dataclass
class DerivedParams(BaseModel):
    zeta: int
    eta: float
    delta: float
    p: int
    rank_threshold: float


@dataclass
class SplitRecord(BaseModel):
    m: int
    k: int
    lines_checked: int
    orientation: str
    depth: int
    branch: str = ""
    coordinate: float = 0.0


@dataclass
class RunStats(BaseModel):
    splits: List[SplitRecord] = field(default_factory=list)
    pseudo_flops: float = 0.0
    delegated: int = 0

    def record(self, split: SplitRecord) -> None:
        self.splits.append(split)
        self.pseudo_flops += float(split.m) ** 3 * split.lines_checked

    def merge(self, *others: "RunStats") -> "RunStats":
        """Combine stats of a parent and its branches; splits are ordered by depth, then branch label"""
        merged = RunStats(
            splits=list(self.splits),
            pseudo_flops=self.pseudo_flops,
            delegated=self.delegated,
        )
        for other in others:
            merged.splits.extend(other.splits)
            merged.pseudo_flops += other.pseudo_flops
            merged.delegated += other.delegated
        merged.splits.sort(key=lambda s: (s.depth, s.branch))
        return merged

    @property
    def total_lines(self) -> int:
        return sum(s.lines_checked for s in self.splits)


@dataclass
class EigResult(BaseModel):
    T: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    stats: RunStats = field(default_factory=RunStats)

    @property
    def n(self) -> int:
        return self.T.shape[1]

    def eigenvalues(self) -> np.ndarray:
        d1 = np.diagonal(self.D1)
        d2 = np.diagonal(self.D2)
        with np.errstate(divide="ignore", invalid="ignore"):
            return d1 / d2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "d1": to_jsonable(np.diagonal(self.D1)),
            "d2": to_jsonable(np.diagonal(self.D2)),
            "stats": self.stats.to_dict(),
        }


@dataclass
class DiagResult(BaseModel):
    """Backward-stable diagonalization A ≈ S·diag(D)·T⁻¹, B ≈ S·T⁻¹.

    ``D`` holds 0 where ``at_infinity`` is set. ``scale`` is the factor the
    input pencil was divided by before solving (1.0 when it was not).
    """

    S: np.ndarray
    T: np.ndarray
    D: np.ndarray
    at_infinity: np.ndarray
    perturbed: Pencil
    grid: Grid
    params: EigParams
    stats: RunStats
    scale: float = 1.0
    algorithm: str = "rpd"
    metrics: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.T.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """D with at-infinity entries reported as complex infinity"""
        values = np.array(self.D, dtype=np.complex128)
        values[self.at_infinity] = complex(np.inf, 0.0)
        return values

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "n": self.n,
            "scale": self.scale,
            "D": [
                {"at_infinity": True} if flag else to_jsonable(complex(value))
                for value, flag in zip(self.D, self.at_infinity)
            ],
            "grid": self.grid.to_dict(),
            "params": self.params.to_dict(),
            "stats": self.stats.to_dict(),
            "metrics": to_jsonable(self.metrics),
        }
