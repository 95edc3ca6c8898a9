import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ...solver.models.results import BaseModel, Mode

RECIPE_NAMES = ("planted", "jordan", "singular_b", "singular_pencil", "custom")

DEFAULT_SIZES = {
    "planted": 50,
    "jordan": 50,
    "singular_b": 200,
    "singular_pencil": 4,
}


@dataclass
class ExperimentConfig(BaseModel):
    """One batch of runs on a named recipe.

    Each of the ``draws`` pencils is drawn once and diagonalized ``runs``
    times on fresh random streams. With ``comparator`` every run is paired
    with the inversion-based comparator on the same perturbation and grid.
    """

    name: str
    n: Optional[int] = None
    eps_user: float = 1e-6
    runs: int = 1
    seed: int = 0
    cutoff: int = 1
    comparator: bool = False
    draws: int = 1
    mode: Mode = Mode.PRACTICAL
    a_path: Optional[Path] = None
    b_path: Optional[Path] = None

    def __post_init__(self):
        if self.name not in RECIPE_NAMES:
            raise ValueError(f"unknown recipe {self.name!r}; choose from {', '.join(RECIPE_NAMES)}")
        self.mode = Mode(self.mode)
        if self.runs < 1:
            raise ValueError(f"runs must be at least 1, got {self.runs}")
        if self.draws < 1:
            raise ValueError(f"draws must be at least 1, got {self.draws}")
        if not 0 < self.eps_user < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps_user}")
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be at least 1, got {self.cutoff}")
        if self.name == "custom":
            if self.a_path is None or self.b_path is None:
                raise ValueError("the custom recipe needs both matrix files")
            return
        if self.name == "singular_pencil":
            if self.n not in (None, 4):
                raise ValueError(f"the singular pencil is 4x4, got n={self.n}")
            self.n = 4
        elif self.n is None:
            self.n = DEFAULT_SIZES[self.name]
        elif self.n < 2:
            raise ValueError(f"recipe {self.name} needs n >= 2, got {self.n}")


@dataclass
class RunRecord(BaseModel):
    run: int
    draw: int = 0
    algorithm: str = "rpd"
    diag_error: float = math.inf
    diag_error_right: float = math.inf
    eigen_error: Optional[float] = None
    reference_error: Optional[float] = None
    target_distance: Optional[float] = None
    success: bool = False
    splits: List[Tuple[int, int]] = field(default_factory=list)
    lines_per_split: List[int] = field(default_factory=list)
    efficiency_factor: Optional[float] = None
    delegated: int = 0
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def relative_splits(self) -> List[float]:
        return [k / m for m, k in self.splits]

    def to_row(self) -> Dict[str, Any]:
        """Flat form for the per-run CSV table"""
        return {
            "draw": self.draw,
            "run": self.run,
            "algorithm": self.algorithm,
            "diag_error": self.diag_error,
            "diag_error_right": self.diag_error_right,
            "eigen_error": self.eigen_error,
            "reference_error": self.reference_error,
            "target_distance": self.target_distance,
            "success": self.success,
            "splits": ";".join(f"{m}:{k}" for m, k in self.splits),
            "lines_per_split": ";".join(str(count) for count in self.lines_per_split),
            "efficiency_factor": self.efficiency_factor,
            "delegated": self.delegated,
            "wall_time": self.wall_time,
            "error": self.error or "",
        }


@dataclass
class ExperimentResult(BaseModel):
    config: ExperimentConfig
    records: List[RunRecord] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    def for_algorithm(self, algorithm: str) -> List[RunRecord]:
        return [r for r in self.records if r.algorithm == algorithm]
