from .comparator import comparator_inversion
from .experiment import emit, run_experiment
from .models.records import ExperimentConfig, ExperimentResult, RunRecord
from .recipes import (
    make_custom,
    make_jordan,
    make_planted,
    make_singular_b,
    make_singular_pencil,
)

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "RunRecord",
    "comparator_inversion",
    "emit",
    "make_custom",
    "make_jordan",
    "make_planted",
    "make_singular_b",
    "make_singular_pencil",
    "run_experiment",
]
