from .deflate import DeflatePair, deflate
from .eigsolve import assemble, compute_params, eig
from .irs import (
    IrsOutput,
    irs,
    left_projector_approx,
    mobius_left,
    mobius_right,
    right_projector_approx,
)
from .models.results import DiagResult, EigParams, EigResult, Mode, RunStats, SplitRecord
from .rpd import emit_diag_result, rpd, rpd_normalized
from .rrf import GrurvResult, RurvResult, grurv2, rank_count, rulv, rurv

__all__ = [
    "DeflatePair",
    "DiagResult",
    "EigParams",
    "EigResult",
    "GrurvResult",
    "IrsOutput",
    "Mode",
    "RunStats",
    "RurvResult",
    "SplitRecord",
    "assemble",
    "compute_params",
    "deflate",
    "eig",
    "emit_diag_result",
    "grurv2",
    "irs",
    "left_projector_approx",
    "mobius_left",
    "mobius_right",
    "rank_count",
    "right_projector_approx",
    "rpd",
    "rpd_normalized",
    "rulv",
    "rurv",
]
