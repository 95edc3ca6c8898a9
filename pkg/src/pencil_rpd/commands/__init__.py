from .compare import compare
from .config import config
from .diagonalize import diagonalize
from .experiment import experiment
from .pseudospectrum import pseudospectrum
from .shatter_check import shatter_check

__all__ = [
    "diagonalize",
    "pseudospectrum",
    "shatter_check",
    "experiment",
    "compare",
    "config",
]
