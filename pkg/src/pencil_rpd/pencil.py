from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .exceptions import ShapeMismatchError
from .substrate.dense import as_cmatrix, spectral_norm


@dataclass(frozen=True)
class Pencil:
    """A pair (A, B) of equal-sized dense complex square matrices.

    Regularity is not checked here; it is a property of the draw, not of the
    container.
    """

    A: np.ndarray
    B: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        A = as_cmatrix(self.A, "A")
        B = as_cmatrix(self.B, "B")
        if A.shape[0] != A.shape[1] or B.shape != A.shape:
            raise ShapeMismatchError(
                f"pencil needs square matrices of equal size, got A {A.shape} and B {B.shape}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def hermitian(self) -> "Pencil":
        return Pencil(self.A.conj().T, self.B.conj().T, self.name)

    def norms(self) -> Tuple[float, float]:
        return spectral_norm(self.A), spectral_norm(self.B)

    def normalized(self) -> Tuple["Pencil", float]:
        """Scale both matrices by 1/max(‖A‖₂, ‖B‖₂).

        Returns the scaled pencil and the scale factor that was divided out
        (1.0 for the zero pencil).
        """
        scale = max(self.norms())
        if scale == 0.0:
            return self, 1.0
        return Pencil(self.A / scale, self.B / scale, self.name), scale

    def at(self, z: complex) -> np.ndarray:
        return self.A - z * self.B
