"""Exception hierarchy shared by the library and the command-line surface."""


class PencilError(Exception):
    """Base class for every error raised by pencil_rpd."""


class SingularMatrixError(PencilError):
    pass


class ShapeMismatchError(PencilError):
    pass


class InvalidOmegaError(PencilError):
    pass


class OnGridLineError(PencilError):
    pass


class EmptyHalfError(PencilError):
    pass


class UnboundedPseudospectrumError(PencilError):
    pass


class DegeneratePointError(PencilError):
    pass


class InvalidKError(PencilError):
    pass


class NoSplitFoundError(PencilError):
    """No grid line produced an acceptable eigenvalue split.

    In exact arithmetic a shattered grid always contains such a line, so this
    points at a shattering violation or a rank threshold that is too strict.
    """

    def __init__(self, message: str, m: int = 0, lines_checked: int = 0):
        super().__init__(message)
        self.m = m
        self.lines_checked = lines_checked


class ParameterUnderflowError(PencilError):
    pass


class LengthMismatchError(PencilError):
    pass


class OracleUnavailableError(PencilError):
    pass


class RecipeError(PencilError):
    pass


class MatrixMarketError(PencilError):
    pass
