"""Matrix Market I/O for dense complex matrices. All file access of the substrate lives here."""

from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from ..exceptions import MatrixMarketError
from ..utils import atomic_write
from .dense import as_cmatrix


def read_matrix(path) -> np.ndarray:
    """Read a Matrix Market file into a dense complex matrix.

    "array" files are read as-is; "coordinate" files are densified.
    """
    path = Path(path)
    try:
        data = scipy.io.mmread(str(path))
    except OSError as e:
        raise MatrixMarketError(f"cannot read {path}: {e}") from e
    except Exception as e:
        raise MatrixMarketError(f"{path} is not a valid Matrix Market file: {e}") from e
    if scipy.sparse.issparse(data):
        data = data.toarray()
    try:
        return as_cmatrix(data, name=str(path))
    except ValueError as e:
        raise MatrixMarketError(f"{path}: {e}") from e


def write_matrix(path, M) -> Path:
    """Write M as "array complex general" with full double precision"""
    M = as_cmatrix(M, check_finite=False)

    def _write(tmp: Path) -> None:
        with open(tmp, "wb") as handle:
            scipy.io.mmwrite(handle, M, field="complex", symmetry="general", precision=17)

    try:
        return atomic_write(Path(path), _write)
    except OSError as e:
        raise MatrixMarketError(f"cannot write {path}: {e}") from e
