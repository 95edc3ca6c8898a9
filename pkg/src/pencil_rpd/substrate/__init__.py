from .dense import (
    AT_INFINITY,
    MACHINE_EPS,
    as_cmatrix,
    condition_number,
    is_at_infinity,
    matmul,
    ql_full,
    qr_full,
    ref_eig,
    ref_eig_decomposition,
    rq_full,
    smallest_sv,
    solve,
    solve_right,
    spectral_norm,
    svd_values,
    unit_columns,
)
from .matrix_market import read_matrix, write_matrix
from .rng import RngStream, complex_gaussian, ginibre, haar_unitary

__all__ = [
    "AT_INFINITY",
    "MACHINE_EPS",
    "RngStream",
    "as_cmatrix",
    "complex_gaussian",
    "condition_number",
    "ginibre",
    "haar_unitary",
    "is_at_infinity",
    "matmul",
    "ql_full",
    "qr_full",
    "read_matrix",
    "ref_eig",
    "ref_eig_decomposition",
    "rq_full",
    "smallest_sv",
    "solve",
    "solve_right",
    "spectral_norm",
    "svd_values",
    "unit_columns",
    "write_matrix",
]
