import numpy as np
import pytest

from pencil_rpd import config as pencil_config
from pencil_rpd.pencil import Pencil
from pencil_rpd.substrate.matrix_market import write_matrix
from pencil_rpd.substrate.rng import RngStream, ginibre

# well-separated, off every line of the small test grids
SMALL_SPECTRUM = np.array([-1.3 + 0.1j, -0.6 - 0.35j, 0.4 + 0.6j, 1.2 - 0.15j])


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep user config files and PENCIL_* variables out of the tests"""
    monkeypatch.setattr(pencil_config, "CONFIG_FILE", tmp_path / "config" / "config.json")
    for key in ("PENCIL_EPS", "PENCIL_MODE", "PENCIL_CUTOFF", "PENCIL_OUT", "PENCIL_THREADS"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("PENCIL_THREADS", "2")


@pytest.fixture
def rng():
    return RngStream(1234)


@pytest.fixture
def diag_pencil():
    return Pencil(np.diag(SMALL_SPECTRUM), np.eye(4, dtype=np.complex128), name="diag")


@pytest.fixture
def similar_pencil(rng):
    """(X·diag(λ)·Y⁻¹, X·Y⁻¹) with well-conditioned X, Y and the small spectrum"""
    n = SMALL_SPECTRUM.size
    X = np.eye(n) + 0.3 * ginibre(n, rng.child("X"))
    Y = np.eye(n) + 0.3 * ginibre(n, rng.child("Y"))
    Yinv = np.linalg.inv(Y)
    return Pencil(X @ np.diag(SMALL_SPECTRUM) @ Yinv, X @ Yinv, name="similar")


@pytest.fixture
def write_pencil(tmp_path):
    def _write(A, B, stem="pencil"):
        a_path = write_matrix(tmp_path / f"{stem}_A.mtx", A)
        b_path = write_matrix(tmp_path / f"{stem}_B.mtx", B)
        return a_path, b_path

    return _write
