import numpy as np
import pytest
from numpy.testing import assert_allclose

from pencil_rpd.exceptions import ShapeMismatchError
from pencil_rpd.pencil import Pencil


def test_pencil_coerces_to_complex():
    P = Pencil([[1, 2], [3, 4]], np.eye(2))
    assert P.A.dtype == np.complex128
    assert P.n == 2


def test_pencil_shape_mismatch_names_both_shapes():
    with pytest.raises(ShapeMismatchError, match=r"\(2, 2\).*\(3, 3\)"):
        Pencil(np.eye(2), np.eye(3))


def test_normalized_divides_by_the_larger_norm():
    P = Pencil(np.diag([4.0, 1.0]), np.diag([2.0, 2.0]))
    normalized, scale = P.normalized()

    assert scale == pytest.approx(4.0)
    assert max(normalized.norms()) == pytest.approx(1.0)
    assert_allclose(normalized.A * scale, P.A)


def test_zero_pencil_is_left_alone():
    P = Pencil(np.zeros((2, 2)), np.zeros((2, 2)))
    normalized, scale = P.normalized()
    assert scale == 1.0
    assert normalized is P


def test_at_and_hermitian(diag_pencil):
    z = 0.3 - 0.2j
    assert_allclose(diag_pencil.at(z), diag_pencil.A - z * np.eye(4))
    assert_allclose(diag_pencil.hermitian().A, diag_pencil.A.conj())
