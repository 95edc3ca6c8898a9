import numpy as np
import pytest
from numpy.testing import assert_allclose

from pencil_rpd.exceptions import RecipeError, SingularMatrixError
from pencil_rpd.harness import recipes
from pencil_rpd.harness.models.records import ExperimentConfig
from pencil_rpd.harness.recipes import (
    build_pencil,
    make_custom,
    make_jordan,
    make_planted,
    make_singular_b,
    make_singular_pencil,
    planted_eigenvalues,
)
from pencil_rpd.substrate.dense import is_at_infinity, ref_eig, smallest_sv
from pencil_rpd.substrate.rng import RngStream


def _max_norm(P):
    return max(P.norms())


def test_planted_eigenvalues():
    lam = planted_eigenvalues(50)
    assert lam[0] == -2.0
    assert lam[-1] == pytest.approx(2.0)
    assert_allclose(np.diff(lam), 4 / 49)


def test_planted_pencil_has_the_planted_spectrum():
    P = make_planted(20, RngStream(71))

    assert _max_norm(P) == pytest.approx(1.0)
    values = np.sort(ref_eig(P).real)
    assert_allclose(values, planted_eigenvalues(20), atol=1e-8)


def test_planted_recipe_gives_up_after_repeated_singular_draws(monkeypatch):
    def always_singular(*args, **kwargs):
        raise SingularMatrixError("singular")

    monkeypatch.setattr(recipes, "solve_right", always_singular)
    with pytest.raises(RecipeError):
        make_planted(4, RngStream(72))


def test_jordan_block():
    P = make_jordan(10)
    assert _max_norm(P) == pytest.approx(1.0)
    assert np.count_nonzero(P.A) == 9
    assert_allclose(P.B, np.eye(10))


def test_singular_b_is_singular():
    P = make_singular_b(30, RngStream(73))
    assert _max_norm(P) == pytest.approx(1.0)
    assert smallest_sv(P.B) < 1e-12


def test_singular_pencil_is_singular():
    P = make_singular_pencil()
    assert P.n == 4
    assert P.norms()[0] == pytest.approx(0.6940, abs=1e-3)
    assert P.norms()[1] == pytest.approx(1.0)
    assert abs(np.linalg.det(P.A - 2.5 * P.B)) < 1e-12
    assert abs(np.linalg.det(P.A + 0.7j * P.B)) < 1e-12


def test_custom_recipe_reads_both_files(write_pencil):
    a_path, b_path = write_pencil(np.diag([2.0, 4.0]), np.eye(2))
    P = make_custom(a_path, b_path)

    assert P.name == "custom"
    assert_allclose(np.diagonal(P.A).real, [0.5, 1.0])


def test_build_pencil_dispatches_on_name():
    cfg = ExperimentConfig(name="singular_b", n=6)
    P = build_pencil(cfg, RngStream(74))
    assert P.name == "singular_b"
    assert np.count_nonzero(is_at_infinity(ref_eig(P))) >= 1


@pytest.mark.parametrize(
    "kwargs",
    [
        {"name": "unknown"},
        {"name": "planted", "runs": 0},
        {"name": "planted", "eps_user": 1.5},
        {"name": "singular_pencil", "n": 5},
        {"name": "custom"},
        {"name": "jordan", "n": 1},
    ],
)
def test_experiment_config_validation(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


def test_experiment_config_defaults():
    assert ExperimentConfig(name="planted").n == 50
    assert ExperimentConfig(name="singular_b").n == 200
    assert ExperimentConfig(name="singular_pencil").n == 4
