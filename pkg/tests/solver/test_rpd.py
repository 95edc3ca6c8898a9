import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from pencil_rpd.harness.recipes import make_jordan, make_planted
from pencil_rpd.pencil import Pencil
from pencil_rpd.solver.models.results import Mode
from pencil_rpd.solver.rpd import emit_diag_result, perturb, rpd, rpd_normalized, rpd_setup
from pencil_rpd.solver.rpd_metrics import (
    EigenOrder,
    diag_error,
    diag_errors,
    eigen_error,
    forward_bound,
    gap_and_kappaV,
    residuals,
)
from pencil_rpd.substrate.dense import ref_eig, ref_eig_decomposition, unit_columns
from pencil_rpd.substrate.matrix_market import read_matrix
from pencil_rpd.substrate.rng import RngStream


@pytest.fixture(scope="module")
def planted():
    return make_planted(12, RngStream(61).child("draw-0"))


@pytest.fixture(scope="module")
def planted_result(planted):
    return rpd(planted, 1e-6, Mode.PRACTICAL, RngStream(62))


def test_practical_setup():
    setup = rpd_setup(50, 1e-6, Mode.PRACTICAL)
    gamma = 1e-6 / 16

    assert setup.gamma == pytest.approx(gamma)
    assert setup.alpha == 0.0
    assert setup.omega == pytest.approx(gamma / 50)
    assert setup.params.epsilon == pytest.approx(gamma / 50)
    assert setup.params.theta == pytest.approx(1 / 50)


def test_theoretical_setup():
    n, eps = 8, 1e-2
    setup = rpd_setup(n, eps, Mode.THEORETICAL)
    gamma = eps / 16
    alpha = math.ceil(2 * math.log(1 / gamma, n) + 3) / 2

    assert setup.alpha == pytest.approx(alpha)
    assert 0 < setup.params.epsilon < gamma
    assert setup.omega == pytest.approx(gamma**4 / 4 * n ** (-(8 * alpha + 13) / 3))


def test_setup_validates_accuracy():
    with pytest.raises(ValueError):
        rpd_setup(4, 1.0, Mode.PRACTICAL)
    with pytest.raises(ValueError):
        rpd_setup(4, 0.0, Mode.PRACTICAL)


def test_setup_for_a_scalar_pencil():
    assert rpd_setup(1, 1e-3, Mode.PRACTICAL).params.theta == 0.5


def test_perturb_uses_the_named_streams(diag_pencil):
    a = perturb(diag_pencil, 1e-3, RngStream(63))
    b = perturb(diag_pencil, 1e-3, RngStream(63))
    assert_array_equal(a.A, b.A)
    assert 0 < np.linalg.norm(a.A - diag_pencil.A, 2) < 1e-2


def test_rpd_reaches_the_target_accuracy(planted, planted_result):
    assert diag_error(planted, planted_result) <= math.log10(1e-6)
    assert not np.any(planted_result.at_infinity)
    assert eigen_error(planted_result.eigenvalues(), ref_eig(planted), EigenOrder.REAL) < 1e-3


def test_rpd_splits_stay_balanced(planted_result):
    assert planted_result.stats.splits
    for split in planted_result.stats.splits:
        assert 0.2 <= split.k / split.m <= 0.8


def test_rpd_is_bit_reproducible(planted, planted_result):
    again = rpd(planted, 1e-6, Mode.PRACTICAL, RngStream(62))
    assert_array_equal(again.S, planted_result.S)
    assert_array_equal(again.T, planted_result.T)
    assert_array_equal(again.D, planted_result.D)


def test_rpd_rejects_unnormalized_input():
    P = Pencil(3 * np.eye(2), np.eye(2))
    with pytest.raises(ValueError, match="rpd_normalized"):
        rpd(P, 1e-4, Mode.PRACTICAL, RngStream(64))


def test_rpd_normalized_reports_the_original_scale(diag_pencil):
    scaled = Pencil(5 * diag_pencil.A, 5 * diag_pencil.B)
    res = rpd_normalized(scaled, 1e-4, Mode.PRACTICAL, RngStream(65))

    assert res.scale == pytest.approx(5 * np.max(np.abs(np.diagonal(diag_pencil.A))))
    errors = diag_errors(scaled, res)
    assert errors["diag_error"] <= math.log10(1e-4) + math.log10(res.scale)
    assert_allclose(np.sort_complex(res.D), np.sort_complex(np.diagonal(diag_pencil.A)), atol=1e-3)


def test_emit_diag_result(tmp_path, planted_result):
    paths = emit_diag_result(planted_result, tmp_path / "out")

    assert_array_equal(read_matrix(paths["S"]), planted_result.S)
    assert_array_equal(read_matrix(paths["T"]), planted_result.T)
    data = json.loads(paths["D"].read_text())
    assert data["n"] == 12
    assert len(data["D"]) == 12
    assert data["files"] == {"S": "S.mtx", "T": "T.mtx"}
    assert set(data["grid"]) == {"re0", "im0", "omega", "s1", "s2"}
    assert data["params"]["mode"] == "practical"


def test_b_residual_is_the_perturbation_of_b(planted, planted_result):
    _, b_residual = residuals(planted, planted_result)

    assert b_residual == pytest.approx(
        np.linalg.norm(planted.B - planted_result.perturbed.B, 2), rel=1e-3
    )
    assert b_residual <= 1e-6 / 4


def test_rpd_on_the_zero_pencil():
    n = 4
    zero = Pencil(np.zeros((n, n)), np.zeros((n, n)))
    res = rpd(zero, 0.1, Mode.PRACTICAL, RngStream(66))

    a_residual, b_residual = residuals(zero, res)
    assert a_residual <= 0.1
    assert b_residual <= 0.1


@pytest.mark.parametrize("seed", [67, 68, 69])
def test_rpd_on_an_ill_conditioned_jordan_block(seed):
    jordan = make_jordan(30)
    res = rpd(jordan, 1e-6, Mode.PRACTICAL, RngStream(seed))

    assert np.linalg.cond(res.T) > 1e4
    assert res.metrics["refined_columns"] > 0
    assert res.metrics["column_residual"] < 1e-13
    assert diag_error(jordan, res) <= math.log10(1e-6)


def test_eigenvectors_lie_near_the_true_ones(planted, planted_result):
    gap, kappa = gap_and_kappaV(planted)
    _, vec_bound = forward_bound(planted, kappa, gap, 1e-6)
    alpha, beta, vectors = ref_eig_decomposition(planted.A, planted.B)
    values = alpha / beta

    for d, t in zip(planted_result.D, unit_columns(planted_result.T).T):
        v = vectors[:, np.argmin(np.abs(values - d))]
        overlap = np.vdot(v, t)
        phase = overlap / abs(overlap)
        assert np.linalg.norm(t - phase * v) <= vec_bound


def test_eigenvalue_error_follows_the_accuracy(planted):
    oracle = ref_eig(planted)
    gap, kappa = gap_and_kappaV(planted)
    medians = []
    for eps in (1e-4, 1e-6, 1e-8):
        eig_bound, _ = forward_bound(planted, kappa, gap, eps)
        errors = [
            eigen_error(
                rpd(planted, eps, Mode.PRACTICAL, RngStream(70).child(f"run-{r}")).eigenvalues(),
                oracle,
                EigenOrder.REAL,
            )
            for r in range(3)
        ]
        assert max(errors) <= eig_bound
        medians.append(float(np.median(errors)))

    assert medians[0] > medians[1] > medians[2]


def test_perturb_with_unit_variance(diag_pencil):
    rng = RngStream(63)
    ginibre_draw = perturb(diag_pencil, 1.0, rng)
    gaussian_draw = perturb(diag_pencil, 1.0, rng, variance=1.0)

    # same streams, entries scaled by sqrt(n)
    assert_allclose(gaussian_draw.A - diag_pencil.A, 2.0 * (ginibre_draw.A - diag_pencil.A))
    assert_allclose(gaussian_draw.B - diag_pencil.B, 2.0 * (ginibre_draw.B - diag_pencil.B))
