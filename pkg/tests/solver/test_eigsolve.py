import numpy as np
import pytest
from numpy.testing import assert_allclose

from pencil_rpd.exceptions import NoSplitFoundError, ParameterUnderflowError
from pencil_rpd.grid import Grid, Orientation
from pencil_rpd.pencil import Pencil
from pencil_rpd.solver.eigsolve import LineSearch, compute_params, eig, split_bounds
from pencil_rpd.solver.models.results import EigParams, Mode
from pencil_rpd.substrate.rng import RngStream

SMALL_GRID = Grid(complex(-2, -2), 0.25, 16, 16)


def _params(n, **overrides):
    values = dict(mode=Mode.PRACTICAL, epsilon=1e-3, beta=1e-3, theta=0.25, n_global=n)
    values.update(overrides)
    return EigParams(**values)


@pytest.mark.parametrize("m, bounds", [(2, (1, 1)), (5, (1, 4)), (10, (2, 8)), (50, (10, 40))])
def test_split_bounds(m, bounds):
    assert split_bounds(m) == bounds


def test_practical_params():
    derived = compute_params(Mode.PRACTICAL, 4, 4, 1e-3, 1e-3, 0.25, SMALL_GRID)

    assert derived.zeta == 10
    assert derived.p == 12
    assert derived.rank_threshold == pytest.approx(np.sqrt(0.25 / 100), rel=1e-6)
    assert 0 < derived.delta < 1


def test_theoretical_threshold_carries_the_cubic_factor():
    practical = compute_params(Mode.PRACTICAL, 4, 4, 1e-3, 1e-3, 0.25, SMALL_GRID)
    theoretical = compute_params(Mode.THEORETICAL, 4, 4, 1e-3, 1e-3, 0.25, SMALL_GRID)

    assert theoretical.rank_threshold == pytest.approx(practical.rank_threshold / 64, rel=1e-6)
    assert theoretical.p >= 7


def test_theoretical_params_underflow():
    args = (100, 100, 1e-120, 1e-100, 0.01, Grid(0j, 1.0, 8, 8))
    with pytest.raises(ParameterUnderflowError):
        compute_params(Mode.THEORETICAL, *args, alpha=5.0)
    # practical mode ignores the underflow
    assert compute_params(Mode.PRACTICAL, *args, alpha=5.0).p > 0


def test_line_search_follows_the_count():
    search = LineSearch(Grid(0j, 1.0, 16, 16), Orientation.VERTICAL, budget=4)
    visited = []
    for direction in (1, -1, -1):
        line = search.next_line()
        visited.append(line.index)
        search.report(line, direction)
    visited.append(search.next_line().index)

    assert visited == [8, 12, 10, 9]
    assert search.next_line() is None


def test_line_search_falls_back_to_median_order():
    search = LineSearch(Grid(0j, 1.0, 16, 16), Orientation.HORIZONTAL, budget=4)
    first = search.next_line()
    search.report(first, None)

    assert [search.next_line().index for _ in range(3)] == [4, 12, 2]


def test_eig_diagonalizes_a_small_pencil(similar_pencil):
    res = eig(similar_pencil, SMALL_GRID, _params(4), RngStream(51))

    expected = np.sort_complex(np.array([-1.3 + 0.1j, -0.6 - 0.35j, 0.4 + 0.6j, 1.2 - 0.15j]))
    assert_allclose(np.sort_complex(res.eigenvalues()), expected, atol=1e-8)

    lhs = similar_pencil.A @ res.T @ res.D2
    rhs = similar_pencil.B @ res.T @ res.D1
    assert np.linalg.norm(lhs - rhs, 2) <= 1e-8 * np.linalg.norm(res.T, 2)


def test_eig_records_balanced_splits(diag_pencil):
    res = eig(diag_pencil, SMALL_GRID, _params(4), RngStream(52))

    assert [(s.m, s.k) for s in res.stats.splits][0] == (4, 2)
    for split in res.stats.splits:
        lo, hi = split_bounds(split.m)
        assert lo <= split.k <= hi
        assert split.lines_checked >= 1
    assert res.stats.splits[0].orientation == "vertical"
    depths = [s.depth for s in res.stats.splits]
    assert depths[0] == 0
    assert depths == sorted(depths)
    assert res.stats.pseudo_flops == sum(s.m**3 * s.lines_checked for s in res.stats.splits)


def test_eig_is_reproducible(similar_pencil):
    a = eig(similar_pencil, SMALL_GRID, _params(4), RngStream(53))
    b = eig(similar_pencil, SMALL_GRID, _params(4), RngStream(53))
    np.testing.assert_array_equal(a.T, b.T)
    np.testing.assert_array_equal(a.D1, b.D1)


def test_eig_delegates_below_the_cutoff(similar_pencil):
    res = eig(similar_pencil, SMALL_GRID, _params(4, cutoff=4), RngStream(54))

    assert res.stats.delegated == 1
    assert res.stats.splits == []
    lhs = similar_pencil.A @ res.T @ res.D2
    rhs = similar_pencil.B @ res.T @ res.D1
    assert_allclose(lhs, rhs, atol=1e-10)


def test_eig_single_matrix_mode(diag_pencil):
    res = eig(
        Pencil(diag_pencil.A, np.eye(4)), SMALL_GRID, _params(4, single_matrix=True), RngStream(55)
    )
    assert_allclose(np.sort_complex(res.eigenvalues()), np.sort_complex(np.diagonal(diag_pencil.A)), atol=1e-8)


def test_eig_without_a_dividing_line():
    P = Pencil(np.diag([0.3 + 0.3j, 0.35 + 0.4j]), np.eye(2))
    g = Grid(complex(-2, -2), 1.0, 4, 4)

    with pytest.raises(NoSplitFoundError) as info:
        eig(P, g, _params(2), RngStream(56))
    assert info.value.m == 2
    assert info.value.lines_checked == 6
