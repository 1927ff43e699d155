import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nngpkrig.errors import AllThetaInvalid, InsufficientThetas, LengthMismatch, ShapeMismatch
from nngpkrig.kernels import MaternSpec
from nngpkrig.stats import (
    ThetaGrid,
    aggregate,
    compare_arm,
    kw_spread_stats,
    rmse,
    rmse_extrema,
    weight_diff_stats,
)


def test_rmse_values():
    t = np.array([1.0, 2.0])
    assert rmse(t, t) == 0.0
    assert rmse(t + 1, t) == 1.0
    assert rmse(t + [3, 4], t) == pytest.approx(np.sqrt(12.5))


def test_rmse_length_mismatch():
    with pytest.raises(LengthMismatch):
        rmse([1.0], [1.0, 2.0])


def _grid(k):
    return ThetaGrid([MaternSpec(1.5, 0.1 * (i + 1)) for i in range(k)], [True] * k)


def test_rmse_extrema_single_theta():
    H = [np.eye(2)]
    lo, hi, best = rmse_extrema(_grid(1), H, [1.0, 2.0], [1.5, 2.0])
    assert lo == hi and best == _grid(1).specs[0]


def test_rmse_extrema_exhaustive(rng):
    k = 7
    grid = _grid(k)
    Hs = [rng.standard_normal((4, 5)) for _ in range(k)]
    y, truth = rng.standard_normal(5), rng.standard_normal(4)
    errs = [rmse(H @ y, truth) for H in Hs]
    lo, hi, best = rmse_extrema(grid, Hs, y, truth)
    assert lo == min(errs) and hi == max(errs)
    assert best == grid.specs[int(np.argmin(errs))]


def test_rmse_extrema_skips_invalid(rng):
    grid = ThetaGrid(_grid(3).specs, [True, False, True])
    Hs = [np.eye(2), 100 * np.eye(2), 2 * np.eye(2)]
    lo, hi, _ = rmse_extrema(grid, Hs, [1.0, 1.0], [1.0, 1.0])
    assert lo == 0.0 and hi == 1.0
    with pytest.raises(AllThetaInvalid):
        rmse_extrema(ThetaGrid(grid.specs, [False] * 3), Hs, [1.0, 1.0], [1.0, 1.0])


def test_weight_diff_self():
    H = np.arange(6.0).reshape(2, 3)
    idx, *vals = weight_diff_stats(H, [H + 1, H.copy()])
    assert idx == 1 and vals == [0.0, 0.0, 0.0, 0.0]


def test_weight_diff_argmin():
    ref = np.zeros((2, 2))
    idx, mx, *_ = weight_diff_stats(ref, [np.full((2, 2), 0.3), np.full((2, 2), -0.2)])
    assert idx == 1 and mx == pytest.approx(0.2)


def test_weight_diff_plus_minus():
    ref = np.zeros((1, 2))
    _, mx, mn, mean, sd = weight_diff_stats(ref, [np.array([[0.1, -0.1]])])
    assert (mx, mn, mean, sd) == (0.1, 0.1, 0.1, 0.0)


def test_weight_diff_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        weight_diff_stats(np.zeros((2, 2)), [np.zeros((2, 3))])


def test_kw_identical():
    H = np.ones((3, 2))
    assert kw_spread_stats([H, H.copy(), H.copy()]) == (0.0, 0.0, 0.0, 0.0)


def test_kw_constant_offset():
    H = np.zeros((2, 2))
    mx, mn, mean, sd = kw_spread_stats([H, H + 0.2])
    assert mx == pytest.approx(0.1) and mn == pytest.approx(0.1) and mean == pytest.approx(0.1)
    assert sd == pytest.approx(0.0, abs=1e-15)


def test_kw_insufficient():
    with pytest.raises(InsufficientThetas):
        kw_spread_stats([np.eye(2), None])


@settings(max_examples=50, deadline=None)
@given(k=st.integers(2, 6), m=st.integers(1, 4), n=st.integers(1, 5), seed=st.integers(0, 2**32 - 1))
def test_stat_orderings_and_invariances(k, m, n, seed):
    rng = np.random.default_rng(seed)
    Hs = [rng.standard_normal((m, n)) for _ in range(k)]
    ref = rng.standard_normal((m, n))
    _, mx, mn, mean, _ = weight_diff_stats(ref, Hs)
    assert mn <= mean <= mx
    kw = kw_spread_stats(Hs)
    assert kw[1] <= kw[2] <= kw[0]
    # theta order does not matter for the kw spread
    perm = rng.permutation(k)
    np.testing.assert_allclose(kw_spread_stats([Hs[i] for i in perm]), kw, rtol=1e-12)
    # simultaneous permutation of training indices
    p = rng.permutation(n)
    np.testing.assert_allclose(kw_spread_stats([H[:, p] for H in Hs]), kw, rtol=1e-12)
    np.testing.assert_allclose(weight_diff_stats(ref[:, p], [H[:, p] for H in Hs])[1:],
                               weight_diff_stats(ref, Hs)[1:], rtol=1e-12)


def test_compare_arm_single_theta_zero_spread(rng):
    H = rng.standard_normal((3, 4))
    st_ = compare_arm(_grid(1), [H], rng.standard_normal(4), rng.standard_normal(3), H)
    assert st_.minRMSE == st_.maxRMSE
    assert (st_.maxdiff, st_.mindiff, st_.meandiff, st_.sddiff) == (0.0, 0.0, 0.0, 0.0)
    assert (st_.maxkw, st_.minkw, st_.meankw, st_.sdkw) == (0.0, 0.0, 0.0, 0.0)


def test_aggregate():
    runs = [{k: float(i) for k in ("minRMSE", "maxRMSE", "maxdiff", "mindiff", "meandiff",
                                   "sddiff", "maxkw", "minkw", "meankw", "sdkw")} for i in (1, 3)]
    agg = aggregate(runs)
    assert agg["minRMSE"] == (2.0, pytest.approx(np.sqrt(2.0)))
