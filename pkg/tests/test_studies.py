import numpy as np
import pytest

from nngpkrig.bench import BenchmarkCase
from nngpkrig.embed import Dataset, hypersphere_embed
from nngpkrig.errors import NotPositiveDefinite
from nngpkrig.gp import kriging_weights
from nngpkrig.kernels import MaternSpec, NNGPSpec, gram_blocks, nngp_grid
from nngpkrig.studies import (
    ArmWeights,
    BenchmarkConfig,
    DegenerateKernel,
    benchmark_iteration,
    design_points,
    predict,
    prediction_points,
    prepare_inputs,
    run_benchmark,
    scan_validity,
    summary_table,
    weight_correspondence,
)


def test_prediction_points():
    x = np.array([0.75, 0.25, 0.5])
    np.testing.assert_allclose(prediction_points(x), [0.375, 0.625])
    np.testing.assert_allclose(prediction_points(x, "center"), [0.5])
    np.testing.assert_allclose(prediction_points(np.array([0.8])), [0.4])
    with pytest.raises(ValueError):
        prediction_points(x, "edges")


def test_design_points():
    np.testing.assert_allclose(design_points("grid", 4), [0.25, 0.5, 0.75, 1.0])
    np.testing.assert_allclose(design_points("sobol", 4), [0.5, 0.25, 0.75, 0.125])
    with pytest.raises(ValueError):
        design_points("halton", 4)


def test_weight_correspondence_picks_minimum():
    x = design_points("grid", 12)
    rhos = [0.2, 0.8, 3.0]
    best_rho, best, H_n, H_m = weight_correspondence(x, NNGPSpec(2, 1.0, 0.5, 2), rhos)
    assert H_n.shape == H_m.shape == (11, 12)
    for rho in rhos:
        _, d, _, _ = weight_correspondence(x, NNGPSpec(2, 1.0, 0.5, 2), [rho])
        assert best <= d
    assert best == pytest.approx(np.abs(H_n - H_m).max())
    assert best_rho in rhos


def test_weight_correspondence_unit_inputs_differ():
    x = design_points("grid", 12)
    a = weight_correspondence(x, NNGPSpec(2, 1.0, 0.5, 2), [0.5], matern_inputs="unit")
    b = weight_correspondence(x, NNGPSpec(2, 1.0, 0.5, 2), [0.5], matern_inputs="embedded")
    np.testing.assert_array_equal(a[2], b[2])
    assert not np.allclose(a[3], b[3])


def test_arm_weights_cache_budget(rng):
    X, Xp = rng.uniform(size=(15, 2)), rng.uniform(size=(6, 2))
    specs = [MaternSpec(1.5, r, 1.0) for r in (0.2, 0.5, 1.0)]
    cached = ArmWeights(specs, X, Xp, 1e-8)
    uncached = ArmWeights(specs, X, Xp, 1e-8, cache_bytes=0)
    for i, spec in enumerate(specs):
        Kff, Kpf, _ = gram_blocks(spec, X, Xp)
        np.testing.assert_array_equal(cached[i], uncached[i])
        np.testing.assert_allclose(cached[i], kriging_weights(Kff, Kpf, 1e-8), atol=1e-14)
    assert cached.grid.n_invalid == 0


def test_arm_weights_flags_invalid_nngp():
    Z = hypersphere_embed(design_points("grid", 50))
    specs = nngp_grid(20, 0.1, 2.0, 5, 2)
    w = ArmWeights(specs, Z, Z[:3], 1e-8)
    assert w.grid.n_invalid == w.not_pd + w.flat > 0
    assert all((w[i] is None) == (not ok) for i, ok in enumerate(w.valid))


def test_prepare_inputs_unit_sphere(rng):
    tr = Dataset(rng.uniform(2, 5, size=(10, 3)), rng.standard_normal(10))
    te = Dataset(rng.uniform(2, 5, size=(4, 3)), rng.standard_normal(4))
    U, Up, Z, Zp = prepare_inputs(tr, te)
    assert U.min() == 0.0 and U.max() == 1.0
    np.testing.assert_allclose(np.linalg.norm(Z, axis=1), 1.0)
    assert Zp.shape == (4, 6)


def small_config(name="friedman", **kw):
    noise = 1.0 if name == "friedman" else 0.0
    return BenchmarkConfig(BenchmarkCase(name, 30, 20, noise, seed=4), iterations=2,
                           nngp_grid_res=3, matern_rhos=(0.3, 1.0, 3.0), **kw)


def test_benchmark_iteration_fields():
    out = benchmark_iteration(small_config(), np.random.SeedSequence(1))
    assert set(out) == {"nngp", "matern_fixed", "matern_varied"}
    assert out["nngp"]["n_theta"] == 9 and out["matern_varied"]["n_theta"] == 12
    assert out["nngp"]["theta_tilde"] == out["nngp"]["best_theta"]
    assert out["matern_fixed"]["best_theta"]["family"] == "matern"
    for arm in out.values():
        s = arm["stats"]
        assert s["minRMSE"] <= s["maxRMSE"]
        assert s["mindiff"] <= s["meandiff"] <= s["maxdiff"]
        assert s["minkw"] <= s["meankw"] <= s["maxkw"]


def test_run_benchmark_deterministic():
    a, b = run_benchmark(small_config("borehole")), run_benchmark(small_config("borehole"))
    assert a == b
    assert len(a["iterations"]) == 2


def test_summary_table_layout():
    rows = summary_table(run_benchmark(small_config()), "Friedman")
    assert [r["statistic"] for r in rows][:3] == ["minRMSE", "maxRMSE", "maxdiff"]
    assert rows[2]["NNGP"] == "0 (0)"
    assert rows[-1]["Matérn nu=3/2"] == "0 (0)"


def test_predict_rejects_flat_nngp():
    bad = next(r for r in scan_validity([20]) if r["is_flat"])
    x = design_points("grid", 50)[:, None]
    ds = Dataset(x, np.sin(6 * x[:, 0]))
    with pytest.raises(DegenerateKernel) as exc:
        predict(ds, ds, NNGPSpec(20, bad["sigma_a"], bad["sigma_b"], 2), scale=False)
    assert "depth=20" in str(exc.value)


def test_degenerate_kernel_is_not_pd_error():
    err = DegenerateKernel(1e-13, "ctx")
    assert isinstance(err, NotPositiveDefinite)
    assert "ctx" in str(err)


def test_predict_matern_trend(rng):
    X = rng.uniform(size=(25, 2))
    y = 3.0 + 2.0 * X[:, 0] - X[:, 1]
    rows = predict(Dataset(X, y), Dataset(X[:4] * 0.9, y[:4]), MaternSpec(2.5, 0.5, 1.0),
                   trend="linear")
    want = 3.0 + 2.0 * 0.9 * X[:4, 0] - 0.9 * X[:4, 1]
    np.testing.assert_allclose([r["prediction"] for r in rows], want, atol=1e-6)
