"""End-to-end studies: validity scans, 1-D weight correspondence, benchmarks, prediction.

Each function returns plain Python data (lists of row dicts, or a report
dict) so the command-line layer only has to serialize.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .bench import BenchmarkCase, make_case
from .design import grid_1d, sobol_1d, spawn_seeds
from .embed import Dataset, hypersphere_embed, minmax_scale
from .errors import NotPositiveDefinite
from .gp import GPConfig, GPRegressor, fit_trend, kriging_weights
from .kernels import (
    DEFAULT_NUGGET,
    KernelSpec,
    MaternSpec,
    NNGPSpec,
    default_rho_grid,
    gram_blocks,
    matern_grid,
    nngp_gram,
    nngp_grid,
    validity_scan,
)
from .stats import STAT_NAMES, ThetaGrid, aggregate, compare_arm, rmse_extrema

log = logging.getLogger(__name__)

ARM_LABELS = {"nngp": "NNGP", "matern_fixed": "Matérn nu=3/2", "matern_varied": "Matérn"}


class DegenerateKernel(NotPositiveDefinite):
    """Kernel matrix is numerically flat: distinct points are perfectly correlated."""

    def __init__(self, gap, context=None):
        self.index = None
        self.value = float(gap)
        self.context = context
        msg = f"kernel matrix is flat (min correlation gap {gap:.3g})"
        ValueError.__init__(self, msg + (f" ({context})" if context else ""))


# --- validity scan -------------------------------------------------------


def scan_validity(depths: Sequence[int] = (2, 5, 10, 20), grid_res=20, sigma_min=0.1,
                  sigma_max=2.0, n=50, nugget=DEFAULT_NUGGET, eps_flat=linalg.EPS_FLAT):
    """Validity of NNGP kernels on a 1-D grid design, one row per (depth, sigma_a, sigma_b)."""
    if grid_res < 2:
        raise ValueError("grid_res must be >= 2")
    if not depths:
        raise ValueError("depths must be nonempty")
    Z = hypersphere_embed(grid_1d(n))
    rows = []
    for depth in depths:
        grid = nngp_grid(depth, sigma_min, sigma_max, grid_res, input_dim=Z.shape[1])
        for rep in validity_scan(grid, Z, nugget, eps_flat):
            rows.append({
                "depth": depth,
                "sigma_a": rep.spec.sigma_a,
                "sigma_b": rep.spec.sigma_b,
                "is_pd": rep.is_positive_definite,
                "is_flat": rep.is_flat,
                "min_gap": rep.min_correlation_gap,
            })
    return rows


def invalid_counts(rows) -> dict[int, int]:
    out: dict[int, int] = {}
    for r in rows:
        out.setdefault(r["depth"], 0)
        out[r["depth"]] += (not r["is_pd"]) or r["is_flat"]
    return out


# --- 1-D kriging-weight correspondence --------------------------------------


def design_points(design: str, n: int) -> np.ndarray:
    if design == "grid":
        return grid_1d(n)
    if design == "sobol":
        return sobol_1d(n)
    raise ValueError(f"unknown design {design!r}")


def prediction_points(x, where="midpoints") -> np.ndarray:
    """Prediction locations for a 1-D design.

    ``midpoints``: between sorted neighbours (a single point at ``x/2`` when
    n = 1); ``center``: the single location 0.5.
    """
    xs = np.sort(np.asarray(x, dtype=float))
    if where == "center":
        return np.array([0.5])
    if where != "midpoints":
        raise ValueError(f"unknown prediction layout {where!r}")
    if xs.size == 1:
        return xs / 2.0
    return 0.5 * (xs[:-1] + xs[1:])


def weight_correspondence(x, nngp_spec: NNGPSpec, rhos=None, nugget=DEFAULT_NUGGET,
                          where="midpoints", matern_inputs="embedded"):
    """Best Matérn nu=3/2 length scale for matching the NNGP kriging weights.

    Returns ``(best_rho, max_abs_diff, H_nngp, H_matern)`` where the maximum
    absolute weight difference is minimized over ``rhos``.
    """
    rhos = default_rho_grid() if rhos is None else np.asarray(rhos, dtype=float)
    x = np.asarray(x, dtype=float)
    xp = prediction_points(x, where)
    Zf, Zp = hypersphere_embed(x), hypersphere_embed(xp)
    spec = NNGPSpec(nngp_spec.depth, nngp_spec.sigma_a, nngp_spec.sigma_b, Zf.shape[1])
    Kff, Kpf, _ = gram_blocks(spec, Zf, Zp)
    H_nngp = kriging_weights(Kff, Kpf, nugget, spec.describe())
    if matern_inputs == "embedded":
        Xf, Xp = Zf, Zp
    elif matern_inputs == "unit":
        Xf, Xp = x[:, None], xp[:, None]
    else:
        raise ValueError(f"unknown matern_inputs {matern_inputs!r}")
    best = (np.inf, None, None)
    for rho in rhos:
        m = MaternSpec(1.5, float(rho), 1.0)
        Mff, Mpf, _ = gram_blocks(m, Xf, Xp)
        try:
            H = kriging_weights(Mff, Mpf, nugget * m.sigma2, m.describe())
        except NotPositiveDefinite:
            continue
        d = float(np.abs(H - H_nngp).max())
        if d < best[0]:
            best = (d, float(rho), H)
    return best[1], best[0], H_nngp, best[2]


def compare_1d(n_list: Sequence[int], designs=("grid",), nngp_spec: NNGPSpec | None = None,
               rhos=None, nugget=DEFAULT_NUGGET, where="midpoints", matern_inputs="embedded"):
    """Convergence table: one row per (design, n) with the best rho and weight gap."""
    if not n_list:
        raise ValueError("n_list must be nonempty")
    nngp_spec = nngp_spec or NNGPSpec(2, 1.0, 0.5, 2)
    rows = []
    for design in designs:
        for n in n_list:
            x = design_points(design, int(n))
            rho, diff, _, _ = weight_correspondence(x, nngp_spec, rhos, nugget, where, matern_inputs)
            rows.append({"n": int(n), "design": design, "best_rho": rho, "max_abs_diff": diff})
    return rows


# --- benchmark ---------------------------------------------------------------


class ArmWeights:
    """Kriging weights for every cell of a kernel grid, computed on demand.

    Validity (Cholesky of ``K_ff + nugget I`` and flatness) is established for
    all cells up front; weight matrices are cached while they fit in
    ``cache_bytes`` and recomputed otherwise.  Invalid cells yield None.
    """

    def __init__(self, specs, Xf, Xp, nugget, eps_flat=linalg.EPS_FLAT, cache_bytes=512 * 2**20):
        self.specs = list(specs)
        self.Xf, self.Xp = Xf, Xp
        self.nugget = nugget
        self._cache: dict[int, np.ndarray] = {}
        self._budget = cache_bytes
        self.valid, self.not_pd, self.flat = [], 0, 0
        for i, spec in enumerate(self.specs):
            H = self._compute(spec, eps_flat)
            ok = H is not None
            self.valid.append(ok)
            if ok:
                self._store(i, H)

    def _compute(self, spec, eps_flat=None):
        Kff, Kpf, _ = gram_blocks(spec, self.Xf, self.Xp)
        if eps_flat is not None and linalg.min_offdiag_correlation_gap(Kff) <= eps_flat:
            self.flat += 1
            return None
        try:
            H = kriging_weights(Kff, Kpf, self.nugget * spec.scale)
        except NotPositiveDefinite:
            if eps_flat is not None:
                self.not_pd += 1
            return None
        if not np.all(np.isfinite(H)):
            if eps_flat is not None:
                self.not_pd += 1
            return None
        return H

    def _store(self, i, H):
        if H.nbytes <= self._budget:
            self._cache[i] = H
            self._budget -= H.nbytes

    def __len__(self):
        return len(self.specs)

    def __getitem__(self, i):
        if not self.valid[i]:
            return None
        H = self._cache.get(i)
        return H if H is not None else self._compute(self.specs[i])

    @property
    def grid(self) -> ThetaGrid:
        return ThetaGrid(self.specs, self.valid)


@dataclass
class BenchmarkConfig:
    case: BenchmarkCase
    iterations: int = 10
    nngp_depth: int = 2
    nngp_sigma_min: float = 0.1
    nngp_sigma_max: float = 2.0
    nngp_grid_res: int = 20
    matern_fixed: MaternSpec = field(default_factory=lambda: MaternSpec(1.5, 1.0, 1.0))
    matern_nus: tuple = (0.5, 1.5, 2.5, float("inf"))
    matern_rhos: tuple = tuple(default_rho_grid())
    nugget: float = DEFAULT_NUGGET
    eps_flat: float = linalg.EPS_FLAT

    def arms(self, input_dim) -> dict[str, list[KernelSpec]]:
        return {
            "nngp": nngp_grid(self.nngp_depth, self.nngp_sigma_min, self.nngp_sigma_max,
                              self.nngp_grid_res, input_dim),
            "matern_fixed": [self.matern_fixed],
            "matern_varied": matern_grid(self.matern_nus, self.matern_rhos),
        }


def prepare_inputs(train: Dataset, test: Dataset):
    """Unit-cube scaling (training bounds) and the embedded copies for NNGP."""
    U, bounds = minmax_scale(train.inputs)
    Up, _ = minmax_scale(test.inputs, bounds)
    return U, Up, hypersphere_embed(U), hypersphere_embed(Up)


def benchmark_iteration(cfg: BenchmarkConfig, seed, data: Dataset | None = None) -> dict:
    """One draw of the benchmark: all three kernel arms on a fresh train/test split."""
    train, test = make_case(cfg.case, seed=seed, data=data)
    if cfg.case.trend == "linear":
        trend, resid = fit_trend(train.inputs, train.responses)
        offset = trend.predict(test.inputs)
    else:
        resid, offset = train.responses, 0.0
    U, Up, Z, Zp = prepare_inputs(train, test)
    truth = test.responses
    arms = cfg.arms(Z.shape[1])
    weights = {
        name: ArmWeights(specs, Z if name == "nngp" else U, Zp if name == "nngp" else Up,
                         cfg.nugget, cfg.eps_flat)
        for name, specs in arms.items()
    }
    nngp = weights["nngp"]
    _, _, best_nngp = rmse_extrema(nngp.grid, nngp, resid, truth, offset)
    H_ref = nngp[nngp.specs.index(best_nngp)]
    y_scale = float(np.std(train.responses, ddof=1)) if len(train) > 1 else 1.0
    out = {}
    for name, w in weights.items():
        st = compare_arm(w.grid, w, resid, truth, H_ref, offset)
        out[name] = {
            "stats": st.as_dict(),
            "minRMSE_std": st.minRMSE / y_scale,
            "maxRMSE_std": st.maxRMSE / y_scale,
            "best_theta": _spec_dict(st.best_theta),
            "theta_tilde": _spec_dict(st.theta_tilde),
            "n_theta": len(w),
            "n_invalid": w.grid.n_invalid,
            "n_not_pd": w.not_pd,
            "n_flat": w.flat,
        }
    return out


def _spec_dict(spec):
    d = asdict(spec)
    d["family"] = spec.family
    return d


def run_benchmark(cfg: BenchmarkConfig) -> dict:
    """Repeat :func:`benchmark_iteration` and aggregate mean (sd) per statistic and arm.

    Iteration seeds are spawned from ``cfg.case.seed``.  A failing iteration
    is logged and recorded; the run continues.
    """
    if cfg.iterations < 1:
        raise ValueError("iterations must be >= 1")
    data = None
    if cfg.case.name == "csv":
        from .bench import load_csv

        data = load_csv(cfg.case.csv_path)
    iterations, failures = [], []
    for it, seed in enumerate(spawn_seeds(cfg.case.seed, cfg.iterations)):
        try:
            iterations.append(benchmark_iteration(cfg, seed, data))
        except (ValueError, RuntimeError, np.linalg.LinAlgError) as err:
            log.warning("iteration %d failed: %s", it, err)
            failures.append({"iteration": it, "error": f"{type(err).__name__}: {err}"})
    summary = {}
    for arm in ARM_LABELS:
        agg = aggregate([r[arm]["stats"] for r in iterations])
        summary[arm] = {k: {"mean": m, "sd": s} for k, (m, s) in agg.items()}
        for extra in ("minRMSE_std", "maxRMSE_std", "n_invalid", "n_not_pd", "n_flat"):
            vals = np.array([r[arm][extra] for r in iterations], dtype=float)
            if vals.size:
                summary[arm][extra] = {
                    "mean": float(vals.mean()),
                    "sd": float(vals.std(ddof=1)) if vals.size > 1 else 0.0,
                }
    return {"summary": summary, "iterations": iterations, "failures": failures}


def summary_table(report: dict, data_label: str) -> list[dict]:
    """Summary rows: statistic, data label, then one ``mean (sd)`` column per arm."""
    rows = []
    for stat in STAT_NAMES:
        row = {"statistic": stat, "data": data_label}
        for arm, label in ARM_LABELS.items():
            cell = report["summary"].get(arm, {}).get(stat)
            row[label] = "" if cell is None else f"{cell['mean']:.3g} ({cell['sd']:.3g})"
        rows.append(row)
    return rows


# --- direct prediction -----------------------------------------------------


def predict(train: Dataset, test: Dataset, kernel: KernelSpec, nugget=DEFAULT_NUGGET,
            trend="none", scale=True, eps_flat=linalg.EPS_FLAT) -> list[dict]:
    """Posterior mean and standard deviation at every test row.

    Inputs are mapped to the unit cube with training bounds when ``scale`` is
    set; NNGP kernels additionally see the hypersphere embedding.  An NNGP spec
    whose training Gram is not usable raises :class:`NotPositiveDefinite`
    naming (sigma_a, sigma_b, depth).
    """
    if len(test) == 0:
        return []
    if scale:
        U, Up, Z, Zp = prepare_inputs(train, test)
    else:
        U, Up = train.inputs, test.inputs
        Z, Zp = hypersphere_embed(U), hypersphere_embed(Up)
    if isinstance(kernel, NNGPSpec):
        kernel = NNGPSpec(kernel.depth, kernel.sigma_a, kernel.sigma_b, Z.shape[1])
        Xf, Xp = Z, Zp
        Kff = nngp_gram(Xf, kernel)
        linalg.cholesky(Kff + nugget * np.eye(Kff.shape[0]), context=kernel.describe())
        gap = linalg.min_offdiag_correlation_gap(Kff)
        if gap <= eps_flat:
            raise DegenerateKernel(gap, kernel.describe())
    else:
        Xf, Xp = U, Up
    gp = GPRegressor(GPConfig(kernel, nugget, trend))
    gp.fit(Xf, train.responses, trend_inputs=train.inputs)
    post = gp.predict(Xp, trend_inputs=test.inputs)
    return [{"prediction": float(m), "posterior_sd": float(s)} for m, s in zip(post.mean, post.sd)]
