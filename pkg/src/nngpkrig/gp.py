"""Zero-mean Gaussian-process regression expressed through kriging weights.

Predictions are linear in the training responses, ``mean = H @ y``, with the
kriging-weight matrix

    H = K_sf (K_ff + tau2 I)^-1

computed by a Cholesky solve.  An optional linear trend is removed by ordinary
least squares before kriging and added back to the predictions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionMismatch, RankDeficientDesign
from .kernels import DEFAULT_NUGGET, KernelSpec, gram_blocks


@dataclass
class PosteriorSummary:
    mean: np.ndarray
    covariance: np.ndarray

    @property
    def sd(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))


@dataclass
class TrendModel:
    """OLS linear mean ``beta[0] + X @ beta[1:]``."""

    coefficients: np.ndarray

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape[1] + 1 != self.coefficients.shape[0]:
            raise DimensionMismatch("trend was fitted on a different input dimension")
        return self.coefficients[0] + X @ self.coefficients[1:]


def _factor(Kff, nugget, context=None):
    Kff = np.asarray(Kff, dtype=float)
    if nugget < 0 or not np.isfinite(nugget):
        raise ValueError("nugget must be finite and >= 0")
    return linalg.cholesky(Kff + nugget * np.eye(Kff.shape[0]), context=context)


def kriging_weights(Kff, Kstar_f, nugget=0.0, context=None) -> np.ndarray:
    """Kriging weights ``H`` (m x n) mapping training responses to predictions."""
    Kstar_f = np.atleast_2d(np.asarray(Kstar_f, dtype=float))
    F = _factor(Kff, nugget, context)
    if Kstar_f.shape[1] != F.dim:
        raise DimensionMismatch(f"cross matrix has {Kstar_f.shape[1]} columns, expected {F.dim}")
    return linalg.solve(F, Kstar_f.T).T


def posterior(Kff, Kstar_f, Kss, y, nugget=0.0, context=None) -> PosteriorSummary:
    """Posterior mean and covariance at the test points (kernel units)."""
    y = np.asarray(y, dtype=float).ravel()
    H = kriging_weights(Kff, Kstar_f, nugget, context)
    if y.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"y has length {y.shape[0]}, expected {H.shape[1]}")
    C = np.asarray(Kss, dtype=float) - H @ np.atleast_2d(Kstar_f).T
    return PosteriorSummary(H @ y, 0.5 * (C + C.T))


def fit_trend(X, y):
    """Fit ``y ~ 1 + X`` by least squares; return ``(TrendModel, residuals)``.

    Identically zero columns carry no information and get a zero coefficient.
    Any other rank deficiency raises :class:`RankDeficientDesign`.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float).ravel()
    n, d = X.shape
    if n != y.shape[0]:
        raise DimensionMismatch(f"{n} input rows but {y.shape[0]} responses")
    if n <= d + 1:
        raise RankDeficientDesign(f"need more than {d + 1} rows to fit a linear trend, got {n}")
    A = np.column_stack([np.ones(n), X])
    keep = np.any(A != 0.0, axis=0)
    Ak = A[:, keep]
    coef, _, rank, _ = np.linalg.lstsq(Ak, y, rcond=None)
    if rank < Ak.shape[1]:
        raise RankDeficientDesign(f"design matrix has rank {rank} < {Ak.shape[1]}")
    beta = np.zeros(d + 1)
    beta[keep] = coef
    trend = TrendModel(beta)
    return trend, y - A @ beta


@dataclass
class GPConfig:
    kernel: KernelSpec
    nugget: float = DEFAULT_NUGGET
    trend: str = "none"

    def __post_init__(self):
        if not (np.isfinite(self.nugget) and self.nugget >= 0):
            raise ValueError("nugget must be finite and >= 0")
        if self.trend not in ("none", "linear"):
            raise ValueError("trend must be 'none' or 'linear'")


@dataclass
class GPRegressor:
    """Convenience wrapper: kernel inputs, responses, optional trend.

    ``trend_inputs`` are the raw features the linear mean is regressed on;
    ``inputs`` are whatever the kernel expects (scaled or embedded points).
    The nugget is relative to the unit-scaled kernel, so a Matérn kernel with
    variance ``sigma2`` gets ``sigma2 * nugget`` on its diagonal.
    """

    config: GPConfig
    _X: np.ndarray = field(default=None, init=False, repr=False)
    _resid: np.ndarray = field(default=None, init=False, repr=False)
    _trend: TrendModel | None = field(default=None, init=False, repr=False)

    def fit(self, inputs, y, trend_inputs=None):
        self._X = np.asarray(inputs, dtype=float)
        y = np.asarray(y, dtype=float).ravel()
        if self.config.trend == "linear":
            T = self._X if trend_inputs is None else trend_inputs
            self._trend, self._resid = fit_trend(T, y)
        else:
            self._trend, self._resid = None, y
        return self

    def _blocks(self, test_inputs):
        return gram_blocks(self.config.kernel, self._X, np.asarray(test_inputs, dtype=float))

    def _nugget(self):
        return self.config.nugget * self.config.kernel.scale

    def weights(self, test_inputs) -> np.ndarray:
        Kff, Ksf, _ = self._blocks(test_inputs)
        return kriging_weights(Kff, Ksf, self._nugget(), self.config.kernel.describe())

    def predict(self, test_inputs, trend_inputs=None) -> PosteriorSummary:
        Kff, Ksf, Kss = self._blocks(test_inputs)
        post = posterior(Kff, Ksf, Kss, self._resid, self._nugget(), self.config.kernel.describe())
        if self._trend is not None:
            T = test_inputs if trend_inputs is None else trend_inputs
            post.mean = post.mean + self._trend.predict(T)
        return post
