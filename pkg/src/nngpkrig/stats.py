"""Accuracy and kriging-weight comparison statistics over hyperparameter grids.

For one kernel family evaluated on a grid of parameter sets ``theta`` we report

* ``minRMSE`` / ``maxRMSE``: best and worst test RMSE over the valid grid cells;
* ``maxdiff``, ``mindiff``, ``meandiff``, ``sddiff``: entrywise summaries of
  ``|H_theta~ - H_ref|`` where ``theta~`` is the cell whose weights are closest
  (in max-abs) to a reference weight matrix;
* ``maxkw``, ``minkw``, ``meankw``, ``sdkw``: summaries over the grid of
  ``max |H_theta - H_bar|`` with ``H_bar`` the mean weight matrix.

Standard deviations use the sample (``ddof=1``) convention.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np

from .errors import AllThetaInvalid, InsufficientThetas, LengthMismatch, ShapeMismatch

STAT_NAMES = (
    "minRMSE", "maxRMSE",
    "maxdiff", "mindiff", "meandiff", "sddiff",
    "maxkw", "minkw", "meankw", "sdkw",
)


@dataclass
class ThetaGrid:
    specs: list
    valid: list

    def __post_init__(self):
        if not self.specs:
            raise ValueError("theta grid is empty")
        if len(self.valid) != len(self.specs):
            raise LengthMismatch("one status per spec required")
        if len({type(s) for s in self.specs}) != 1:
            raise ValueError("theta grid must hold a single kernel family")

    def __len__(self):
        return len(self.specs)

    @property
    def n_invalid(self) -> int:
        return sum(not v for v in self.valid)


@dataclass
class ComparisonStats:
    minRMSE: float
    maxRMSE: float
    maxdiff: float
    mindiff: float
    meandiff: float
    sddiff: float
    maxkw: float
    minkw: float
    meankw: float
    sdkw: float
    best_theta: Any = None
    theta_tilde: Any = None

    def as_dict(self) -> dict[str, float]:
        d = asdict(self)
        return {k: d[k] for k in STAT_NAMES}


def _sample_sd(values) -> float:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def rmse(pred, truth) -> float:
    pred = np.asarray(pred, dtype=float).ravel()
    truth = np.asarray(truth, dtype=float).ravel()
    if pred.shape != truth.shape:
        raise LengthMismatch(f"{pred.size} predictions vs {truth.size} truths")
    if pred.size == 0:
        raise LengthMismatch("rmse of empty vectors")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def rmse_per_theta(weights: Sequence[np.ndarray | None], y_train, truth_test, offset=0.0):
    """RMSE of ``H @ y_train + offset`` for each grid cell; NaN where ``H`` is None."""
    y_train = np.asarray(y_train, dtype=float)
    out = np.full(len(weights), np.nan)
    for i in range(len(weights)):
        H = weights[i]
        if H is not None:
            out[i] = rmse(H @ y_train + offset, truth_test)
    return out


def rmse_extrema(grid: ThetaGrid, weights, y_train, truth_test, offset=0.0):
    """Return ``(minRMSE, maxRMSE, best_theta)`` over the valid cells of ``grid``.

    ``offset`` is added to every prediction (the trend at the test points).
    """
    if len(weights) != len(grid):
        raise LengthMismatch("one weight matrix per grid cell required")
    r = rmse_per_theta(_Masked(weights, grid.valid), y_train, truth_test, offset)
    finite = np.isfinite(r)
    if not finite.any():
        raise AllThetaInvalid("no valid parameter set in the grid")
    best = int(np.nanargmin(np.where(finite, r, np.nan)))
    return float(np.nanmin(r[finite])), float(np.nanmax(r[finite])), grid.specs[best]


def weight_diff_stats(H_ref, weights: Sequence[np.ndarray | None]):
    """Closest grid cell to ``H_ref`` and its entrywise difference summaries.

    Returns ``(index, maxdiff, mindiff, meandiff, sddiff)``; ``None`` entries
    in ``weights`` (invalid cells) are skipped.
    """
    H_ref = np.asarray(H_ref, dtype=float)
    best, best_max = None, np.inf
    for i in range(len(weights)):
        H = weights[i]
        if H is None:
            continue
        if H.shape != H_ref.shape:
            raise ShapeMismatch(f"weights of shape {H.shape} vs reference {H_ref.shape}")
        m = np.abs(H - H_ref).max()
        if m < best_max or best is None:
            best, best_max = i, m
    if best is None:
        raise AllThetaInvalid("no valid weights to compare")
    diff = np.abs(weights[best] - H_ref).ravel()
    return best, float(diff.max()), float(diff.min()), float(diff.mean()), _sample_sd(diff)


def kw_spread_stats(weights: Sequence[np.ndarray | None]):
    """``(maxkw, minkw, meankw, sdkw)`` of per-cell max deviations from the mean weights.

    Two passes over ``weights`` (mean, then deviations) so a lazily computed
    sequence never has to be held in memory at once.
    """
    idx = [i for i in range(len(weights)) if weights[i] is not None]
    if len(idx) < 2:
        raise InsufficientThetas(f"need at least 2 valid parameter sets, got {len(idx)}")
    H_bar = sum(np.asarray(weights[i], dtype=float) for i in idx) / len(idx)
    s = np.array([np.abs(weights[i] - H_bar).max() for i in idx])
    return float(s.max()), float(s.min()), float(s.mean()), _sample_sd(s)


def compare_arm(grid: ThetaGrid, weights, y_train, truth_test, H_ref, offset=0.0) -> ComparisonStats:
    """Full statistics bundle for one kernel family against reference weights.

    Cells flagged invalid in ``grid`` are skipped.  An arm with a single valid
    cell has no spread, so its ``*kw`` entries are 0.
    """
    masked = _Masked(weights, grid.valid)
    lo, hi, best = rmse_extrema(grid, masked, y_train, truth_test, offset)
    idx, dmax, dmin, dmean, dsd = weight_diff_stats(H_ref, masked)
    try:
        kw = kw_spread_stats(masked)
    except InsufficientThetas:
        kw = (0.0, 0.0, 0.0, 0.0)
    return ComparisonStats(lo, hi, dmax, dmin, dmean, dsd, *kw,
                           best_theta=best, theta_tilde=grid.specs[idx])


class _Masked:
    """View of ``weights`` that yields None for invalid cells without touching them."""

    def __init__(self, weights, valid):
        self._w, self._ok = weights, valid

    def __len__(self):
        return len(self._w)

    def __getitem__(self, i):
        return self._w[i] if self._ok[i] else None


def aggregate(runs) -> dict[str, tuple[float, float]]:
    """Mean and sample standard deviation of each statistic across iterations.

    ``runs`` holds :class:`ComparisonStats` or plain dicts keyed by statistic name.
    """
    if not runs:
        return {}
    dicts = [r.as_dict() if isinstance(r, ComparisonStats) else r for r in runs]
    table = np.array([[d[k] for k in STAT_NAMES] for d in dicts])
    return {
        k: (float(table[:, j].mean()), _sample_sd(table[:, j]))
        for j, k in enumerate(STAT_NAMES)
    }
