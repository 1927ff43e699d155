"""Unit-cube scaling and the cos/sin hypersphere embedding used with NNGP."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateColumn, DimensionMismatch


@dataclass
class Dataset:
    """Inputs ``X`` (n x d) with responses ``y`` (n,).

    For synthetic test sets ``responses`` holds the noiseless truth.
    """

    inputs: np.ndarray
    responses: np.ndarray

    def __post_init__(self):
        self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        self.responses = np.asarray(self.responses, dtype=float).ravel()
        if self.inputs.shape[0] != self.responses.shape[0]:
            if self.inputs.size == 0 and self.responses.size == 0:
                self.inputs = self.inputs.reshape(0, max(self.inputs.shape[-1], 0))
            else:
                raise DimensionMismatch(
                    f"{self.inputs.shape[0]} input rows but {self.responses.shape[0]} responses"
                )
        if not (np.all(np.isfinite(self.inputs)) and np.all(np.isfinite(self.responses))):
            raise ValueError("dataset contains non-finite values")

    def __len__(self):
        return self.responses.shape[0]

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]


@dataclass
class EmbeddedDataset:
    inputs: np.ndarray
    responses: np.ndarray
    source_dim: int


def minmax_scale(X, bounds=None):
    """Affinely map each column onto [0, 1].

    Returns ``(scaled, bounds)`` with ``bounds`` of shape (d, 2).  When bounds
    are supplied (e.g. fitted on a training set) the result is clipped to
    [0, 1].
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if bounds is None:
        lo, hi = X.min(axis=0), X.max(axis=0)
        for j in np.flatnonzero(hi <= lo):
            raise DegenerateColumn(int(j))
        bounds = np.column_stack([lo, hi])
        return (X - lo) / (hi - lo), bounds
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    if bounds.shape[0] != X.shape[1]:
        raise DimensionMismatch(f"{bounds.shape[0]} bounds for {X.shape[1]} columns")
    lo, hi = bounds[:, 0], bounds[:, 1]
    if np.any(hi <= lo):
        raise ValueError("bounds must satisfy hi > lo")
    return np.clip((X - lo) / (hi - lo), 0.0, 1.0), bounds


def hypersphere_embed(X) -> np.ndarray:
    """Map rows of ``X`` in [0, 1]^d onto the unit sphere in R^(2d).

    Coordinate ``x_i`` becomes the pair ``(cos(pi x_i), sin(pi x_i))`` and each
    row is then divided by its norm (``sqrt(d)``).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, d = X.shape
    Z = np.empty((n, 2 * d))
    Z[:, 0::2] = np.cos(np.pi * X)
    Z[:, 1::2] = np.sin(np.pi * X)
    norms = np.linalg.norm(Z, axis=1, keepdims=True)
    return Z / np.where(norms > 0, norms, 1.0)


def embed_dataset(data: Dataset) -> EmbeddedDataset:
    return EmbeddedDataset(hypersphere_embed(data.inputs), data.responses.copy(), data.dim)
