"""Dense symmetric linear algebra.

Cholesky factorization and triangular solves go through LAPACK (via scipy).
No jitter is ever added here: a matrix that does not factor raises
:class:`~nngpkrig.errors.NotPositiveDefinite`, and any regularization is the
caller's explicit nugget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .errors import DimensionMismatch, NonPositiveDiagonal, NotPositiveDefinite

SYMMETRY_RTOL = 1e-12
EPS_FLAT = 1e-10


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular factor ``L`` with ``A = L @ L.T``."""

    lower: np.ndarray

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T

    def logdet(self) -> float:
        return 2.0 * float(np.log(np.diag(self.lower)).sum())


def _as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def symmetrize(A) -> np.ndarray:
    """Return ``(A + A.T) / 2`` after checking ``A`` is symmetric to 1e-12 relative."""
    A = _as_square(A)
    scale = max(np.abs(A).max(), np.finfo(float).tiny)
    asym = np.abs(A - A.T).max()
    if asym > SYMMETRY_RTOL * scale:
        raise ValueError(f"matrix is not symmetric (max |A - A.T| = {asym:.3g})")
    return 0.5 * (A + A.T)


def cholesky(A, context=None) -> CholeskyFactor:
    """Factor a symmetric positive definite matrix.

    Parameters
    ----------
    A : (n, n) array_like
        Symmetric matrix.  It is symmetrized before factoring.
    context : str, optional
        Attached to the error raised on failure (e.g. the kernel parameters).

    Raises
    ------
    NotPositiveDefinite
        If a pivot ``<= 0`` is met.  The partial factor from LAPACK is used to
        recover the offending pivot value.
    """
    A = symmetrize(A)
    if A.shape[0] == 0:
        return CholeskyFactor(np.zeros((0, 0)))
    L, info = lapack.dpotrf(A, lower=1, clean=1)
    if info > 0:
        k = info - 1
        # the leading k x k block of L is valid; recompute row k from it
        row = solve_triangular(np.tril(L[:k, :k]), A[:k, k], lower=True) if k else np.zeros(0)
        pivot = A[k, k] - row @ row
        raise NotPositiveDefinite(k, pivot, context)
    if info < 0:
        raise ValueError(f"dpotrf: illegal argument {-info}")
    return CholeskyFactor(np.tril(L))


def solve(F: CholeskyFactor, B) -> np.ndarray:
    """Solve ``(L L^T) X = B`` by forward then back substitution."""
    B = np.asarray(B, dtype=float)
    vector = B.ndim == 1
    if B.shape[0] != F.dim:
        raise DimensionMismatch(f"right-hand side has {B.shape[0]} rows, factor has dim {F.dim}")
    Y = solve_triangular(F.lower, B, lower=True, check_finite=False)
    X = solve_triangular(F.lower, Y, lower=True, trans="T", check_finite=False)
    return X.ravel() if vector else X


def min_offdiag_correlation_gap(K) -> float:
    """Smallest ``1 - K_ij / sqrt(K_ii K_jj)`` over ``i != j``.

    A value at or below ``EPS_FLAT`` means two distinct points are perfectly
    correlated, i.e. the kernel matrix has gone flat.  A 1x1 matrix has no
    off-diagonal pairs and returns 1.0.
    """
    K = _as_square(K)
    d = np.diag(K)
    if np.any(d <= 0):
        raise NonPositiveDiagonal("kernel matrix diagonal must be strictly positive")
    n = K.shape[0]
    if n < 2:
        return 1.0
    s = np.sqrt(d)
    corr = K / np.outer(s, s)
    corr[np.diag_indices(n)] = -np.inf
    return float(1.0 - corr.max())
