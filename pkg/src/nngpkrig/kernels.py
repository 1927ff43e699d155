"""Matérn and NNGP covariance kernels.

Two kernel families are supported:

* Matérn with half-integer smoothness ``nu`` in {1/2, 3/2, 5/2} or the RBF
  limit ``nu = inf``.  Distances are plain Euclidean (not squared).
* The NNGP kernel of an infinitely wide, fully connected ReLU network of a
  given depth.  It is computed by the layer recursion

      S1(x, x')   = sigma_a^2 / n0 * <x, x'> + sigma_b^2
      Sl(x, x')   = sigma_a^2 * relu_dual(S(l-1)) (x, x') + sigma_b^2

  where ``relu_dual`` is the arc-cosine (degree one) dual of the ReLU.

Gram matrices are plain ``numpy`` arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    NonPositiveVariance,
    NotPositiveDefinite,
    UnsupportedSmoothness,
)

DEFAULT_NUGGET = 1e-8
SUPPORTED_NU = (0.5, 1.5, 2.5, math.inf)
_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class MaternSpec:
    nu: float = 1.5
    rho: float = 1.0
    sigma2: float = 1.0

    def __post_init__(self):
        _check_nu(self.nu)
        if not self.rho > 0:
            raise ValueError("rho must be > 0")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be > 0")

    @property
    def family(self) -> str:
        return "matern"

    @property
    def scale(self) -> float:
        return self.sigma2

    def describe(self) -> str:
        return f"matern(nu={self.nu:g}, rho={self.rho:g}, sigma2={self.sigma2:g})"


@dataclass(frozen=True)
class NNGPSpec:
    depth: int = 2
    sigma_a: float = 1.0
    sigma_b: float = 0.5
    input_dim: int = 2

    def __post_init__(self):
        if int(self.depth) != self.depth or self.depth < 1:
            raise ValueError("depth must be an integer >= 1")
        if not self.sigma_a > 0:
            raise ValueError("sigma_a must be > 0")
        if not self.sigma_b >= 0:
            raise ValueError("sigma_b must be >= 0")
        if int(self.input_dim) != self.input_dim or self.input_dim < 1:
            raise ValueError("input_dim must be an integer >= 1")

    @property
    def family(self) -> str:
        return "nngp"

    @property
    def scale(self) -> float:
        return 1.0

    def describe(self) -> str:
        return f"nngp(depth={self.depth}, sigma_a={self.sigma_a:g}, sigma_b={self.sigma_b:g})"


KernelSpec = Union[MaternSpec, NNGPSpec]


@dataclass(frozen=True)
class ValidityReport:
    spec: NNGPSpec
    is_positive_definite: bool
    is_flat: bool
    min_correlation_gap: float
    failure_pivot: int | None = None

    @property
    def is_valid(self) -> bool:
        return self.is_positive_definite and not self.is_flat


def _check_nu(nu):
    if not any(nu == s for s in SUPPORTED_NU):
        raise UnsupportedSmoothness(
            f"nu={nu!r} is not supported; use one of 0.5, 1.5, 2.5 or inf"
        )


def matern_correlation(d, nu, rho):
    """Unit-variance Matérn correlation as a function of distance ``d``."""
    _check_nu(nu)
    d = np.asarray(d, dtype=float)
    r = d / rho
    if nu == 0.5:
        return np.exp(-r)
    if nu == 1.5:
        s = math.sqrt(3.0) * r
        return (1.0 + s) * np.exp(-s)
    if nu == 2.5:
        s = math.sqrt(5.0) * r
        return (1.0 + s + s * s / 3.0) * np.exp(-s)
    return np.exp(-0.5 * r * r)


def matern(x, y, nu=1.5, rho=1.0, sigma2=1.0) -> float:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise DimensionMismatch(f"points have shapes {x.shape} and {y.shape}")
    d = math.sqrt(float(np.sum((x - y) ** 2)))
    return float(sigma2 * matern_correlation(d, nu, rho))


def _points(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionMismatch(f"point set must be 2-D, got shape {X.shape}")
    return X


def pairwise_distances(X, Y) -> np.ndarray:
    X, Y = _points(X), _points(Y)
    if X.shape[1] != Y.shape[1]:
        raise DimensionMismatch(f"point dimensions differ: {X.shape[1]} vs {Y.shape[1]}")
    sq = (X * X).sum(1)[:, None] + (Y * Y).sum(1)[None, :] - 2.0 * X @ Y.T
    D = np.sqrt(np.maximum(sq, 0.0))
    if X is Y or (X.shape == Y.shape and np.array_equal(X, Y)):
        D[np.diag_indices_from(D)] = 0.0
    return D


def matern_gram(X, Y, spec: MaternSpec) -> np.ndarray:
    """Matérn cross-covariance ``K[i, j] = k(X[i], Y[j])``."""
    D = pairwise_distances(X, Y)
    return spec.sigma2 * matern_correlation(D, spec.nu, spec.rho)


def _arccos_angle(kxx, kxy, kyy):
    kxx = np.asarray(kxx, dtype=float)
    kyy = np.asarray(kyy, dtype=float)
    if np.any(kxx <= 0) or np.any(kyy <= 0):
        raise NonPositiveVariance("relu_dual needs strictly positive variances")
    norm = np.sqrt(kxx * kyy)
    cos = np.asarray(kxy, dtype=float) / norm
    if np.any(np.abs(cos) > 1.0 + _CLAMP_TOL):
        raise ValueError("correlation outside [-1, 1]; input is not a covariance")
    return np.arccos(np.clip(cos, -1.0, 1.0)), norm


def relu_dual(kxx, kxy, kyy):
    """ReLU dual activation: E[relu(u) relu(v)] for (u, v) ~ N(0, [[kxx, kxy], [kxy, kyy]]).

    Vectorized over broadcastable inputs.
    """
    c, norm = _arccos_angle(kxx, kxy, kyy)
    out = norm / (2.0 * np.pi) * (np.sin(c) + (np.pi - c) * np.cos(c))
    return out if out.ndim else float(out)


def relu_dual_derivative(kxx, kxy, kyy):
    """Dual of the ReLU derivative (step function): (pi - c) / (2 pi)."""
    c, _ = _arccos_angle(kxx, kxy, kyy)
    out = (np.pi - c) / (2.0 * np.pi)
    return out if out.ndim else float(out)


def nngp_gram(X, spec: NNGPSpec) -> np.ndarray:
    """NNGP kernel matrix over all points of ``X``.

    The recursion needs the same-layer variances of both arguments, so cross
    covariances between two point sets must be taken as blocks of the Gram of
    their union (see :func:`nngp_cross`).
    """
    X = _points(X)
    if X.shape[1] != spec.input_dim:
        raise DimensionMismatch(
            f"points have dimension {X.shape[1]}, spec expects {spec.input_dim}"
        )
    a2, b2 = spec.sigma_a**2, spec.sigma_b**2
    K = a2 / spec.input_dim * (X @ X.T) + b2
    K = 0.5 * (K + K.T)
    for _ in range(spec.depth - 1):
        v = np.diag(K).copy()
        K = a2 * relu_dual(v[:, None], K, v[None, :]) + b2
        # c = 0 exactly on the diagonal: relu_dual(k, k, k) = k / 2
        K[np.diag_indices_from(K)] = 0.5 * a2 * v + b2
    return K


def nngp_cross(X, Y, spec: NNGPSpec):
    """Return ``(K_XX, K_YX, K_YY)`` computed from the Gram of the stacked points."""
    X, Y = _points(X), _points(Y)
    n = X.shape[0]
    K = nngp_gram(np.vstack([X, Y]), spec)
    return K[:n, :n], K[n:, :n], K[n:, n:]


def gram_blocks(spec: KernelSpec, X, Y):
    """Training Gram, test/train cross block and test Gram for either family."""
    if isinstance(spec, NNGPSpec):
        return nngp_cross(X, Y, spec)
    return matern_gram(X, X, spec), matern_gram(Y, X, spec), matern_gram(Y, Y, spec)


def gram(spec: KernelSpec, X) -> np.ndarray:
    if isinstance(spec, NNGPSpec):
        return nngp_gram(X, spec)
    return matern_gram(X, X, spec)


def check_validity(spec: KernelSpec, X, nugget=DEFAULT_NUGGET, eps_flat=linalg.EPS_FLAT,
                   K=None) -> ValidityReport:
    """Factor ``K + nugget * I`` and measure flatness for a single spec."""
    if K is None:
        K = gram(spec, X)
    gap = linalg.min_offdiag_correlation_gap(K)
    pivot = None
    try:
        linalg.cholesky(K + nugget * np.eye(K.shape[0]))
        pd = True
    except NotPositiveDefinite as err:
        pd = False
        pivot = err.index
    return ValidityReport(spec, pd, gap <= eps_flat, gap, pivot)


def validity_scan(grid: Sequence[NNGPSpec], X, nugget=DEFAULT_NUGGET,
                  eps_flat=linalg.EPS_FLAT) -> list[ValidityReport]:
    """Validity report for every spec in ``grid``, in grid order.

    Failures are recorded in the reports, never raised.
    """
    X = _points(X)
    if X.shape[0] == 0:
        raise ValueError("validity_scan needs at least one point")
    return [check_validity(spec, X, nugget, eps_flat) for spec in grid]


def nngp_grid(depth, sigma_min=0.1, sigma_max=2.0, res=20, input_dim=2) -> list[NNGPSpec]:
    """Row-major (sigma_a outer, sigma_b inner) square grid of NNGP specs."""
    values = np.linspace(sigma_min, sigma_max, res)
    return [NNGPSpec(depth, float(a), float(b), input_dim) for a in values for b in values]


def matern_grid(nus=SUPPORTED_NU, rhos=None, sigma2=1.0) -> list[MaternSpec]:
    if rhos is None:
        rhos = default_rho_grid()
    return [MaternSpec(float(nu), float(rho), sigma2) for nu in nus for rho in rhos]


def default_rho_grid(lo=0.05, hi=5.0, count=20) -> np.ndarray:
    return np.geomspace(lo, hi, count)
