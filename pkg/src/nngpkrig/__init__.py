"""Gaussian-process regression with NNGP and Matérn kernels, compared through kriging weights."""

from .embed import Dataset, hypersphere_embed, minmax_scale
from .errors import NotPositiveDefinite
from .gp import GPConfig, GPRegressor, fit_trend, kriging_weights, posterior
from .kernels import (
    MaternSpec,
    NNGPSpec,
    matern,
    matern_gram,
    nngp_gram,
    relu_dual,
    relu_dual_derivative,
    validity_scan,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "GPConfig",
    "GPRegressor",
    "MaternSpec",
    "NNGPSpec",
    "NotPositiveDefinite",
    "fit_trend",
    "hypersphere_embed",
    "kriging_weights",
    "matern",
    "matern_gram",
    "minmax_scale",
    "nngp_gram",
    "posterior",
    "relu_dual",
    "relu_dual_derivative",
    "validity_scan",
]
