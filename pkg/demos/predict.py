"""
Predicting from CSV files
=========================

Write a small training and test set, then predict with each kernel family
through the same entry point the command line uses.
"""

import tempfile
from pathlib import Path

import numpy as np

from nngpkrig.bench import friedman, load_csv, write_csv
from nngpkrig.design import latin_hypercube
from nngpkrig.embed import Dataset
from nngpkrig.errors import NotPositiveDefinite
from nngpkrig.kernels import MaternSpec, NNGPSpec
from nngpkrig.studies import predict

# %%
# Training data from a Latin hypercube, test points from a second one.
X, Xt = latin_hypercube(80, 5, seed=3), latin_hypercube(20, 5, seed=4)
tmp = Path(tempfile.mkdtemp())
write_csv(tmp / "train.csv", Dataset(X, friedman(X)))
write_csv(tmp / "test.csv", Dataset(Xt, friedman(Xt)))
train, test = load_csv(tmp / "train.csv"), load_csv(tmp / "test.csv")

# %%
for kernel in (MaternSpec(2.5, 0.8, 1.0), NNGPSpec(2, 1.0, 0.5, 10)):
    rows = predict(train, test, kernel, nugget=1e-8, trend="linear")
    pred = np.array([r["prediction"] for r in rows])
    sd = np.array([r["posterior_sd"] for r in rows])
    rmse = np.sqrt(np.mean((pred - test.responses) ** 2))
    print(f"{kernel.describe():40s} RMSE {rmse:.3f}  mean posterior sd {sd.mean():.3f}")

# %%
# A very deep network with a large bias scale gives a kernel that cannot be
# used; the error names the offending parameters.
try:
    predict(train, test, NNGPSpec(40, 0.5, 2.0, 10))
except NotPositiveDefinite as err:
    print("rejected:", err)
