"""Benchmark response surfaces, CSV ingestion and train/test assembly."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .design import gaussian_noise, latin_hypercube, make_rng
from .embed import Dataset
from .errors import DimensionMismatch, InsufficientRows, MissingColumn, ParseError

# (name, lower, upper) in evaluation order
BOREHOLE_RANGES = (
    ("r_w", 0.05, 0.15),
    ("r", 100.0, 5000.0),
    ("T_u", 63070.0, 115600.0),
    ("H_u", 990.0, 1100.0),
    ("T_l", 63.1, 116.0),
    ("H_l", 700.0, 820.0),
    ("L", 1120.0, 1680.0),
    ("K_w", 9855.0, 12045.0),
)
_BH_LO = np.array([r[1] for r in BOREHOLE_RANGES])
_BH_HI = np.array([r[2] for r in BOREHOLE_RANGES])


def friedman(x) -> np.ndarray | float:
    """Friedman surface on [0, 1]^5 (noise-free).

    Accepts a single point or an (n, 5) array.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 5:
        raise DimensionMismatch(f"friedman takes 5 inputs, got {x.shape[-1]}")
    x1, x2, x3, x4, x5 = np.moveaxis(x, -1, 0)
    y = 10.0 * np.sin(np.pi * x1 * x2) + 20.0 * (x3 - 0.5) ** 2 + 10.0 * x4 + 5.0 * x5
    return float(y) if y.ndim == 0 else y


def borehole(x, check_range=True) -> np.ndarray | float:
    """Water flow rate through a borehole, in m^3/yr.

    Inputs are ordered ``(r_w, r, T_u, H_u, T_l, H_l, L, K_w)``.  Values outside
    the usual ranges only trigger a warning.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 8:
        raise DimensionMismatch(f"borehole takes 8 inputs, got {x.shape[-1]}")
    if check_range and (np.any(x < _BH_LO) or np.any(x > _BH_HI)):
        warnings.warn("borehole inputs outside the standard ranges", RuntimeWarning, stacklevel=2)
    rw, r, tu, hu, tl, hl, L, kw = np.moveaxis(x, -1, 0)
    log_ratio = np.log(r / rw)
    y = 2.0 * np.pi * tu * (hu - hl) / (
        log_ratio * (1.0 + 2.0 * L * tu / (log_ratio * rw**2 * kw) + tu / tl)
    )
    return float(y) if y.ndim == 0 else y


def unit_to_borehole(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != 8:
        raise DimensionMismatch(f"expected 8 unit coordinates, got {u.shape[-1]}")
    return _BH_LO + u * (_BH_HI - _BH_LO)


def load_csv(path) -> Dataset:
    """Read a ``x1,...,xd,y`` file with a header row.

    Column order in the file does not matter; extra columns are ignored.
    Non-finite values are rejected with the offending line number.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(1, "empty file (no header)") from None
        if "y" not in header:
            raise MissingColumn(f"{path}: no 'y' column in header {header}")
        xcols = sorted(
            (h for h in header if h.startswith("x") and h[1:].isdigit()), key=lambda h: int(h[1:])
        )
        if not xcols:
            raise MissingColumn(f"{path}: no x1..xd columns in header {header}")
        expected = [f"x{i}" for i in range(1, len(xcols) + 1)]
        if xcols != expected:
            missing = sorted(set(expected) - set(xcols), key=lambda h: int(h[1:]))
            raise MissingColumn(f"{path}: missing input columns {missing}")
        idx = [header.index(h) for h in xcols]
        iy = header.index("y")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) != len(header):
                raise ParseError(lineno, f"expected {len(header)} fields, got {len(row)}")
            try:
                vals = [float(row[i]) for i in idx] + [float(row[iy])]
            except ValueError as err:
                raise ParseError(lineno, str(err)) from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError(lineno, "non-finite value")
            rows.append(vals)
    arr = np.array(rows, dtype=float).reshape(-1, len(xcols) + 1)
    return Dataset(arr[:, :-1], arr[:, -1])


def write_csv(path, data: Dataset):
    path = Path(path)
    d = data.dim
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{i}" for i in range(1, d + 1)] + ["y"])
        for x, y in zip(data.inputs, data.responses):
            w.writerow([repr(float(v)) for v in x] + [repr(float(y))])


@dataclass(frozen=True)
class BenchmarkCase:
    name: str = "friedman"
    train_count: int = 500
    test_count: int = 500
    noise_sd: float = 1.0
    seed: int = 0
    csv_path: str | None = None

    def __post_init__(self):
        if self.name not in ("friedman", "borehole", "csv"):
            raise ValueError(f"unknown benchmark case {self.name!r}")
        if self.train_count < 1 or self.test_count < 1:
            raise ValueError("train and test counts must be >= 1")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be >= 0")
        if self.name == "csv" and not self.csv_path:
            raise ValueError("csv case needs csv_path")

    @property
    def trend(self) -> str:
        # CSV data are taken to be residuals already
        return "none" if self.name == "csv" else "linear"


def make_case(case: BenchmarkCase, seed=None, data: Dataset | None = None):
    """Build ``(train, test)`` datasets.

    Synthetic cases draw a Latin hypercube of ``n + m`` points; training
    responses get Gaussian noise, test responses are the noiseless surface.
    The csv case splits a random permutation of the file rows.  ``seed``
    overrides ``case.seed`` (an int or ``SeedSequence``); ``data`` may pass an
    already loaded csv dataset.
    """
    seed = case.seed if seed is None else seed
    n, m = case.train_count, case.test_count
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    design_seed, noise_seed = ss.spawn(2)
    if case.name == "csv":
        data = load_csv(case.csv_path) if data is None else data
        if len(data) < n + m:
            raise InsufficientRows(f"need {n + m} rows, file has {len(data)}")
        perm = make_rng(design_seed).permutation(len(data))
        tr, te = perm[:n], perm[n:n + m]
        return (Dataset(data.inputs[tr], data.responses[tr]),
                Dataset(data.inputs[te], data.responses[te]))
    if case.name == "friedman":
        X = latin_hypercube(n + m, 5, design_seed)
        truth = friedman(X)
    else:
        X = unit_to_borehole(latin_hypercube(n + m, 8, design_seed))
        truth = borehole(X)
    y = truth[:n] + gaussian_noise(n, case.noise_sd, noise_seed)
    return Dataset(X[:n], y), Dataset(X[n:], truth[n:])
