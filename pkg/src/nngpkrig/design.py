"""Experimental designs and seeded randomness.

Every random stream comes from numpy's counter-based Philox bit generator,
so a given integer seed produces identical draws on every platform.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed) -> np.random.Generator:
    """Philox generator from an int, a ``SeedSequence`` or an existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seeds, e.g. one per benchmark iteration."""
    return np.random.SeedSequence(seed).spawn(count)


def grid_1d(n: int) -> np.ndarray:
    """Points ``i / n`` for ``i = 1..n`` on (0, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.arange(1, n + 1) / n


def radical_inverse(i: int, base: int = 2) -> float:
    inv, f = 0.0, 1.0 / base
    while i:
        i, digit = divmod(i, base)
        inv += digit * f
        f /= base
    return inv


def sobol_1d(n: int) -> np.ndarray:
    """First ``n`` points of the 1-D Sobol (base-2 van der Corput) sequence, from index 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.array([radical_inverse(i) for i in range(1, n + 1)])


def latin_hypercube(n: int, d: int, seed) -> np.ndarray:
    """Random Latin hypercube: one jittered point per stratum and column."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    rng = make_rng(seed)
    strata = np.column_stack([rng.permutation(n) for _ in range(d)])
    return (strata + rng.random((n, d))) / n


def gaussian_noise(n: int, sd: float, seed) -> np.ndarray:
    if sd < 0:
        raise ValueError("sd must be >= 0")
    return sd * make_rng(seed).standard_normal(n)
