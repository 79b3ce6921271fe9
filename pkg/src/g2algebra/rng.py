"""Seeded randomness.

All sampling goes through numpy's PCG64 bit generator keyed by a
``SeedSequence`` built from one unsigned 64-bit seed.  Independent child
streams come from ``SeedSequence.spawn``, so batches can be split without
sharing state.  Nothing in the package touches global entropy.
"""
from __future__ import annotations

import numpy as np

DEFAULT_SEED = 20220101
U64_MAX = 2**64 - 1


def make_rng(seed=None) -> np.random.Generator:
    """Return a PCG64 generator; an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = DEFAULT_SEED
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    seed = int(seed)
    if not 0 <= seed <= U64_MAX:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn(seed, n: int) -> list[np.random.Generator]:
    """``n`` independent generators derived from one seed."""
    seq = np.random.SeedSequence(int(DEFAULT_SEED if seed is None else seed))
    return [np.random.Generator(np.random.PCG64(s)) for s in seq.spawn(n)]


def gaussian_vector(rng: np.random.Generator, n: int = 7) -> np.ndarray:
    return rng.standard_normal(n)


def gaussian_skew(rng: np.random.Generator) -> np.ndarray:
    """Skew matrix with independent N(0, 1) entries above the diagonal."""
    a = np.zeros((7, 7))
    iu = np.triu_indices(7, 1)
    a[iu] = rng.standard_normal(21)
    return a - a.T
