"""Deterministic stream splitting for all randomness in the package.

A single 64-bit seed plus a path of small integers names every stream.  The
generators are counter-based (Philox), so a run is reproducible regardless
of evaluation order.
"""

import numpy as np

# Stream-kind codes used as the first path element.
SETTING = 0
TRIAL = 1
STATE = 2
RUN = 3


def seed_sequence(seed: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))


def rng_for(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed_sequence(seed, *path)))


def child_seed(seed: int, *path: int) -> int:
    """Derive an independent integer seed for a named sub-stream."""
    return int(seed_sequence(seed, *path).generate_state(1, np.uint64)[0])


def haar_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unit vector in C^dim."""
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)
