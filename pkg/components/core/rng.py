"""Seeded random streams.

All randomness goes through numpy's PCG64 generator. Ensembles derive one
independent child stream per trajectory from a single SeedSequence, so a run
is reproducible from (seed, index) regardless of how work is distributed.
"""

from typing import List, Optional

import numpy as np
from scipy import stats

from components.core.config import get_settings


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Return a PCG64 generator for the given seed (settings default when None)."""
    if seed is None:
        seed = get_settings().DEFAULT_SEED
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_seeds(seed: Optional[int], count: int) -> List[np.random.SeedSequence]:
    """Split one seed into `count` independent child seed sequences."""
    if seed is None:
        seed = get_settings().DEFAULT_SEED
    return np.random.SeedSequence(seed).spawn(count)


def rng_from_seed_sequence(sequence: np.random.SeedSequence) -> np.random.Generator:
    """Build a generator from a spawned child sequence."""
    return np.random.Generator(np.random.PCG64(sequence))


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of SO(n)."""
    if n == 1:
        return np.eye(1)
    return np.atleast_2d(stats.special_ortho_group.rvs(n, random_state=rng))
