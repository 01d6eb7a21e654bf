"""
Pinned seeded random source

Every random draw in the lab goes through make_generator so the algorithm
identifier recorded in manifests stays truthful.
"""

from typing import List

import numpy as np

from .errors import ValidationError

RNG_ALGORITHM = "numpy.random.PCG64(SeedSequence)"
SEED_LIMIT = 2 ** 64


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"Seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValidationError(f"Seed {seed} outside the 64-bit range")
    return seed


def make_generator(seed: int) -> np.random.Generator:
    """Generator for a 64-bit seed"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_check_seed(seed))))


def trial_seeds(base_seed: int, trials: int) -> List[int]:
    """Consecutive seeds; seed sets for fewer trials are prefixes of larger ones"""
    base_seed = _check_seed(base_seed)
    if trials < 1:
        raise ValidationError(f"trials must be ≥ 1, got {trials}")
    return [(base_seed + i) % SEED_LIMIT for i in range(trials)]


def derive_seed(seed: int, *keys: int) -> int:
    """Independent child seed for auxiliary draws tied to a parent seed"""
    state = np.random.SeedSequence([_check_seed(seed), *[int(k) for k in keys]]).generate_state(2, np.uint64)
    return (int(state[0]) << 32 ^ int(state[1])) % SEED_LIMIT
