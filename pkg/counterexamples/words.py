"""
Binary words σ_k with σ_1 = (1) and σ_k = σ_{k−1} 0^{L_{k−1}²} σ_{k−1}.

Driving the halving generator along σ_k sends ‖A(n)e₁‖ to 0 while the
directional exponent also tends to 0: decay without an exponential rate.
"""

from dataclasses import dataclass
from typing import Any, Dict, List
import logging
import math

import numpy as np
import pandas as pd

from config.settings import Config
from core.errors import ResourceLimitError, ValidationError
from cocycle.presets import halving_generator
from cocycle.products import propagate
from driving.types import Alphabet, SamplePath

logger = logging.getLogger(__name__)


def word_length(k: int) -> int:
    """L_1 = 1, L_k = L_{k−1}(L_{k−1} + 2), i.e. 2^{2^{k−1}} − 1"""
    length = 1
    for _ in range(k - 1):
        length = length * (length + 2)
    return length


def _check_generation(k: int) -> int:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValidationError(f"Generation must be an integer ≥ 1, got {k!r}")
    if k > Config.MAX_WORD_GENERATION:
        raise ResourceLimitError(
            f"Generation {k} has length {word_length(int(k))}; "
            f"only generations up to {Config.MAX_WORD_GENERATION} "
            f"(length {word_length(Config.MAX_WORD_GENERATION)}) are built"
        )
    return int(k)


@dataclass(frozen=True, eq=False)
class Word:
    packed: np.ndarray
    length: int
    generation: int

    @property
    def bits(self) -> np.ndarray:
        return np.unpackbits(self.packed, count=self.length)

    @property
    def ones(self) -> int:
        return int(self.bits.sum())

    def to_text(self) -> str:
        return "".join("1" if b else "0" for b in self.bits.tolist())

    def as_path(self) -> SamplePath:
        return SamplePath(
            entries=self.bits.astype(np.int64),
            seed=None,
            source_tag=f"word:{self.generation}",
            alphabet=Alphabet((0, 1))
        )

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return f"<Word(generation={self.generation}, length={self.length}, ones={self.ones})>"


def slow_decay_word(k: int) -> Word:
    k = _check_generation(k)
    bits = np.ones(1, dtype=np.uint8)
    for _ in range(k - 1):
        bits = np.concatenate([bits, np.zeros(bits.size ** 2, dtype=np.uint8), bits])
    logger.debug(f"Built word generation {k} of length {bits.size}")
    return Word(packed=np.packbits(bits), length=int(bits.size), generation=k)


@dataclass(frozen=True, eq=False)
class SlowDecayTrajectory:
    generation: int
    vector: np.ndarray
    n: np.ndarray
    norms: np.ndarray
    exponents: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'n': self.n, 'norm': self.norms, 'exponent': self.exponents})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'generation': self.generation,
            'vector': self.vector.tolist(),
            'length': int(self.n[-1]),
            'final_norm': float(self.norms[-1]),
            'final_exponent': float(self.exponents[-1])
        }


def slow_decay_trajectory(k: int, v) -> SlowDecayTrajectory:
    """‖A(n, σ_k)v‖ and (1/n)·log‖A(n, σ_k)v‖ for n = 1..L_k"""
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (2,) or not np.any(v):
        raise ValidationError(f"Need a nonzero vector in R^2, got {v.tolist()}")
    word = slow_decay_word(k)
    series = propagate(halving_generator(), word.as_path(), v, word.length).column(0)
    n = np.arange(1, word.length + 1)
    return SlowDecayTrajectory(
        generation=word.generation,
        vector=v,
        n=n,
        norms=series.values()[1:],
        exponents=series.log()[1:] / n
    )


def closed_form_generation_exponent(k: int) -> float:
    """(1/L_k)·log‖A(L_k, σ_k)e₁‖ = −2^{k−1}·log 2 / (2^{2^{k−1}} − 1)"""
    k = int(k)
    return -(2 ** (k - 1)) * math.log(2.0) / word_length(k)


def generation_exponents(k_max: int = Config.MAX_WORD_GENERATION) -> List[float]:
    """e₁ exponents at the end of σ_1..σ_{k_max}, read off one trajectory along σ_{k_max}"""
    trajectory = slow_decay_trajectory(k_max, [1.0, 0.0])
    return [float(trajectory.exponents[word_length(k) - 1]) for k in range(1, k_max + 1)]
