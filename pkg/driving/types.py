"""
Driving-process specifications and sample paths
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Optional, Sequence, Tuple

import numpy as np

from core.errors import ValidationError

SIMPLEX_TOL = 1e-12


def _probability_vector(values: Sequence[float], size: int, label: str) -> Tuple[float, ...]:
    probs = np.asarray(values, dtype=float)
    if probs.shape != (size,):
        raise ValidationError(f"{label} must have {size} entries, got shape {probs.shape}")
    if not np.all(np.isfinite(probs)) or np.any(probs < 0):
        raise ValidationError(f"{label} entries must be finite and nonnegative")
    if abs(probs.sum() - 1.0) > SIMPLEX_TOL:
        raise ValidationError(f"{label} sums to {probs.sum():.17g}, expected 1")
    return tuple(float(p) for p in probs)


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite list of distinct symbols"""
    symbols: Tuple[Hashable, ...]

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, 'symbols', symbols)
        if not symbols:
            raise ValidationError("Alphabet must contain at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ValidationError(f"Alphabet symbols must be distinct: {symbols}")

    @classmethod
    def range(cls, size: int) -> "Alphabet":
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: Hashable) -> int:
        return self.symbols.index(symbol)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.symbols)


@dataclass(frozen=True)
class BernoulliSpec:
    """i.i.d. symbols with law `probs`"""
    alphabet: Alphabet
    probs: Tuple[float, ...]
    source_tag: str = field(default="bernoulli", init=False)

    def __post_init__(self):
        object.__setattr__(self, 'probs', _probability_vector(self.probs, self.alphabet.size, "probs"))

    @property
    def law(self) -> np.ndarray:
        return np.asarray(self.probs)


@dataclass(frozen=True)
class MarkovSpec:
    """Markov chain with row-stochastic kernel and initial law"""
    alphabet: Alphabet
    kernel: Tuple[Tuple[float, ...], ...]
    initial: Tuple[float, ...]
    source_tag: str = field(default="markov", init=False)

    def __post_init__(self):
        m = self.alphabet.size
        kernel = np.asarray(self.kernel, dtype=float)
        if kernel.shape != (m, m):
            raise ValidationError(f"kernel must be {m}x{m}, got shape {kernel.shape}")
        rows = tuple(_probability_vector(row, m, f"kernel row {i}") for i, row in enumerate(kernel))
        object.__setattr__(self, 'kernel', rows)
        object.__setattr__(self, 'initial', _probability_vector(self.initial, m, "initial"))

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.kernel)

    @property
    def law(self) -> np.ndarray:
        """Invariant one-step law, used for mean-zero and ground-truth computations"""
        from .samplers import stationary_distribution
        return stationary_distribution(self.matrix)

    @property
    def is_stationary(self) -> bool:
        pi = np.asarray(self.initial)
        return bool(np.max(np.abs(pi @ self.matrix - pi)) <= 1e-10)


@dataclass(frozen=True)
class GaussianWalkSpec:
    """Real-valued random walk x_{k+1} = x_k + step_stddev·g_k"""
    mean: float = 0.0
    stddev: float = 0.0
    step_stddev: float = 1.0
    source_tag: str = field(default="gaussian_walk", init=False)

    def __post_init__(self):
        if not np.isfinite(self.mean):
            raise ValidationError("initial mean must be finite")
        if not (np.isfinite(self.stddev) and self.stddev >= 0):
            raise ValidationError(f"initial stddev must be ≥ 0, got {self.stddev}")
        if not (np.isfinite(self.step_stddev) and self.step_stddev > 0):
            raise ValidationError(f"step_stddev must be > 0, got {self.step_stddev}")


@dataclass(frozen=True, eq=False)
class SamplePath:
    """Finite prefix x_0, x_1, ... of a driving sequence"""
    entries: np.ndarray
    seed: Optional[int]
    source_tag: str
    alphabet: Optional[Alphabet] = None
    stationary: bool = True
    offset: int = 0

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.ndim != 1 or entries.size < 1:
            raise ValidationError("SamplePath needs a one-dimensional sequence of length ≥ 1")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)
        if self.alphabet is not None:
            known = set(self.alphabet.symbols)
            unknown = {s for s in np.unique(entries).tolist()} - known
            if unknown:
                raise ValidationError(f"Path entries outside the alphabet: {sorted(map(str, unknown))}")

    def __len__(self) -> int:
        return int(self.entries.size)

    def __getitem__(self, k):
        return self.entries[k]

    def symbols(self) -> list:
        return self.entries.tolist()

    def metadata(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'source_tag': self.source_tag,
            'length': len(self),
            'offset': self.offset,
            'stationary': self.stationary
        }

    def __repr__(self) -> str:
        return f"<SamplePath(source={self.source_tag}, seed={self.seed}, length={len(self)}, offset={self.offset})>"
