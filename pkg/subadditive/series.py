"""
Subadditive sequences built from cocycle norms, their residuals and Kingman limits
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple
import logging
import math

import numpy as np
import pandas as pd

from config.settings import Config
from core.errors import HorizonError, ValidationError, UnknownSymbolError
from core.rng import make_generator
from cocycle.generator import GeneratorMap
from cocycle.products import restricted_norms
from driving.types import SamplePath
from grassmann.subspace import Subspace

logger = logging.getLogger(__name__)

Builder = Callable[[SamplePath, int, int], np.ndarray]


# ==================== Builders ====================

@dataclass(frozen=True, eq=False)
class LogNormBuilder:
    """f_n(T^start x) = log‖A(n, T^start x)|L‖, or the full operator norm when L is None"""
    gen: GeneratorMap
    subspace: Optional[Subspace] = None
    kind: Optional[str] = None

    @property
    def tag(self) -> str:
        if self.subspace is None or self.subspace.is_full:
            return "log operator norm"
        return f"log restricted operator norm on L (dim {self.subspace.dim})"

    def __call__(self, path: SamplePath, n: int, start: int = 0) -> np.ndarray:
        basis = np.eye(self.gen.dimension) if self.subspace is None else self.subspace.basis
        return restricted_norms(self.gen, path, basis, n, kind=self.kind, start=start).log()[1:]


@dataclass(frozen=True, eq=False)
class AdditiveBuilder:
    """Birkhoff sums f_n = Σ_{j<n} f(x_j)"""
    values: Mapping[Hashable, float]

    @property
    def tag(self) -> str:
        return "additive"

    def __call__(self, path: SamplePath, n: int, start: int = 0) -> np.ndarray:
        if start + n > len(path):
            raise HorizonError(f"Need {start + n} symbols, path has {len(path)}")
        window = path.entries[start:start + n].tolist()
        try:
            steps = np.array([self.values[s] for s in window], dtype=float)
        except KeyError as exc:
            raise UnknownSymbolError(f"No value for symbol {exc.args[0]!r}") from None
        return np.cumsum(steps)


# ==================== Series ====================

@dataclass(frozen=True, eq=False)
class SubadditiveSeries:
    values: np.ndarray
    builder: str
    path_seed: Optional[int] = None
    path_offset: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ValidationError(f"A subadditive series needs at least 2 values, got {values.size}")
        object.__setattr__(self, 'values', values)

    @property
    def horizon(self) -> int:
        return int(self.values.size)

    def to_frame(self) -> pd.DataFrame:
        n = np.arange(1, self.horizon + 1)
        return pd.DataFrame({'n': n, 'f_n': self.values, 'f_n_over_n': self.values / n})


def build_series(builder: Builder, path: SamplePath, n: int) -> SubadditiveSeries:
    return SubadditiveSeries(
        values=builder(path, n, 0),
        builder=getattr(builder, 'tag', type(builder).__name__),
        path_seed=path.seed,
        path_offset=path.offset
    )


# ==================== Residuals ====================

@dataclass(frozen=True)
class SubadditivityResidual:
    value: float
    pairs: Tuple[Tuple[int, int], ...]
    residuals: Tuple[float, ...] = field(repr=False, default=())

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> Dict[str, Any]:
        return {'max_residual': self.value, 'pairs': [list(p) for p in self.pairs]}


def _pair_residual(whole: float, tail: float, head: float) -> float:
    if whole == -math.inf:
        return -math.inf
    if tail == -math.inf or head == -math.inf:
        return math.inf
    return whole - tail - head


def random_pairs(N: int, count: int, seed: int = 0) -> List[Tuple[int, int]]:
    """(m, n) with m, n ≥ 1 and m + n ≤ N"""
    if N < 2:
        raise ValidationError("Pairs need N ≥ 2")
    rng = make_generator(seed)
    pairs = []
    for _ in range(count):
        m = int(rng.integers(1, N))
        n = int(rng.integers(1, N - m + 1))
        pairs.append((m, n))
    return pairs


def subadditivity_residual(builder: Builder, path: SamplePath, N: int,
                           pairs: Optional[Sequence[Tuple[int, int]]] = None,
                           n_pairs: int = Config.RESIDUAL_PAIRS, seed: int = 0) -> SubadditivityResidual:
    """
    max over (m, n) of f_{m+n}(x) − f_n(T^m x) − f_m(x).

    A positive value is reported, not raised: restrictions to non-invariant
    subspaces need not be subadditive.
    """
    if N > len(path):
        raise HorizonError(f"Horizon {N} exceeds path length {len(path)}")
    pairs = list(pairs) if pairs is not None else random_pairs(N, n_pairs, seed)
    for m, n in pairs:
        if m < 1 or n < 1 or m + n > N:
            raise HorizonError(f"Pair (m={m}, n={n}) needs m, n ≥ 1 and m + n ≤ {N}")

    base = builder(path, N, 0)
    longest: Dict[int, int] = {}
    for m, n in pairs:
        longest[m] = max(longest.get(m, 0), n)
    shifted = {m: builder(path, n, m) for m, n in longest.items()}

    residuals = tuple(_pair_residual(base[m + n - 1], shifted[m][n - 1], base[m - 1]) for m, n in pairs)
    worst = max(residuals) if residuals else -math.inf
    logger.debug(f"Subadditivity residual over {len(pairs)} pairs: {worst:.3e}")
    return SubadditivityResidual(value=float(worst), pairs=tuple(pairs), residuals=residuals)


# ==================== Kingman ====================

@dataclass(frozen=True)
class KingmanLimit:
    value: float
    slope: float
    converged: bool
    authoritative: bool
    residual: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'tail_slope': self.slope,
            'converged': self.converged,
            'authoritative': self.authoritative,
            'subadditivity_residual': self.residual
        }


def kingman_limit(series: SubadditiveSeries, residual: Optional[float] = None,
                  tolerance: float = Config.KINGMAN_TOLERANCE) -> KingmanLimit:
    """
    f_N/N with the least-squares slope of f_n over the last half as a
    convergence cross-check. Non-authoritative when the series is known to
    break subadditivity.
    """
    f = series.values
    N = series.horizon
    authoritative = residual is None or float(residual) <= Config.RATE_TOLERANCE
    if np.isneginf(f[-1]):
        return KingmanLimit(-math.inf, -math.inf, True, authoritative, residual)

    lo = min(N // 2, N - 2)
    k = np.arange(lo + 1, N + 1, dtype=float)
    tail = f[lo:]
    if np.all(np.isfinite(tail)):
        slope = float(np.polyfit(k, tail, 1)[0])
    else:
        slope = math.nan

    value = float(f[-1] / N)
    converged = bool(math.isfinite(slope) and abs(value - slope) <= tolerance)
    return KingmanLimit(value, slope, converged, authoritative, None if residual is None else float(residual))
