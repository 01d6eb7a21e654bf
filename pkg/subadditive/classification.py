"""
Monte Carlo checks on the sign of limsup f_n against the sign of the
Kingman limit, and recurrence of mean-zero Birkhoff sums
"""

from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Mapping, Optional, Tuple
import logging
import math

import numpy as np

from config.settings import Config
from core.errors import PreconditionError, ValidationError, UnknownSymbolError
from core.parallel import map_trials
from core.rng import trial_seeds
from cocycle.generator import GeneratorMap
from driving.samplers import DriverSpec, sample
from driving.types import BernoulliSpec, MarkovSpec
from grassmann.subspace import Subspace, subspace_contains, image_subspace
from .series import LogNormBuilder, SubadditiveSeries, kingman_limit

logger = logging.getLogger(__name__)


# ==================== Sign equivalence ====================

@dataclass(frozen=True)
class SignTrial:
    seed: int
    limsup_estimate: float
    limit: float
    limsup_negative: bool
    limit_negative: bool

    @property
    def agrees(self) -> bool:
        return self.limsup_negative == self.limit_negative

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'limsup_estimate': self.limsup_estimate,
            'limit': self.limit,
            'limsup_negative': self.limsup_negative,
            'limit_negative': self.limit_negative,
            'agrees': self.agrees
        }


@dataclass(frozen=True)
class SignEquivalenceReport:
    agreement: float
    trials: Tuple[SignTrial, ...]
    horizon: int
    margin: float
    rate_tolerance: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'agreement': self.agreement,
            'horizon': self.horizon,
            'margin': self.margin,
            'rate_tolerance': self.rate_tolerance,
            'trials': [t.to_dict() for t in self.trials]
        }


def _representative_matrices(gen: GeneratorMap) -> List[np.ndarray]:
    if gen.is_finite:
        return list(gen.stack)
    # both rule families are affine in a scalar, so the two bounds span every value
    return [gen.rule.matrix(b) for b in gen.rule.bounds]


def check_invariant(gen: GeneratorMap, L: Subspace, tol: float = Config.CONTAINMENT_TOL) -> float:
    """Largest residual of M·L ⊆ L over the step matrices; PreconditionError when L is not invariant"""
    worst = 0.0
    for M in _representative_matrices(gen):
        contained, residual = subspace_contains(L, image_subspace(M, L), tol)
        worst = max(worst, residual)
        if not contained:
            raise PreconditionError(f"Subspace is not invariant under the generator (residual {residual:.3e})")
    return worst


def classify_path(series: SubadditiveSeries, margin: float = Config.SIGN_MARGIN,
                  rate_tolerance: float = Config.RATE_TOLERANCE) -> Tuple[float, float, bool, bool]:
    """(F̂, limit, F̂ < −margin, limit < −rate_tolerance) with F̂ the max over the final half"""
    f = series.values
    half = f[series.horizon // 2:]
    limsup_estimate = float(np.max(half))
    limit = kingman_limit(series).value
    if math.isinf(limsup_estimate) and limsup_estimate < 0:
        return limsup_estimate, -math.inf, True, True
    return limsup_estimate, limit, bool(limsup_estimate < -margin), bool(limit < -rate_tolerance)


def sign_equivalence_trial(gen: GeneratorMap, spec: DriverSpec, L: Subspace, N: int, trials: int,
                           seed: int = 0, margin: float = Config.SIGN_MARGIN,
                           rate_tolerance: float = Config.RATE_TOLERANCE,
                           workers: int = Config.DEFAULT_WORKERS) -> SignEquivalenceReport:
    """
    Fraction of sampled paths on which {limsup f_n < 0} and {lim f_n/n < 0}
    agree, for f_n = log‖A(n,x)|L‖ with L invariant.
    """
    if N < 2:
        raise ValidationError("Horizon must be ≥ 2")
    check_invariant(gen, L)
    builder = LogNormBuilder(gen, L)

    def run(trial_seed: int) -> SignTrial:
        path = sample(spec, N, trial_seed)
        series = SubadditiveSeries(builder(path, N, 0), builder.tag, trial_seed)
        return SignTrial(trial_seed, *classify_path(series, margin, rate_tolerance))

    results = tuple(map_trials(run, trial_seeds(seed, trials), workers))
    agreement = sum(t.agrees for t in results) / len(results)
    logger.info(f"Sign equivalence: agreement {agreement:.3f} over {len(results)} paths at N={N}")
    return SignEquivalenceReport(agreement, results, int(N), float(margin), float(rate_tolerance))


# ==================== Recurrence ====================

@dataclass(frozen=True)
class RecurrenceReport:
    fraction: float
    epsilon: float
    lattice: bool
    horizon: int
    first_returns: Tuple[Optional[int], ...]
    seeds: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'fraction': self.fraction,
            'epsilon': self.epsilon,
            'lattice': self.lattice,
            'horizon': self.horizon,
            'first_returns': list(self.first_returns),
            'seeds': list(self.seeds)
        }


def _law(spec: DriverSpec) -> np.ndarray:
    if isinstance(spec, (BernoulliSpec, MarkovSpec)):
        return spec.law
    raise ValidationError("Recurrence needs a finite-alphabet driver")


def _lattice_steps(values: np.ndarray) -> Tuple[Optional[np.ndarray], float]:
    """Integer steps and unit when every value is an integer multiple of the smallest nonzero one"""
    nonzero = np.abs(values[values != 0.0])
    if nonzero.size == 0:
        return np.zeros(values.size, dtype=np.int64), 1.0
    unit = float(nonzero.min())
    ratios = values / unit
    steps = np.round(ratios)
    if np.allclose(ratios, steps, rtol=0.0, atol=1e-9):
        return steps.astype(np.int64), unit
    return None, unit


def atkinson_recurrence(f: Mapping[Hashable, float], spec: DriverSpec, N: int, trials: int,
                        epsilon: Optional[float] = None, seed: int = 0,
                        workers: int = Config.DEFAULT_WORKERS) -> RecurrenceReport:
    """
    Fraction of paths with min_{1<k≤N} |S_k| ≤ ε, S_k = Σ_{j<k} f(x_j).

    Lattice-valued f is summed in integers so ε = 0 tests exact returns.
    """
    if N < 2:
        raise ValidationError("Horizon must be ≥ 2")
    law = _law(spec)
    symbols = spec.alphabet.symbols
    missing = [s for s in symbols if s not in f]
    if missing:
        raise UnknownSymbolError(f"No value for symbols {missing}")
    values = np.array([float(f[s]) for s in symbols])
    mean = float(law @ values)
    if abs(mean) > Config.MEAN_ZERO_TOL:
        raise PreconditionError(f"f must have mean 0 under the driving law, got {mean:.3e}")

    steps, unit = _lattice_steps(values)
    lattice = steps is not None
    if epsilon is None:
        epsilon = Config.LATTICE_EPSILON if lattice else 0.05 * math.sqrt(float(law @ values ** 2))
    if epsilon < 0:
        raise ValidationError("epsilon must be ≥ 0")

    def run(trial_seed: int) -> Optional[int]:
        path = sample(spec, N, trial_seed)
        uniq, inverse = np.unique(path.entries, return_inverse=True)
        idx = np.array([spec.alphabet.index(s) for s in uniq.tolist()], dtype=np.int64)[inverse.reshape(-1)]
        if lattice:
            sums = np.abs(np.cumsum(steps[idx])) * unit
        else:
            sums = np.abs(np.cumsum(values[idx]))
        # sums[k-1] is S_k; only k ≥ 2 counts
        hits = np.flatnonzero(sums[1:] <= epsilon)
        return int(hits[0]) + 2 if hits.size else None

    seeds = tuple(trial_seeds(seed, trials))
    returns = tuple(map_trials(run, seeds, workers))
    fraction = sum(r is not None for r in returns) / len(returns)
    logger.info(f"Recurrence: {fraction:.3f} of {len(returns)} paths return within ε={epsilon:g} by N={N}")
    return RecurrenceReport(fraction, float(epsilon), lattice, int(N), returns, seeds)
