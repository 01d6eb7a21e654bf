"""
Conditional Lyapunov and exponential stability on a subspace L, estimated by
Monte Carlo over sampled paths.

A path counts as Lyapunov-stable when ‖A(N,x)|L‖ is below the norm
threshold and still falling; it counts as exponentially stable when
(1/N)·log‖A(N,x)|L‖ ≤ −rate_margin. Positivity of either set is asserted
only when the lower Wilson bound is above 0.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.stats import binomtest

from config.settings import Config
from core.errors import ValidationError
from core.parallel import map_trials
from core.rng import make_generator, trial_seeds, derive_seed
from cocycle.generator import GeneratorMap
from cocycle.products import restricted_norms
from driving.samplers import DriverSpec, sample
from driving.types import Alphabet, BernoulliSpec, MarkovSpec
from grassmann.subspace import Subspace

logger = logging.getLogger(__name__)


def wilson_interval(successes: int, trials: int, confidence: float = Config.CONFIDENCE_LEVEL) -> Tuple[float, float]:
    ci = binomtest(int(successes), int(trials)).proportion_ci(confidence_level=confidence, method='wilson')
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class PathClassification:
    seed: int
    log_norm: float
    rate: float
    lyapunov_stable: bool
    exponentially_stable: bool


@dataclass(frozen=True)
class StabilityVerdict:
    lyapunov_fraction: float
    exponential_fraction: float
    trials: int
    horizon: int
    rate_margin: float
    norm_threshold: float
    confidence: float
    lyapunov_interval: Tuple[float, float]
    exponential_interval: Tuple[float, float]
    median_rate: float
    paths: Tuple[PathClassification, ...] = field(default=(), repr=False)

    @property
    def lyapunov_positive(self) -> bool:
        return self.lyapunov_interval[0] > 0.0

    @property
    def exponential_positive(self) -> bool:
        return self.exponential_interval[0] > 0.0

    @property
    def agrees(self) -> bool:
        return self.lyapunov_positive == self.exponential_positive

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lyapunov_fraction': self.lyapunov_fraction,
            'exponential_fraction': self.exponential_fraction,
            'lyapunov_interval': list(self.lyapunov_interval),
            'exponential_interval': list(self.exponential_interval),
            'lyapunov_positive': self.lyapunov_positive,
            'exponential_positive': self.exponential_positive,
            'trials': self.trials,
            'horizon': self.horizon,
            'rate_margin': self.rate_margin,
            'norm_threshold': self.norm_threshold,
            'confidence': self.confidence,
            'median_rate': self.median_rate
        }


def classify_stability(gen: GeneratorMap, path, L: Subspace, N: int, rate_margin: float,
                       norm_threshold: float) -> PathClassification:
    logs = restricted_norms(gen, path, L.basis, N).log()
    final, middle = float(logs[N]), float(logs[N // 2])
    falling = final == -math.inf or final < middle
    rate = final / N
    return PathClassification(
        seed=path.seed,
        log_norm=final,
        rate=rate,
        lyapunov_stable=bool(final <= math.log(norm_threshold) and falling),
        exponentially_stable=bool(rate <= -rate_margin)
    )


def conditional_stability(gen: GeneratorMap, spec: DriverSpec, L: Subspace, N: int, trials: int,
                          rate_margin: float = Config.RATE_MARGIN,
                          norm_threshold: float = Config.NORM_THRESHOLD, seed: int = 0,
                          confidence: float = Config.CONFIDENCE_LEVEL,
                          workers: int = Config.DEFAULT_WORKERS) -> StabilityVerdict:
    if trials < Config.MIN_STABILITY_TRIALS:
        raise ValidationError(f"Need at least {Config.MIN_STABILITY_TRIALS} trials, got {trials}")
    if N < Config.MIN_STABILITY_HORIZON:
        raise ValidationError(f"Need a horizon of at least {Config.MIN_STABILITY_HORIZON}, got {N}")
    if L.is_zero:
        raise ValidationError("L must be a nonzero subspace")

    def run(trial_seed: int) -> PathClassification:
        return classify_stability(gen, sample(spec, N, trial_seed), L, N, rate_margin, norm_threshold)

    paths = tuple(map_trials(run, trial_seeds(seed, trials), workers))
    lyapunov = sum(p.lyapunov_stable for p in paths)
    exponential = sum(p.exponentially_stable for p in paths)
    verdict = StabilityVerdict(
        lyapunov_fraction=lyapunov / trials,
        exponential_fraction=exponential / trials,
        trials=int(trials),
        horizon=int(N),
        rate_margin=float(rate_margin),
        norm_threshold=float(norm_threshold),
        confidence=float(confidence),
        lyapunov_interval=wilson_interval(lyapunov, trials, confidence),
        exponential_interval=wilson_interval(exponential, trials, confidence),
        median_rate=float(np.median([p.rate for p in paths])),
        paths=paths
    )
    logger.debug(f"Stability on L (dim {L.dim}): lyapunov={verdict.lyapunov_fraction:.3f}, "
                 f"exponential={verdict.exponential_fraction:.3f}")
    return verdict


# ==================== Random diagonal instances ====================

@dataclass(frozen=True, eq=False)
class DiagonalInstance:
    """Diagonal generator whose true restricted rate is a Birkhoff average"""
    gen: GeneratorMap
    spec: DriverSpec
    L: Subspace
    axes: Tuple[int, ...]
    true_rate: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'driver': self.spec.source_tag,
            'axes': list(self.axes),
            'true_rate': self.true_rate,
            'diagonals': {str(s): np.diag(self.gen.matrix(s)).tolist() for s in self.gen.symbols}
        }


def birkhoff_rate(gen: GeneratorMap, spec: DriverSpec, axes: Sequence[int]) -> float:
    """max over axes j of Σ_s law(s)·log|A(s)_jj|, with log 0 = −inf"""
    law = spec.law
    diagonals = np.abs(np.array([np.diag(gen.matrix(s)) for s in spec.alphabet.symbols]))
    rates = []
    for j in axes:
        column = diagonals[:, j]
        if np.any((column == 0.0) & (law > 0.0)):
            rates.append(-math.inf)
        else:
            with np.errstate(divide='ignore'):
                logs = np.where(law > 0.0, np.log(np.where(column > 0.0, column, 1.0)), 0.0)
            rates.append(float(law @ logs))
    return max(rates)


def diagonal_instance(gen: GeneratorMap, spec: DriverSpec, axes: Sequence[int]) -> DiagonalInstance:
    if not gen.is_diagonal:
        raise ValidationError("Instance generator must be diagonal")
    axes = tuple(sorted(set(int(a) for a in axes)))
    return DiagonalInstance(gen, spec, Subspace.axes(gen.dimension, *axes), axes,
                            birkhoff_rate(gen, spec, axes))


def random_diagonal_instances(count: int, dimension: int = 2, symbols: int = 2,
                              seed: int = 0) -> List[DiagonalInstance]:
    """
    log|entry| uniform on [−1, 1] with a random sign; drivers alternate
    between Bernoulli and stationary Markov with Dirichlet-drawn laws.
    """
    rng = make_generator(seed)
    alphabet = Alphabet.range(symbols)
    instances = []
    for i in range(count):
        entries = np.exp(rng.uniform(-1.0, 1.0, (symbols, dimension)))
        entries *= rng.choice([-1.0, 1.0], size=(symbols, dimension))
        gen = GeneratorMap.diagonal(*entries, name=f"instance-{i}")

        if i % 2 == 0:
            spec = BernoulliSpec(alphabet, tuple(rng.dirichlet(np.ones(symbols))))
        else:
            kernel = rng.dirichlet(np.ones(symbols), size=symbols)
            initial = MarkovSpec(alphabet, tuple(map(tuple, kernel)), tuple([1.0 / symbols] * symbols)).law
            spec = MarkovSpec(alphabet, tuple(map(tuple, kernel)), tuple(initial))

        size = int(rng.integers(1, dimension + 1))
        axes = rng.choice(dimension, size=size, replace=False)
        instances.append(diagonal_instance(gen, spec, axes))
    return instances


# ==================== Equivalence ====================

@dataclass(frozen=True)
class EquivalenceReport:
    agreement: float
    evaluated: int
    disagreements: Tuple[Dict[str, Any], ...]
    boundary: Tuple[Dict[str, Any], ...]
    rate_margin: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'agreement': self.agreement,
            'evaluated': self.evaluated,
            'rate_margin': self.rate_margin,
            'disagreements': list(self.disagreements),
            'boundary': list(self.boundary)
        }


def equivalence_check(instances: Sequence[DiagonalInstance], N: int = 10_000,
                      trials: int = Config.MIN_STABILITY_TRIALS, rate_margin: float = Config.RATE_MARGIN,
                      norm_threshold: float = Config.NORM_THRESHOLD, seed: int = 0,
                      confidence: float = Config.CONFIDENCE_LEVEL,
                      workers: int = Config.DEFAULT_WORKERS) -> EquivalenceReport:
    """
    Compare Lyapunov and exponential positivity verdicts per instance.
    Instances whose true or median fitted rate lies within rate_margin of 0
    are kept out of the agreement rate and listed under `boundary`.
    """
    disagreements, boundary = [], []
    agreed = evaluated = 0
    for i, inst in enumerate(instances):
        verdict = conditional_stability(inst.gen, inst.spec, inst.L, N, trials, rate_margin, norm_threshold,
                                        derive_seed(seed, i), confidence, workers)
        entry = dict(inst.to_dict(), index=i, agrees=verdict.agrees, verdict=verdict.to_dict())
        if abs(inst.true_rate) < rate_margin or abs(verdict.median_rate) < rate_margin:
            boundary.append(entry)
            continue
        evaluated += 1
        if verdict.agrees:
            agreed += 1
        else:
            disagreements.append(entry)

    agreement = agreed / evaluated if evaluated else 1.0
    logger.info(f"Stability equivalence: {agreed}/{evaluated} agree, {len(boundary)} in the boundary band")
    return EquivalenceReport(agreement, evaluated, tuple(disagreements), tuple(boundary), float(rate_margin))
