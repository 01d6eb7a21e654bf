"""
Infinite-horizon cost index Σ_n V(A(n,x)u) and its sampled essential infimum
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple
import logging
import math

import numpy as np
import pandas as pd

from config.settings import Config
from core.errors import ValidationError
from core.parallel import map_trials
from core.rng import trial_seeds
from cocycle.generator import GeneratorMap
from cocycle.products import propagate
from driving.samplers import DriverSpec, sample
from driving.types import SamplePath
from grassmann.subspace import Subspace
from .conditional import conditional_stability

logger = logging.getLogger(__name__)

COST_KINDS = ("norm", "weighted_norm", "quadratic")


@dataclass(frozen=True)
class CostFunction:
    """
    Norm-type stage cost V with V(u) ≤ γ‖u‖ whenever ‖u‖ ≤ δ:
    norm (γ = 1), weighted_norm w‖u‖ (γ = w), quadratic w‖u‖² (γ = w, δ = 1).
    """
    kind: str = "norm"
    weight: float = 1.0

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise ValidationError(f"Unknown cost kind {self.kind!r}; choose from {COST_KINDS}")
        if not (math.isfinite(self.weight) and self.weight > 0):
            raise ValidationError(f"Cost weight must be positive, got {self.weight}")

    @property
    def gamma(self) -> float:
        return 1.0 if self.kind == "norm" else float(self.weight)

    @property
    def delta(self) -> float:
        return 1.0 if self.kind == "quadratic" else math.inf

    def of_norms(self, norms: np.ndarray) -> np.ndarray:
        scale = 1.0 if self.kind == "norm" else self.weight
        with np.errstate(over='ignore'):
            return scale * (norms * norms if self.kind == "quadratic" else norms)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'weight': self.weight, 'gamma': self.gamma, 'delta': self.delta}


@dataclass(frozen=True, eq=False)
class CostReport:
    vector: np.ndarray
    horizon: int
    cost: CostFunction
    norms: np.ndarray = field(repr=False)
    partial_sums: np.ndarray = field(repr=False)
    tail_bound: float = math.inf
    rate: float = math.nan
    divergent: bool = True
    path_seed: Optional[int] = None

    @property
    def partial_sum(self) -> float:
        return float(self.partial_sums[-1])

    @property
    def total(self) -> float:
        return math.inf if self.divergent else self.partial_sum + self.tail_bound

    def to_frame(self) -> pd.DataFrame:
        n = np.arange(self.horizon + 1)
        return pd.DataFrame({'n': n, 'norm': self.norms, 'partial_sum': self.partial_sums})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'vector': self.vector.tolist(),
            'horizon': self.horizon,
            'cost': self.cost.to_dict(),
            'partial_sum': self.partial_sum,
            'tail_bound': self.tail_bound,
            'total': self.total,
            'rate': self.rate,
            'divergent': self.divergent,
            'path_seed': self.path_seed
        }


def _tail_bound(logs: np.ndarray, cost: CostFunction) -> Tuple[float, float]:
    """
    (rate, bound) from a least-squares fit of log‖A(n,x)u‖ over the last half.
    The bound scales the geometric tail by the largest overshoot above the
    fitted envelope; inf when the rate is not negative or ‖A(N,x)u‖ > δ.
    """
    N = logs.size - 1
    if logs[-1] == -math.inf:
        return -math.inf, 0.0
    lo = min(N // 2, N - 1)
    k = np.arange(lo, N + 1, dtype=float)
    window = logs[lo:]
    if not np.all(np.isfinite(window)):
        return math.nan, math.inf
    rate, intercept = np.polyfit(k, window, 1)
    rate = float(rate)
    if rate >= 0.0 or logs[-1] > math.log(cost.delta):
        return rate, math.inf
    overshoot = max(1.0, float(np.exp(np.max(window - (intercept + rate * k)))))
    ratio = math.exp(rate)
    return rate, cost.gamma * math.exp(logs[-1]) * overshoot * ratio / (1.0 - ratio)


def cost_index(gen: GeneratorMap, path: SamplePath, u, V: CostFunction, N: int,
               kind: Optional[str] = None) -> CostReport:
    """Partial sum Σ_{n=0}^{N} V(A(n,x)u) with a certified geometric tail bound when available"""
    if N < 1:
        raise ValidationError("Truncation must be ≥ 1")
    u = np.asarray(u, dtype=float).reshape(-1)
    if not np.any(u):
        zeros = np.zeros(N + 1)
        return CostReport(u, int(N), V, zeros, zeros, tail_bound=0.0, rate=-math.inf, divergent=False,
                          path_seed=path.seed)

    series = propagate(gen, path, u, N, kind=kind).column(0)
    logs = series.log()
    with np.errstate(over='ignore'):
        norms = series.values()
    partial = np.cumsum(V.of_norms(norms))
    rate, tail = _tail_bound(logs, V)
    return CostReport(
        vector=u,
        horizon=int(N),
        cost=V,
        norms=norms,
        partial_sums=partial,
        tail_bound=tail,
        rate=rate,
        divergent=not math.isfinite(tail),
        path_seed=path.seed
    )


@dataclass(frozen=True)
class OptimalCostReport:
    """Sample minimum of the cost over paths; an upper estimate of the essential infimum"""
    estimate: float
    trials: int
    horizon: int
    running_min: Tuple[float, ...]
    argmin_seed: Optional[int]
    divergent: bool
    convergent_paths: int
    stable_fraction: Optional[float] = None

    @property
    def nonincreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.running_min, self.running_min[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'estimate': self.estimate,
            'trials': self.trials,
            'horizon': self.horizon,
            'argmin_seed': self.argmin_seed,
            'divergent': self.divergent,
            'convergent_paths': self.convergent_paths,
            'stable_fraction': self.stable_fraction,
            'nonincreasing': self.nonincreasing
        }


def optimal_cost_estimate(gen: GeneratorMap, spec: DriverSpec, u, V: CostFunction, N: int, trials: int,
                          seed: int = 0, workers: int = Config.DEFAULT_WORKERS,
                          L: Optional[Subspace] = None) -> OptimalCostReport:
    """
    Minimum total cost over `trials` nested seeds.

    Conditional stability on L (span(u) by default) must be positive first;
    otherwise the report is divergent and no cost paths are simulated. Also
    divergent when no sampled path certifies a finite cost.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    if not np.any(u):
        return OptimalCostReport(estimate=0.0, trials=int(trials), horizon=int(N), running_min=(0.0,),
                                 argmin_seed=None, divergent=False, convergent_paths=int(trials))

    L = Subspace.span(u, ambient=gen.dimension) if L is None else L
    verdict = conditional_stability(gen, spec, L, max(int(N), Config.MIN_STABILITY_HORIZON),
                                    max(int(trials), Config.MIN_STABILITY_TRIALS), seed=seed, workers=workers)
    stable_fraction = max(verdict.lyapunov_fraction, verdict.exponential_fraction)
    if not (verdict.lyapunov_positive or verdict.exponential_positive):
        logger.info(f"No positive stable fraction on L (dim {L.dim}); cost flagged divergent")
        return OptimalCostReport(estimate=math.inf, trials=int(trials), horizon=int(N), running_min=(),
                                 argmin_seed=None, divergent=True, convergent_paths=0,
                                 stable_fraction=stable_fraction)

    seeds = trial_seeds(seed, trials)
    totals = map_trials(lambda s: cost_index(gen, sample(spec, N, s), u, V, N).total, seeds, workers)
    running = tuple(np.minimum.accumulate(np.asarray(totals, dtype=float)).tolist())
    finite = [t for t in totals if math.isfinite(t)]
    best = int(np.argmin(totals)) if finite else None
    estimate = float(running[-1])
    logger.info(f"Optimal cost estimate {estimate:.6g} from {len(finite)}/{len(totals)} convergent paths")
    return OptimalCostReport(
        estimate=estimate,
        trials=int(trials),
        horizon=int(N),
        running_min=running,
        argmin_seed=seeds[best] if best is not None else None,
        divergent=not finite,
        convergent_paths=len(finite),
        stable_fraction=stable_fraction
    )
