"""
Directional exponents, windowed limsup statistics and the search for
non-shrinking vectors
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union
import logging
import math

import numpy as np

from config.settings import Config
from core.errors import ValidationError, PreconditionError
from core.rng import make_generator
from cocycle.generator import GeneratorMap
from cocycle.norms import vector_norm
from cocycle.products import NormSeries, propagate, restricted_norms
from driving.types import SamplePath
from grassmann.subspace import Subspace, subspace_contains, intersect_with_complement

logger = logging.getLogger(__name__)

Target = Union[np.ndarray, Subspace]


def default_burn_in(n: int) -> int:
    return int(n * Config.BURN_IN_FRACTION)


@dataclass(frozen=True, eq=False)
class DirectionalExponent:
    vector: np.ndarray
    horizon: int
    value: float
    tail_window: np.ndarray
    log_norms: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            'vector': self.vector.tolist(),
            'horizon': self.horizon,
            'value': self.value,
            'tail_min': float(self.tail_window.min()) if self.tail_window.size else None,
            'tail_max': float(self.tail_window.max()) if self.tail_window.size else None
        }


def directional_exponent(gen: GeneratorMap, path: SamplePath, v, n: int, kind: Optional[str] = None,
                         tail: Optional[int] = None) -> DirectionalExponent:
    """(1/n)·log‖A(n,x)v‖; the zero vector gets −inf"""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"Horizon must be ≥ 1, got {n!r}")
    v = np.asarray(v, dtype=float).reshape(-1)
    width = tail or max(1, n // 10)
    ks = np.arange(n - width + 1, n + 1)

    if not np.any(v):
        return DirectionalExponent(v, n, -math.inf, np.full(ks.size, -math.inf), np.full(n + 1, -math.inf))

    logs = propagate(gen, path, v, n, kind=kind).log()[:, 0]
    return DirectionalExponent(
        vector=v,
        horizon=int(n),
        value=float(logs[n] / n),
        tail_window=logs[ks] / ks,
        log_norms=logs
    )


@dataclass(frozen=True, eq=False)
class LimsupStats:
    """Running max of e^{−weight·k}‖A(k,x)·target‖ over k in [n0, n]"""
    weight: float
    target: Target
    window: Tuple[int, int]
    running_max: np.ndarray
    max_value: float
    argmax: int

    def to_dict(self) -> Dict[str, Any]:
        target = ({'subspace': self.target.to_json()} if isinstance(self.target, Subspace)
                  else {'vector': np.asarray(self.target).tolist()})
        return dict(target, weight=self.weight, window=list(self.window),
                    max_value=self.max_value, argmax=self.argmax)


def _target_series(gen: GeneratorMap, path: SamplePath, target: Target, n: int,
                   kind: Optional[str]) -> NormSeries:
    if isinstance(target, Subspace):
        return restricted_norms(gen, path, target.basis, n, kind=kind)
    return propagate(gen, path, np.asarray(target, dtype=float).reshape(-1), n, kind=kind).column(0)


def limsup_stats(gen: GeneratorMap, path: SamplePath, weight: float, target: Target, n: int,
                 n0: Optional[int] = None, kind: Optional[str] = None) -> LimsupStats:
    """
    Windowed lower estimate of limsup e^{−weight·k}‖A(k,x)v‖, or of the
    restricted operator norm when the target is a Subspace.
    """
    n0 = default_burn_in(n) if n0 is None else int(n0)
    if not 0 <= n0 < n:
        raise ValidationError(f"Need n > n0 ≥ 0, got n0={n0}, n={n}")
    weighted = _target_series(gen, path, target, n, kind).weighted(weight, start=n0)
    running = np.maximum.accumulate(weighted)
    best = int(np.argmax(weighted))
    return LimsupStats(
        weight=float(weight),
        target=target,
        window=(n0, int(n)),
        running_max=running,
        max_value=float(running[-1]),
        argmax=n0 + best
    )


# ==================== Non-shrinking vectors ====================

@dataclass(frozen=True, eq=False)
class NonshrinkingSearch:
    vector: np.ndarray
    stats: LimsupStats
    ratio: float
    certified: bool
    tolerance: float
    evaluated: int
    seed: int

    @property
    def status(self) -> str:
        return "certified" if self.certified else "not found at this horizon"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'vector': self.vector.tolist(),
            'ratio': self.ratio,
            'status': self.status,
            'tolerance': self.tolerance,
            'evaluated': self.evaluated,
            'seed': self.seed,
            'window': list(self.stats.window)
        }


def _unit_columns(C: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(C, axis=0)
    keep = norms > 1e-12
    return C[:, keep] / norms[keep]


def find_nonshrinking_vector(gen: GeneratorMap, path: SamplePath, weight: float, V_i: Subspace,
                             V_prev: Subspace, n: int, trials: int = Config.SEARCH_DIRECTIONS,
                             n0: Optional[int] = None, tol: float = Config.CERTIFY_TOL, seed: int = 0,
                             refinements: int = Config.SEARCH_REFINEMENTS,
                             kind: Optional[str] = None) -> NonshrinkingSearch:
    """
    Search unit vectors of V_i ∩ V_prev^⊥ for a large windowed sup of
    e^{−weight·k}‖A(k,x)v‖; certified when the sup reaches (1 − tol)·‖v‖.
    """
    if V_prev.dim >= V_i.dim or not subspace_contains(V_i, V_prev):
        raise PreconditionError(f"V_prev (dim {V_prev.dim}) must be a proper subspace of V_i (dim {V_i.dim})")
    n0 = default_burn_in(n) if n0 is None else int(n0)
    if not 0 <= n0 < n:
        raise ValidationError(f"Need n > n0 ≥ 0, got n0={n0}, n={n}")
    kind = kind or gen.norm

    block = intersect_with_complement(V_i, V_prev)
    B = block.basis
    q = block.dim

    rng = make_generator(seed)
    candidates = np.hstack([
        np.eye(q), -np.eye(q),
        B.T @ np.eye(gen.dimension),
        rng.standard_normal((q, trials))
    ])
    candidates = _unit_columns(candidates)
    evaluated = 0

    def score(C: np.ndarray) -> np.ndarray:
        nonlocal evaluated
        vectors = B @ C
        vectors = vectors / vector_norm(vectors, kind, axis=0)
        evaluated += C.shape[1]
        series = propagate(gen, path, vectors, n, kind=kind)
        return series.weighted(weight, start=n0).max(axis=0)

    scores = score(candidates)
    best = int(np.argmax(scores))
    coords, best_score = candidates[:, best], float(scores[best])

    step = 0.5
    for _ in range(refinements if q > 1 else 0):
        moves = np.hstack([coords[:, None] + step * np.eye(q), coords[:, None] - step * np.eye(q)])
        moves = _unit_columns(moves)
        move_scores = score(moves)
        j = int(np.argmax(move_scores))
        if move_scores[j] > best_score:
            coords, best_score = moves[:, j], float(move_scores[j])
        else:
            step /= 2.0

    vector = B @ coords
    vector = vector / vector_norm(vector, kind)
    stats = limsup_stats(gen, path, weight, vector, n, n0=n0, kind=kind)
    certified = stats.max_value >= 1.0 - tol
    logger.debug(f"Non-shrinking search: ratio={stats.max_value:.6f} after {evaluated} candidates")
    return NonshrinkingSearch(
        vector=vector,
        stats=stats,
        ratio=stats.max_value,
        certified=bool(certified),
        tolerance=float(tol),
        evaluated=evaluated,
        seed=int(seed)
    )
