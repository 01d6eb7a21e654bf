"""
Samplers for Bernoulli, Markov and Gaussian-walk driving processes

All samplers are pure functions of (spec, n, seed).
"""

from bisect import bisect_right
from typing import Union
import logging

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from core.errors import ValidationError, HorizonError, NonUniqueStationaryError, ConvergenceError
from core.rng import make_generator
from .types import BernoulliSpec, MarkovSpec, GaussianWalkSpec, SamplePath, SIMPLEX_TOL

logger = logging.getLogger(__name__)

DriverSpec = Union[BernoulliSpec, MarkovSpec, GaussianWalkSpec]

STATIONARY_RESIDUAL = 1e-12
POWER_ITERATION_LIMIT = 1_000_000


def _check_length(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"Path length must be an integer ≥ 1, got {n!r}")
    return int(n)


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf = cdf / cdf[-1]
    cdf[-1] = 1.0
    return cdf


def sample_bernoulli(spec: BernoulliSpec, n: int, seed: int) -> SamplePath:
    """i.i.d. symbols by inverse-CDF lookup of uniform draws"""
    n = _check_length(n)
    uniforms = make_generator(seed).random(n)
    idx = np.searchsorted(_cdf(spec.law), uniforms, side='right')
    return SamplePath(
        entries=spec.alphabet.as_array()[idx],
        seed=seed,
        source_tag=spec.source_tag,
        alphabet=spec.alphabet,
        stationary=True
    )


def sample_markov(spec: MarkovSpec, n: int, seed: int) -> SamplePath:
    """Entry 0 from the initial law, entry k+1 from the kernel row of entry k"""
    n = _check_length(n)
    uniforms = make_generator(seed).random(n).tolist()
    initial_cdf = _cdf(np.asarray(spec.initial)).tolist()
    row_cdfs = [_cdf(np.asarray(row)).tolist() for row in spec.kernel]

    idx = np.empty(n, dtype=np.int64)
    state = bisect_right(initial_cdf, uniforms[0])
    idx[0] = state
    for k in range(1, n):
        state = bisect_right(row_cdfs[state], uniforms[k])
        idx[k] = state

    return SamplePath(
        entries=spec.alphabet.as_array()[idx],
        seed=seed,
        source_tag=spec.source_tag,
        alphabet=spec.alphabet,
        stationary=spec.is_stationary
    )


def sample_gaussian_walk(spec: GaussianWalkSpec, n: int, seed: int) -> SamplePath:
    """Real-valued walk; flagged non-stationary since no invariant probability law exists"""
    n = _check_length(n)
    normals = make_generator(seed).standard_normal(n)
    x0 = spec.mean + spec.stddev * normals[0]
    walk = np.empty(n, dtype=float)
    walk[0] = x0
    if n > 1:
        walk[1:] = x0 + np.cumsum(spec.step_stddev * normals[1:])
    return SamplePath(
        entries=walk,
        seed=seed,
        source_tag=spec.source_tag,
        alphabet=None,
        stationary=False
    )


def sample(spec: DriverSpec, n: int, seed: int) -> SamplePath:
    """Dispatch on the driver spec type"""
    if isinstance(spec, BernoulliSpec):
        return sample_bernoulli(spec, n, seed)
    if isinstance(spec, MarkovSpec):
        return sample_markov(spec, n, seed)
    if isinstance(spec, GaussianWalkSpec):
        return sample_gaussian_walk(spec, n, seed)
    raise ValidationError(f"Unsupported driver spec: {type(spec).__name__}")


def shift(path: SamplePath, k: int) -> SamplePath:
    """The shift T^k: (x_0, x_1, ...) ↦ (x_k, x_{k+1}, ...)"""
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise ValidationError(f"Shift must be a nonnegative integer, got {k!r}")
    if k >= len(path):
        raise HorizonError(f"Shift {k} not below path length {len(path)}")
    if k == 0:
        return path
    return SamplePath(
        entries=path.entries[int(k):],
        seed=path.seed,
        source_tag=path.source_tag,
        alphabet=path.alphabet,
        stationary=path.stationary,
        offset=path.offset + int(k)
    )


def _check_kernel(kernel) -> np.ndarray:
    P = np.asarray(kernel, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
        raise ValidationError(f"Kernel must be a square matrix, got shape {P.shape}")
    if not np.all(np.isfinite(P)) or np.any(P < 0):
        raise ValidationError("Kernel entries must be finite and nonnegative")
    row_sums = P.sum(axis=1)
    if np.max(np.abs(row_sums - 1.0)) > SIMPLEX_TOL:
        raise ValidationError(f"Kernel is not row-stochastic: row sums {row_sums.tolist()}")
    return P


def closed_classes(kernel) -> int:
    """Number of closed communicating classes of the support graph"""
    P = _check_kernel(kernel)
    support = csr_matrix(P > 0)
    n_components, labels = connected_components(support, directed=True, connection='strong')
    rows, cols = support.nonzero()
    leaking = set(labels[rows[labels[rows] != labels[cols]]].tolist())
    return n_components - len(leaking)


def stationary_distribution(kernel, max_iterations: int = POWER_ITERATION_LIMIT) -> np.ndarray:
    """
    Unique π with πP = π on the simplex.

    Direct least-squares solve of (Pᵀ − I)π = 0 with Σπ = 1, falling back to
    power iteration on the lazy chain (P + I)/2 when the solve is not accurate.
    Raises ConvergenceError when neither reaches the residual target.
    """
    P = _check_kernel(kernel)
    classes = closed_classes(P)
    if classes != 1:
        raise NonUniqueStationaryError(
            f"Kernel has {classes} closed classes; the stationary law is not unique"
        )

    m = P.shape[0]
    system = np.vstack([P.T - np.eye(m), np.ones((1, m))])
    rhs = np.zeros(m + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()

    if np.max(np.abs(pi @ P - pi)) <= STATIONARY_RESIDUAL:
        return pi

    logger.debug("Direct stationary solve inaccurate, using power iteration")
    lazy = 0.5 * (P + np.eye(m))
    pi = np.full(m, 1.0 / m)
    for _ in range(max_iterations):
        nxt = pi @ lazy
        if np.max(np.abs(nxt - pi)) <= STATIONARY_RESIDUAL / 10:
            pi = nxt
            break
        pi = nxt
    pi = pi / pi.sum()

    residual = float(np.max(np.abs(pi @ P - pi)))
    if residual > STATIONARY_RESIDUAL:
        raise ConvergenceError(
            f"Stationary law residual {residual:.3g} above {STATIONARY_RESIDUAL:g} after {max_iterations} iterations"
        )
    return pi
