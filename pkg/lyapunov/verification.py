"""
Pathwise verification of filtration, exponent and stable-subspace properties.

Each check is a CheckResult; a check whose premise is empty (for example no
stable directions) passes vacuously and says so in its detail.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import logging
import math

import numpy as np

from config.settings import Config
from core.checks import CheckResult, summarize_checks
from core.errors import HorizonError, ValidationError
from core.rng import make_generator
from cocycle.generator import GeneratorMap, step_matrix
from driving.types import SamplePath
from driving.samplers import shift
from grassmann.subspace import Subspace, subspace_contains, image_subspace
from grassmann.flag import Flag
from .spectrum import LyapunovSpectrum, spectrum_distance
from .filtration import filtration_estimate, stable_subspace, orbit_stable_frames, StableSubspaceEstimate
from .directional import directional_exponent, limsup_stats, default_burn_in

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    epsilon: float = Config.EPSILON
    containment: float = Config.CONTAINMENT_TOL
    invariance: float = Config.INVARIANCE_TOL
    sample_vectors: int = Config.SAMPLE_VECTORS
    seed: int = 0
    burn_in: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.sample_vectors < 1:
            raise ValidationError("sample_vectors must be ≥ 1")


@dataclass(frozen=True, eq=False)
class MetReport:
    passed: bool
    checks: List[CheckResult]
    spectrum: LyapunovSpectrum
    flag: Flag
    stable: StableSubspaceEstimate
    horizon: int
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'horizon': self.horizon,
            'summary': summarize_checks(self.checks),
            'checks': [c.to_dict() for c in self.checks],
            'spectrum': self.spectrum.to_dict(),
            'flag': self.flag.to_json(),
            'stable_subspace': self.stable.to_dict(),
            'diagnostics': self.diagnostics
        }


def _sample_unit(basis: np.ndarray, rng: np.random.Generator, count: int) -> np.ndarray:
    coords = rng.standard_normal((basis.shape[1], count))
    vectors = basis @ coords
    return vectors / np.linalg.norm(vectors, axis=0)


def _vacuous(name: str, reason: str) -> CheckResult:
    return CheckResult(name=name, passed=True, detail={'vacuous': True, 'reason': reason})


def stable_block_length(spread: float, n: int, budget: float = Config.PRECISION_BUDGET) -> int:
    """Longest block over which roundoff along the top direction grows by at most e^budget"""
    if not math.isfinite(spread) or spread <= 0.0:
        return int(n)
    return max(1, min(int(n), int(budget / spread)))


def blockwise_stable_exponent(gen: GeneratorMap, path: SamplePath, v: np.ndarray, n: int, block: int,
                              frames: Dict[int, np.ndarray]) -> float:
    """
    (1/n)·log‖A(n,x)v‖ for v in V̂ˢ(x), re-projecting onto A(k,x)·V̂ˢ(x) at
    each block start so that roundoff never leaves the stable side.
    """
    w = np.asarray(v, dtype=float)
    log_total = 0.0
    for start in range(0, n, block):
        basis = frames[start]
        norm = float(np.linalg.norm(w))
        w = basis @ (basis.T @ w)
        projected = float(np.linalg.norm(w))
        if projected == 0.0:
            return -math.inf
        w *= norm / projected
        for M in gen.steps(path, min(block, n - start), start):
            w = M @ w
            norm = float(np.linalg.norm(w))
            if norm == 0.0:
                return -math.inf
            log_total += math.log(norm)
            w /= norm
    return log_total / n


def _stable_checks(gen, path, n, stable: Subspace, spectrum: LyapunovSpectrum, tol: Tolerances,
                   rng) -> List[CheckResult]:
    if stable.is_zero:
        return [_vacuous('exponent_negative_on_stable', 'estimated stable subspace is {0}')]
    vectors = _sample_unit(stable.basis, rng, tol.sample_vectors).T

    finite = [e for e in spectrum.exponents if math.isfinite(e)]
    spread = finite[-1] - finite[0] if finite else 0.0
    block = stable_block_length(spread, n)
    detail: Dict[str, Any] = {'block': block, 'precision_limited': spread > Config.PRECISION_BUDGET}

    if gen.is_diagonal or stable.is_full or block >= n:
        values = [directional_exponent(gen, path, v, n).value for v in vectors]
    else:
        frames = orbit_stable_frames(gen, path, n, stable.dim, range(0, n, block))
        values = [blockwise_stable_exponent(gen, path, v, n, block, frames) for v in vectors]

    worst = max(values)
    detail['exponents'] = values
    return [CheckResult('exponent_negative_on_stable', bool(worst < 0.0), value=worst, tolerance=0.0,
                        detail=detail)]


def _off_stable_checks(gen, path, n, stable: Subspace, tol: Tolerances, rng, n0: int) -> List[CheckResult]:
    if stable.is_full:
        return [_vacuous('exponent_nonnegative_off_stable', 'estimated stable subspace is R^d'),
                _vacuous('trajectory_sup_off_stable', 'estimated stable subspace is R^d')]

    outside = _sample_unit(stable.complement().basis, rng, tol.sample_vectors)
    if not stable.is_zero:
        inside = _sample_unit(stable.basis, rng, tol.sample_vectors)
        mix = rng.standard_normal(tol.sample_vectors)
        outside = outside + mix * inside
        outside = outside / np.linalg.norm(outside, axis=0)

    exponents, ratios = [], []
    for v in outside.T:
        exponents.append(directional_exponent(gen, path, v, n).value)
        dist = stable.distance(v)
        stats = limsup_stats(gen, path, 0.0, v, n, n0=n0, kind="2")
        ratios.append(stats.max_value / dist)

    low = min(exponents)
    worst_ratio = min(ratios)
    return [
        CheckResult('exponent_nonnegative_off_stable', bool(low >= -tol.epsilon), value=low,
                    tolerance=-tol.epsilon, detail={'exponents': exponents}),
        CheckResult('trajectory_sup_off_stable', bool(worst_ratio >= tol.epsilon), value=worst_ratio,
                    tolerance=tol.epsilon, detail={'ratios': ratios})
    ]


def _operator_norm_check(gen, path, n, stable: Subspace, tol: Tolerances, n0: int) -> CheckResult:
    if stable.is_full:
        return _vacuous('operator_norm_sup', 'estimated stable subspace is R^d')
    stats = limsup_stats(gen, path, 0.0, Subspace.full(gen.dimension), n, n0=n0, kind="2")
    return CheckResult('operator_norm_sup', bool(stats.max_value >= 1.0 - tol.epsilon), value=stats.max_value,
                       tolerance=1.0 - tol.epsilon, detail={'argmax': stats.argmax})


def _invariance_checks(gen, path, flag_x: Flag, flag_tx: Flag, tol: Tolerances) -> List[CheckResult]:
    same_dims = flag_x.dims == flag_tx.dims
    checks = [CheckResult('filtration_dimension', bool(same_dims),
                          detail={'dims_x': flag_x.dims, 'dims_tx': flag_tx.dims})]
    if len(flag_x) != len(flag_tx):
        checks.append(CheckResult('filtration_invariance', False,
                                  detail={'reason': 'level counts differ along the orbit'}))
        return checks

    step = step_matrix(gen, path[0])
    residuals = []
    for V_x, V_tx in zip(flag_x.levels, flag_tx.levels):
        _, residual = subspace_contains(V_tx, image_subspace(step, V_x), tol=tol.invariance)
        residuals.append(float(residual))
    worst = max(residuals)
    checks.append(CheckResult('filtration_invariance', bool(worst <= tol.invariance), value=worst,
                              tolerance=tol.invariance, detail={'residuals': residuals}))
    return checks


def verify_met(gen: GeneratorMap, path: SamplePath, n: int, gap_threshold: float = Config.GAP_THRESHOLD,
               tolerances: Optional[Tolerances] = None) -> MetReport:
    """
    Run the pathwise checks at horizon n: sign of directional exponents on and
    off the estimated stable subspace, windowed sups bounded away from zero,
    flag invariance and dimension agreement between x and Tx, and agreement of
    the spectra estimated at x and Tx.
    """
    tol = tolerances or Tolerances()
    if len(path) < n + 1:
        raise HorizonError(f"verify_met needs a path of length ≥ n+1 = {n + 1}, got {len(path)}")
    n0 = default_burn_in(n) if tol.burn_in is None else tol.burn_in
    rng = make_generator(tol.seed)

    estimate = filtration_estimate(gen, path, n, gap_threshold)
    stable = stable_subspace(estimate, margin=tol.epsilon)
    shifted = filtration_estimate(gen, shift(path, 1), n, gap_threshold, convergence=False)

    checks: List[CheckResult] = []
    checks += _stable_checks(gen, path, n, stable.subspace, estimate.spectrum, tol, rng)
    checks += _off_stable_checks(gen, path, n, stable.subspace, tol, rng, n0)
    checks.append(_operator_norm_check(gen, path, n, stable.subspace, tol, n0))
    checks += _invariance_checks(gen, path, estimate.flag, shifted.flag, tol)

    distance = spectrum_distance(estimate.spectrum, shifted.spectrum)
    checks.append(CheckResult(
        'exponent_shift_invariance',
        bool(distance is not None and distance <= 2.0 * gap_threshold),
        value=distance if distance is not None else math.inf,
        tolerance=2.0 * gap_threshold
    ))

    passed = all(c.passed for c in checks)
    summary = summarize_checks(checks)
    if passed:
        logger.info(f"verify_met passed {summary['total']} checks at n={n}")
    else:
        logger.warning(f"verify_met failed checks {summary['failed']} at n={n}")

    return MetReport(
        passed=passed,
        checks=checks,
        spectrum=estimate.spectrum,
        flag=estimate.flag,
        stable=stable,
        horizon=int(n),
        diagnostics={'gap_detected': stable.gap_detected, 'burn_in': n0,
                     'hausdorff_half_horizon': list(estimate.convergence or ())}
    )
