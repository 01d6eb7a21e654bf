"""
Filtration estimates from right singular subspaces of A(n,x)
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple
import logging

import numpy as np

from config.settings import Config
from core.errors import UngroupableSpectrumError, HorizonError
from cocycle.generator import GeneratorMap
from cocycle.products import qr_accumulate, generic_frame
from driving.types import SamplePath
from driving.samplers import shift
from grassmann.subspace import Subspace
from grassmann.flag import Flag
from grassmann.metric import hausdorff_distance
from .spectrum import LyapunovSpectrum, spectrum as estimate_spectrum

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiltrationEstimate:
    """Estimated flag with its spectrum and the half-horizon convergence indicator"""
    flag: Flag
    spectrum: LyapunovSpectrum
    convergence: Optional[Tuple[float, ...]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'levels': self.flag.to_json(),
            'spectrum': self.spectrum.to_dict(),
            'hausdorff_half_horizon': list(self.convergence) if self.convergence is not None else None
        }


@dataclass(frozen=True, eq=False)
class StableSubspaceEstimate:
    """V̂ˢ: the largest flag level with exponent below −margin"""
    subspace: Subspace
    horizon: int
    profile: Tuple[float, ...]
    gap_detected: bool
    margin: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dim': self.subspace.dim,
            'basis': self.subspace.to_json(),
            'horizon': self.horizon,
            'profile': list(self.profile),
            'gap_detected': self.gap_detected,
            'margin': self.margin
        }


def singular_frame(gen: GeneratorMap, path: SamplePath, n: int,
                   reorth_period: int = Config.REORTH_PERIOD) -> Tuple[np.ndarray, np.ndarray]:
    """
    Orthonormal frame of approximate right singular vectors of A(n,x), ordered
    by decreasing growth, with the matching log growth rates.
    """
    initial = None if gen.is_diagonal else generic_frame(gen.dimension)
    state = qr_accumulate(gen, path, n, reorth_period=reorth_period, transpose=True, initial=initial)
    order = np.argsort(-state.log_r, kind='stable')
    return state.Q[:, order], state.log_r[order] / n


def _levels(frame: np.ndarray, multiplicities: Iterable[int]) -> List[Subspace]:
    d = frame.shape[0]
    levels = []
    cumulative = 0
    for m in multiplicities:
        cumulative += m
        if cumulative == d:
            levels.append(Subspace.full(d))
        else:
            levels.append(Subspace(d, frame[:, d - cumulative:]))
    return levels


def check_groupable(spec: LyapunovSpectrum):
    """Chained merging that spreads a group over more than twice the threshold is ambiguous"""
    spans = spec.diagnostics.get('group_spans', [])
    wide = [s for s in spans if s > 2.0 * spec.gap_threshold]
    if wide:
        raise UngroupableSpectrumError(
            f"Raw exponents {list(spec.raw)} have no clear gaps at threshold {spec.gap_threshold}",
            diagnostics={'raw': list(spec.raw), 'group_spans': spans, 'gap_threshold': spec.gap_threshold}
        )


def filtration_estimate(gen: GeneratorMap, path: SamplePath, n: int,
                        gap_threshold: float = Config.GAP_THRESHOLD,
                        reorth_period: int = Config.REORTH_PERIOD,
                        convergence: bool = True) -> FiltrationEstimate:
    """
    V^(i) = span of the right singular directions whose growth falls at or
    below λ_i; nested, labelled with the grouped exponents, top level R^d.
    """
    spec = estimate_spectrum(gen, path, n, gap_threshold, reorth_period)
    check_groupable(spec)

    frame, _ = singular_frame(gen, path, n, reorth_period)
    levels = _levels(frame, spec.multiplicities)
    flag = Flag(gen.dimension, tuple(levels), spec.exponents)

    distances = None
    if convergence and n // 2 >= 1:
        half_frame, _ = singular_frame(gen, path, n // 2, reorth_period)
        half_levels = _levels(half_frame, spec.multiplicities)
        distances = tuple(hausdorff_distance(a, b) for a, b in zip(half_levels, levels))

    logger.debug(f"Filtration at n={n}: dims={flag.dims}, convergence={distances}")
    return FiltrationEstimate(flag=flag, spectrum=spec, convergence=distances)


def stable_subspace(estimate: FiltrationEstimate, margin: float = Config.EPSILON) -> StableSubspaceEstimate:
    """
    Split at 0: levels with exponent < −margin are stable. The gap flag is
    cleared when an exponent sits in the ambiguous band [−margin, −gap/2).
    """
    spec = estimate.spectrum
    ambiguous = [e for e in spec.exponents if -margin <= e < -spec.gap_threshold / 2.0]
    return StableSubspaceEstimate(
        subspace=estimate.flag.largest_below(-margin),
        horizon=spec.horizon,
        profile=spec.raw,
        gap_detected=not ambiguous,
        margin=float(margin)
    )


def orbit_flags(gen: GeneratorMap, path: SamplePath, offsets: Iterable[int], horizon: int,
                gap_threshold: float = Config.GAP_THRESHOLD) -> Dict[int, Flag]:
    """Flags estimated at T^k x for each offset k, all at the same horizon"""
    flags = {}
    for k in sorted(set(int(k) for k in offsets)):
        if k + horizon > len(path):
            raise HorizonError(f"Offset {k} with horizon {horizon} exceeds path length {len(path)}")
        flags[k] = filtration_estimate(gen, shift(path, k), horizon, gap_threshold, convergence=False).flag
    return flags


def orbit_stable_frames(gen: GeneratorMap, path: SamplePath, n: int, dim: int,
                        offsets: Iterable[int]) -> Dict[int, np.ndarray]:
    """
    Orthonormal bases of A(k,x)·V̂ˢ(x) for each offset 0 ≤ k < n, from a single
    backward QR pass over A(n,x)ᵀ with the same generic frame as
    singular_frame. Column spans stay nested, so the last `dim` columns at k
    span the image of the last `dim` columns at 0 in exact arithmetic.
    """
    d = gen.dimension
    if not 0 <= dim <= d:
        raise HorizonError(f"Stable dimension {dim} outside [0, {d}]")
    wanted = {int(k) for k in offsets if 0 <= int(k) < n}
    steps = list(gen.steps(path, n))
    W = generic_frame(d)
    frames: Dict[int, np.ndarray] = {}
    for k in range(n - 1, -1, -1):
        W, _ = np.linalg.qr(steps[k].T @ W)
        if k in wanted:
            frames[k] = W[:, d - dim:].copy()
    return frames
