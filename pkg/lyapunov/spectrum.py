"""
Lyapunov spectrum estimation from QR-accumulated growth rates
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple
import logging
import math

import numpy as np

from config.settings import Config
from core.errors import ValidationError, HorizonError
from cocycle.generator import GeneratorMap
from cocycle.products import qr_accumulate, generic_frame
from driving.types import SamplePath

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LyapunovSpectrum:
    """Grouped exponents λ_1 < ... < λ_s with multiplicities summing to d"""
    exponents: Tuple[float, ...]
    multiplicities: Tuple[int, ...]
    horizon: int
    gap_threshold: float
    raw: Tuple[float, ...]
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)

    @property
    def top(self) -> float:
        return self.exponents[-1]

    @property
    def bottom(self) -> float:
        return self.exponents[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'exponents': list(self.exponents),
            'multiplicities': list(self.multiplicities),
            'horizon': self.horizon,
            'gap_threshold': self.gap_threshold,
            'raw': list(self.raw),
            'group_spans': self.diagnostics.get('group_spans', [])
        }


def group_exponents(raw: np.ndarray, gap_threshold: float) -> Tuple[List[float], List[int], List[float]]:
    """
    Merge ascending raw exponents closer than gap_threshold.

    −inf entries form a single lowest group. Returns group means,
    multiplicities and spans (max − min within each group).
    """
    values = np.sort(np.asarray(raw, dtype=float))
    exponents: List[float] = []
    multiplicities: List[int] = []
    spans: List[float] = []

    collapsed = int(np.sum(np.isneginf(values)))
    if collapsed:
        exponents.append(-math.inf)
        multiplicities.append(collapsed)
        spans.append(0.0)

    group: List[float] = []
    for value in values[collapsed:].tolist():
        if group and value - group[-1] >= gap_threshold:
            exponents.append(float(np.mean(group)))
            multiplicities.append(len(group))
            spans.append(group[-1] - group[0])
            group = []
        group.append(value)
    if group:
        exponents.append(float(np.mean(group)))
        multiplicities.append(len(group))
        spans.append(group[-1] - group[0])
    return exponents, multiplicities, spans


def spectrum(gen: GeneratorMap, path: SamplePath, n: int, gap_threshold: float = Config.GAP_THRESHOLD,
             reorth_period: int = Config.REORTH_PERIOD) -> LyapunovSpectrum:
    """Grouped log_r/n from qr_accumulate with running averages as diagnostics"""
    if isinstance(n, bool) or int(n) != n or n < Config.MIN_SPECTRUM_HORIZON:
        raise ValidationError(f"Spectrum horizon must be ≥ {Config.MIN_SPECTRUM_HORIZON}, got {n!r}")
    if n > len(path):
        raise HorizonError(f"Horizon {n} exceeds path length {len(path)}")
    if not gap_threshold > 0:
        raise ValidationError(f"gap_threshold must be positive, got {gap_threshold}")

    initial = None if gen.is_diagonal else generic_frame(gen.dimension)
    state = qr_accumulate(gen, path, n, reorth_period=reorth_period,
                          record_every=max(1, n // 20), initial=initial)
    raw = np.sort(state.log_r / n)
    exponents, multiplicities, spans = group_exponents(raw, gap_threshold)

    running = None
    if state.history is not None:
        running = np.column_stack([state.history[:, 0], np.sort(state.history[:, 1:], axis=1)])

    logger.debug(f"Spectrum at n={n}: {exponents} x {multiplicities}")
    return LyapunovSpectrum(
        exponents=tuple(exponents),
        multiplicities=tuple(multiplicities),
        horizon=int(n),
        gap_threshold=float(gap_threshold),
        raw=tuple(raw.tolist()),
        diagnostics={'group_spans': spans, 'running': running}
    )


def spectrum_distance(a: LyapunovSpectrum, b: LyapunovSpectrum) -> Optional[float]:
    """Largest gap between matching finite exponents; None when the level structure differs"""
    if a.multiplicities != b.multiplicities:
        return None
    gaps = [abs(x - y) for x, y in zip(a.exponents, b.exponents) if math.isfinite(x) and math.isfinite(y)]
    return max(gaps, default=0.0)
