"""
Minimal gains of powers of the Jordan block [[1,1],[0,1]]
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
import pandas as pd

from core.errors import ValidationError


def minimal_gain(M) -> float:
    """min over unit v of ‖Mv‖₂, the smallest singular value"""
    return float(np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)[-1])


@dataclass(frozen=True, eq=False)
class GainSeries:
    n: np.ndarray
    min_gain: np.ndarray
    max_gain: np.ndarray

    @property
    def determinant(self) -> np.ndarray:
        return self.min_gain * self.max_gain

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'n': self.n, 'min_gain': self.min_gain, 'max_gain': self.max_gain})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_max': int(self.n[-1]),
            'final_min_gain': float(self.min_gain[-1]),
            'final_max_gain': float(self.max_gain[-1])
        }


def jordan_min_gain(n_max: int) -> GainSeries:
    """
    Singular values of [[1,n],[0,1]] for n = 0..n_max: σ_min from the closed
    form 2/(n + √(n²+4)), σ_max as the spectral norm of each power.
    """
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 1:
        raise ValidationError(f"n_max must be an integer ≥ 1, got {n_max!r}")
    n = np.arange(0, int(n_max) + 1, dtype=float)
    powers = np.zeros((n.size, 2, 2))
    powers[:, 0, 0] = powers[:, 1, 1] = 1.0
    powers[:, 0, 1] = n
    return GainSeries(n=n.astype(np.int64), min_gain=2.0 / (n + np.sqrt(n * n + 4.0)),
                      max_gain=np.linalg.norm(powers, ord=2, axis=(1, 2)))
