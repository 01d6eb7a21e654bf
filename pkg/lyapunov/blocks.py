"""
Induced block cocycles on the orthogonal pieces V̂^(i) = V^(i) ∩ V^(i−1)^⊥
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional
import logging

import numpy as np

from core.errors import InvarianceError, ValidationError, HorizonError
from cocycle.generator import GeneratorMap
from cocycle.products import product, CocycleProduct
from driving.types import SamplePath
from grassmann.flag import Flag

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BlockMap:
    """Â^(i)(n,x) = matrix·2^exp2 in the orthonormal bases of the source and target blocks"""
    level: int
    source: np.ndarray
    target: np.ndarray
    matrix: np.ndarray
    exp2: int

    def scaled(self) -> np.ndarray:
        return np.ldexp(self.matrix, self.exp2)


@dataclass(frozen=True, eq=False)
class BlockCocycle:
    blocks: List[BlockMap]
    steps: int
    residuals: Optional[List[float]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'steps': self.steps,
            'block_dims': [b.matrix.shape[1] for b in self.blocks],
            'residuals': self.residuals
        }


def _blocks_at(flags: Mapping[int, Flag], offset: int) -> List[np.ndarray]:
    if offset not in flags:
        raise ValidationError(f"No flag supplied at offset {offset}")
    return [block.basis for block in flags[offset].blocks()]


def _project(prod: CocycleProduct, source: List[np.ndarray], target: List[np.ndarray]) -> List[BlockMap]:
    if [b.shape[1] for b in source] != [b.shape[1] for b in target]:
        raise InvarianceError(
            f"Block dimensions differ along the orbit: {[b.shape[1] for b in source]} "
            f"vs {[b.shape[1] for b in target]}"
        )
    return [BlockMap(level=i, source=s, target=t, matrix=t.T @ prod.value @ s, exp2=prod.exp2)
            for i, (s, t) in enumerate(zip(source, target))]


def _relative_gap(whole: BlockMap, first: BlockMap, second: BlockMap) -> float:
    composed = second.matrix @ first.matrix
    rescaled = np.ldexp(composed, first.exp2 + second.exp2 - whole.exp2)
    scale = max(np.linalg.norm(whole.matrix, 2) if whole.matrix.size else 0.0, np.finfo(float).tiny)
    if not whole.matrix.size:
        return 0.0
    return float(np.linalg.norm(whole.matrix - rescaled, 2) / scale)


def induced_block_cocycle(gen: GeneratorMap, path: SamplePath, flags: Mapping[int, Flag], n: int,
                          m: Optional[int] = None) -> BlockCocycle:
    """
    Project A(n,x) restricted to each block at x onto the matching block at
    Tⁿx. With m given, flags are needed at 0, m and m+n and the relative
    residual of Â(m+n,x) against Â(n,T^m x)·Â(m,x) is reported per level.
    """
    if n < 0 or (m is not None and m < 0):
        raise ValidationError("Steps must be nonnegative")
    last = n + (m or 0)
    if last > len(path):
        raise HorizonError(f"Need {last} steps, path has {len(path)}")

    blocks = _project(product(gen, path, n), _blocks_at(flags, 0), _blocks_at(flags, n))

    residuals = None
    if m is not None:
        at_0, at_m, at_mn = _blocks_at(flags, 0), _blocks_at(flags, m), _blocks_at(flags, m + n)
        whole = _project(product(gen, path, m + n), at_0, at_mn)
        first = _project(product(gen, path, m), at_0, at_m)
        second = _project(product(gen, path, n, start=m), at_m, at_mn)
        residuals = [_relative_gap(w, a, b) for w, a, b in zip(whole, first, second)]
        logger.debug(f"Block cocycle residuals at m={m}, n={n}: {residuals}")

    return BlockCocycle(blocks=blocks, steps=int(n), residuals=residuals)
