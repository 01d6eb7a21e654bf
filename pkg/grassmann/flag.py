"""
Flags V^(1) ⊂ ... ⊂ V^(s) with exponent labels
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import Config
from core.errors import ValidationError, DimensionMismatchError
from .subspace import Subspace, subspace_contains, intersect_with_complement


@dataclass(frozen=True, eq=False)
class Flag:
    """Strictly increasing nested subspaces; exponents label the levels when given"""
    ambient: int
    levels: Tuple[Subspace, ...]
    exponents: Tuple[float, ...] = ()
    tolerance: float = Config.CONTAINMENT_TOL
    residuals: Tuple[float, ...] = field(default=(), init=False)

    def __post_init__(self):
        levels = tuple(self.levels)
        object.__setattr__(self, 'levels', levels)
        object.__setattr__(self, 'exponents', tuple(float(e) for e in self.exponents))
        if not levels:
            raise ValidationError("A flag needs at least one level")
        if any(level.ambient != self.ambient for level in levels):
            raise DimensionMismatchError(f"Flag levels must live in R^{self.ambient}")
        if self.exponents and len(self.exponents) != len(levels):
            raise ValidationError(f"{len(self.exponents)} exponents for {len(levels)} levels")
        if self.exponents and any(b <= a for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValidationError(f"Flag exponents must increase strictly: {self.exponents}")

        dims = [level.dim for level in levels]
        if any(b <= a for a, b in zip(dims, dims[1:])):
            raise ValidationError(f"Flag dimensions must increase strictly: {dims}")

        residuals = []
        for lower, upper in zip(levels, levels[1:]):
            check = subspace_contains(upper, lower, self.tolerance)
            if not check:
                raise ValidationError(f"Flag levels are not nested (residual {check.residual:.3e})")
            residuals.append(check.residual)
        object.__setattr__(self, 'residuals', tuple(residuals))

    @property
    def dims(self) -> List[int]:
        return [level.dim for level in self.levels]

    @property
    def is_complete(self) -> bool:
        """Top level is the whole space"""
        return self.levels[-1].is_full

    def __len__(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> Subspace:
        return self.levels[i]

    def blocks(self) -> List[Subspace]:
        """V̂^(i) = V^(i) ∩ V^(i−1)^⊥; together they decompose the top level"""
        out = []
        previous = Subspace.zero(self.ambient)
        for level in self.levels:
            out.append(intersect_with_complement(level, previous, self.tolerance))
            previous = level
        return out

    def largest_below(self, threshold: float) -> Subspace:
        """Largest level whose exponent is below threshold (zero subspace if none)"""
        if not self.exponents:
            raise ValidationError("Flag has no exponent labels")
        chosen = Subspace.zero(self.ambient)
        for level, exponent in zip(self.levels, self.exponents):
            if exponent < threshold:
                chosen = level
        return chosen

    def to_json(self) -> List[Dict[str, Any]]:
        labels: Sequence[Optional[float]] = self.exponents or [None] * len(self.levels)
        return [{'exponent': e, 'dim': level.dim, 'basis': level.to_json()}
                for e, level in zip(labels, self.levels)]

    @classmethod
    def from_json(cls, ambient: int, entries: Sequence[Dict[str, Any]]) -> "Flag":
        levels = tuple(Subspace.from_json(ambient, e['basis']) for e in entries)
        exponents = tuple(e['exponent'] for e in entries) if all(e.get('exponent') is not None for e in entries) else ()
        return cls(ambient, levels, exponents)

    def __repr__(self) -> str:
        return f"<Flag(dims={self.dims}, exponents={[round(e, 6) for e in self.exponents]})>"
