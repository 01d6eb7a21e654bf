"""
Generator maps s ↦ A(s): symbol tables for finite alphabets and
state rules for real-valued drivers
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Hashable, Iterator, Mapping, Optional, Tuple, Union
import json
import logging
import math

import numpy as np

from config.settings import Config
from core.errors import ValidationError, HorizonError, UnknownSymbolError
from driving.types import SamplePath
from .norms import check_norm, operator_norm

logger = logging.getLogger(__name__)


def _as_matrix(values, dimension: Optional[int], label: str) -> np.ndarray:
    M = np.array(values, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"{label}: expected a square matrix, got shape {M.shape}")
    if dimension is not None and M.shape[0] != dimension:
        raise ValidationError(f"{label}: expected {dimension}x{dimension}, got {M.shape[0]}x{M.shape[1]}")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{label}: entries must be finite")
    M.setflags(write=False)
    return M


# ==================== State Rules ====================

@dataclass(frozen=True, eq=False)
class StateRule(ABC):
    """Matrix-valued function of a real state, clamped to [low, high]"""
    base: np.ndarray
    bounds: Tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, 'base', _as_matrix(self.base, None, "rule base"))
        low, high = (float(b) for b in self.bounds)
        if not (math.isfinite(low) and math.isfinite(high) and low <= high):
            raise ValidationError(f"Rule state bounds must be finite with low ≤ high, got {self.bounds}")
        object.__setattr__(self, 'bounds', (low, high))

    @property
    def dimension(self) -> int:
        return self.base.shape[0]

    def clamp(self, y: float) -> float:
        low, high = self.bounds
        return min(max(float(y), low), high)

    @abstractmethod
    def matrix(self, y: float) -> np.ndarray:
        ...

    def sup_norm(self, kind: str = "2") -> float:
        """Norms are convex along both rule families, so the sup sits at a bound"""
        return max(operator_norm(self.matrix(b), kind) for b in self.bounds)


@dataclass(frozen=True, eq=False)
class AffineRule(StateRule):
    """M(y) = base + y·slope"""
    slope: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, 'slope', _as_matrix(self.slope, self.dimension, "rule slope"))

    def matrix(self, y: float) -> np.ndarray:
        return self.base + self.clamp(y) * self.slope


@dataclass(frozen=True, eq=False)
class ExponentialRule(StateRule):
    """M(y) = base·e^{rate·y}"""
    rate: float = 1.0

    def matrix(self, y: float) -> np.ndarray:
        return self.base * math.exp(self.rate * self.clamp(y))


# ==================== Generator Map ====================

@dataclass(frozen=True, eq=False)
class GeneratorMap:
    """
    Bounded generator A: S → R^{d×d} of the cocycle A(n,x) = A(x_{n−1})⋯A(x_0).

    Exactly one of `table` (finite alphabet) or `rule` (real states) is set.
    `beta` defaults to the largest operator norm and must dominate it.
    """
    dimension: int
    table: Optional[Mapping[Hashable, Any]] = None
    rule: Optional[StateRule] = None
    beta: Optional[float] = None
    norm: str = "2"
    name: str = "custom"
    _symbols: Tuple[Hashable, ...] = field(default=(), init=False, repr=False)
    _stack: Optional[np.ndarray] = field(default=None, init=False, repr=False)
    _index: Dict[Hashable, int] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        d = self.dimension
        if isinstance(d, bool) or int(d) != d or not 1 <= d <= Config.MAX_DIMENSION:
            raise ValidationError(f"dimension must be in [1, {Config.MAX_DIMENSION}], got {d!r}")
        object.__setattr__(self, 'norm', check_norm(self.norm))
        if (self.table is None) == (self.rule is None):
            raise ValidationError("GeneratorMap needs exactly one of a symbol table or a state rule")

        if self.table is not None:
            if not self.table:
                raise ValidationError("Generator table is empty")
            symbols = tuple(self.table.keys())
            stack = np.stack([_as_matrix(self.table[s], d, f"matrix for symbol {s!r}") for s in symbols])
            stack.setflags(write=False)
            object.__setattr__(self, 'table', {s: stack[i] for i, s in enumerate(symbols)})
            object.__setattr__(self, '_symbols', symbols)
            object.__setattr__(self, '_stack', stack)
            object.__setattr__(self, '_index', {s: i for i, s in enumerate(symbols)})
            max_norm = max(operator_norm(M, self.norm) for M in stack)
        else:
            if self.rule.dimension != d:
                raise ValidationError(f"Rule dimension {self.rule.dimension} differs from {d}")
            max_norm = self.rule.sup_norm(self.norm)

        if self.beta is None:
            object.__setattr__(self, 'beta', float(max_norm))
        elif not self.beta >= max_norm - Config.BETA_TOLERANCE:
            raise ValidationError(f"beta = {self.beta} is below the largest operator norm {max_norm:.17g}")

    # ---------- construction ----------

    @classmethod
    def from_table(cls, matrices: Mapping[Hashable, Any], beta: Optional[float] = None,
                   norm: str = "2", name: str = "table") -> "GeneratorMap":
        first = np.asarray(next(iter(matrices.values())), dtype=float)
        if first.ndim != 2:
            raise ValidationError("Generator matrices must be two-dimensional")
        return cls(dimension=first.shape[0], table=dict(matrices), beta=beta, norm=norm, name=name)

    @classmethod
    def constant(cls, matrix, norm: str = "2", name: str = "constant") -> "GeneratorMap":
        """Same matrix for symbols 0 and 1, so any binary path drives it"""
        return cls.from_table({0: matrix, 1: matrix}, norm=norm, name=name)

    @classmethod
    def diagonal(cls, *diagonals, norm: str = "2", name: str = "diagonal") -> "GeneratorMap":
        return cls.from_table({i: np.diag(np.asarray(dg, dtype=float)) for i, dg in enumerate(diagonals)},
                              norm=norm, name=name)

    @classmethod
    def from_rule(cls, rule: StateRule, beta: Optional[float] = None, norm: str = "2",
                  name: str = "rule") -> "GeneratorMap":
        return cls(dimension=rule.dimension, rule=rule, beta=beta, norm=norm, name=name)

    # ---------- properties ----------

    @property
    def is_finite(self) -> bool:
        return self.table is not None

    @property
    def symbols(self) -> Tuple[Hashable, ...]:
        return self._symbols

    @property
    def stack(self) -> Optional[np.ndarray]:
        return self._stack

    @property
    def is_diagonal(self) -> bool:
        if self._stack is None:
            return False
        d = self.dimension
        off = self._stack * (1.0 - np.eye(d))
        return not np.any(off)

    def rank_deficient(self) -> np.ndarray:
        """Per-symbol flag for singular table matrices"""
        if self._stack is None:
            return np.zeros(0, dtype=bool)
        return np.linalg.matrix_rank(self._stack) < self.dimension

    # ---------- evaluation ----------

    def matrix(self, symbol) -> np.ndarray:
        if self.table is not None:
            try:
                return self.table[symbol]
            except (KeyError, TypeError):
                raise UnknownSymbolError(f"Symbol {symbol!r} not in generator table {self.name}") from None
        try:
            state = float(symbol)
        except (TypeError, ValueError):
            raise UnknownSymbolError(f"Rule generator {self.name} needs a real state, got {symbol!r}") from None
        return self.rule.matrix(state)

    def _window(self, path: SamplePath, n: int, start: int) -> np.ndarray:
        if start < 0 or n < 0:
            raise ValidationError(f"Negative start/steps: start={start}, n={n}")
        if start + n > len(path):
            raise HorizonError(f"Need {start + n} path entries, path has {len(path)}")
        return path.entries[start:start + n]

    def indices(self, path: SamplePath, n: int, start: int = 0) -> np.ndarray:
        """Table row of every step symbol x_start .. x_{start+n−1}"""
        if self.table is None:
            raise ValidationError(f"Generator {self.name} has no symbol table")
        window = self._window(path, n, start)
        if window.size == 0:
            return np.zeros(0, dtype=np.int64)
        uniq, inverse = np.unique(window, return_inverse=True)
        lookup = np.empty(uniq.size, dtype=np.int64)
        for j, s in enumerate(uniq.tolist()):
            if s not in self._index:
                raise UnknownSymbolError(f"Symbol {s!r} not in generator table {self.name}")
            lookup[j] = self._index[s]
        return lookup[inverse.reshape(-1)]

    def steps(self, path: SamplePath, n: int, start: int = 0) -> Iterator[np.ndarray]:
        """Step matrices A(x_start), ..., A(x_{start+n−1}) in application order"""
        if self.table is not None:
            stack = self._stack
            for i in self.indices(path, n, start).tolist():
                yield stack[i]
        else:
            for y in self._window(path, n, start).tolist():
                yield self.rule.matrix(y)

    def step_singular(self, path: SamplePath, n: int, start: int = 0) -> np.ndarray:
        """Boolean per step: the step matrix is singular"""
        if self.table is not None:
            return self.rank_deficient()[self.indices(path, n, start)]
        window = self._window(path, n, start)
        return np.array([np.linalg.matrix_rank(self.rule.matrix(y)) < self.dimension for y in window.tolist()],
                        dtype=bool)

    def log_abs_diagonals(self, path: SamplePath, n: int, start: int = 0) -> np.ndarray:
        """(n, d) array of log|A(x_k)_jj| for diagonal tables (−inf for zero entries)"""
        if not self.is_diagonal:
            raise ValidationError(f"Generator {self.name} is not diagonal")
        diagonals = np.abs(np.diagonal(self._stack, axis1=1, axis2=2))
        with np.errstate(divide='ignore'):
            logs = np.log(diagonals)
        return logs[self.indices(path, n, start)]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'dimension': self.dimension, 'beta': self.beta, 'norm': self.norm, 'name': self.name}
        if self.table is not None:
            out['matrices'] = {str(s): M.tolist() for s, M in self.table.items()}
        else:
            out['rule'] = type(self.rule).__name__
        return out

    def __repr__(self) -> str:
        kind = f"table[{len(self._symbols)}]" if self.table is not None else type(self.rule).__name__
        return f"<GeneratorMap(name={self.name}, d={self.dimension}, {kind}, beta={self.beta:.6g})>"


def step_matrix(gen: GeneratorMap, symbol) -> np.ndarray:
    """A(symbol), unmodified"""
    return gen.matrix(symbol)


def _symbol_key(key: str) -> Hashable:
    try:
        return int(key)
    except ValueError:
        return key


def generator_from_dict(data: Mapping[str, Any]) -> GeneratorMap:
    """{"dimension": d, "matrices": {"symbol": [[...]]}, "beta": optional, "norm": optional}"""
    if 'matrices' not in data:
        raise ValidationError("Generator document needs a 'matrices' table")
    matrices = {_symbol_key(str(k)): v for k, v in data['matrices'].items()}
    if not matrices:
        raise ValidationError("Generator table is empty")
    dimension = data.get('dimension') or len(next(iter(matrices.values())))
    gen = GeneratorMap(
        dimension=int(dimension),
        table=matrices,
        beta=data.get('beta'),
        norm=str(data.get('norm', Config.DEFAULT_NORM)),
        name=str(data.get('name', 'table'))
    )
    logger.debug(f"Loaded generator {gen!r}")
    return gen


def load_generator(source: Union[str, Path]) -> GeneratorMap:
    """Read and validate a generator JSON document"""
    try:
        data = json.loads(Path(source).read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise ValidationError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from e
    return generator_from_dict(data)
