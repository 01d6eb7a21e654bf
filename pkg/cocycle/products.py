"""
Overflow-protected evaluation of A(n,x) = A(x_{n−1})⋯A(x_0)

Products and norm series are kept as a mantissa times an integer power of two.
Rescaling by powers of two is exact in binary floating point, so products of
dyadic matrices stay exact however long they get.
"""

from dataclasses import dataclass
from typing import Iterator, Optional
import logging
import math

import numpy as np

from config.settings import Config
from core.errors import ValidationError, HorizonError
from driving.types import SamplePath
from .generator import GeneratorMap
from .norms import check_norm, operator_norm, vector_norm, image_norm

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)


def _binary_exponent(magnitude: float) -> int:
    """e with magnitude·2^{−e} in [1, 2)"""
    return int(np.frexp(magnitude)[1]) - 1


def _out_of_window(magnitude: float) -> bool:
    return magnitude > Config.RENORM_HIGH or 0.0 < magnitude < Config.RENORM_LOW


def _check_steps(path: SamplePath, n: int, start: int = 0) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValidationError(f"Step count must be a nonnegative integer, got {n!r}")
    if start + n > len(path):
        raise HorizonError(f"Horizon {start + n} exceeds path length {len(path)}")
    return int(n)


# ==================== Products ====================

@dataclass(frozen=True, eq=False)
class CocycleProduct:
    """A(n,x) = value · 2^{exp2}"""
    value: np.ndarray
    exp2: int
    steps: int

    @property
    def log_scale(self) -> float:
        return self.exp2 * LOG2

    def scaled(self) -> np.ndarray:
        """The product itself; may overflow to inf for huge horizons"""
        return np.ldexp(self.value, self.exp2)

    def log_norm(self, kind: str = "2") -> float:
        nrm = operator_norm(self.value, kind)
        return -math.inf if nrm == 0.0 else math.log(nrm) + self.log_scale


def product(gen: GeneratorMap, path: SamplePath, n: int, start: int = 0) -> CocycleProduct:
    """A(n, T^start x); n = 0 gives the identity with log_scale 0"""
    n = _check_steps(path, n, start)
    value = np.eye(gen.dimension)
    exp2 = 0
    for M in gen.steps(path, n, start):
        value = M @ value
        magnitude = float(np.max(np.abs(value)))
        if _out_of_window(magnitude):
            e = _binary_exponent(magnitude)
            value = np.ldexp(value, -e)
            exp2 += e

    if n > 0:
        magnitude = float(np.max(np.abs(value)))
        if magnitude > 0.0:
            e = _binary_exponent(magnitude)
            value = np.ldexp(value, -e)
            exp2 += e
    return CocycleProduct(value=value, exp2=exp2, steps=n)


def cocycle_identity_residual(gen: GeneratorMap, path: SamplePath, m: int, n: int,
                              relative: bool = False) -> float:
    """
    ‖A(m+n,x) − A(n,T^m x)·A(m,x)‖.

    With relative=True the residual is divided by 1 + ‖A(m+n,x)‖, evaluated
    in log scale so neither side overflows.
    """
    _check_steps(path, m + n)
    total = product(gen, path, m + n)
    first = product(gen, path, m)
    second = product(gen, path, n, start=m) if n > 0 else CocycleProduct(np.eye(gen.dimension), 0, 0)

    composed = second.value @ first.value
    diff = total.value - np.ldexp(composed, second.exp2 + first.exp2 - total.exp2)
    diff_norm = operator_norm(diff, "2")
    if diff_norm == 0.0:
        return 0.0

    log_residual = math.log(diff_norm) + total.log_scale
    if not relative:
        return math.exp(log_residual) if log_residual < 709.0 else math.inf
    log_total = total.log_norm("2")
    log_denominator = np.logaddexp(0.0, log_total)
    return math.exp(log_residual - log_denominator)


# ==================== QR accumulation ====================

@dataclass(frozen=True, eq=False)
class QRState:
    """Orthogonal frame Q and accumulated log|diag R| after `steps` steps"""
    Q: np.ndarray
    log_r: np.ndarray
    steps: int
    history: Optional[np.ndarray] = None

    def growth_rates(self) -> np.ndarray:
        """log_r / n sorted descending"""
        return np.sort(self.log_r / self.steps)[::-1]


def _record_points(n: int, record_every: Optional[int]) -> set:
    if not record_every:
        return set()
    return set(range(record_every, n + 1, record_every)) | {n}


def _qr_diagonal(gen: GeneratorMap, path: SamplePath, n: int, record_every: Optional[int]) -> QRState:
    logs = gen.log_abs_diagonals(path, n)
    cumulative = np.cumsum(logs, axis=0)
    history = None
    if record_every:
        points = sorted(_record_points(n, record_every))
        idx = np.asarray(points) - 1
        history = np.column_stack([np.asarray(points, dtype=float), cumulative[idx] / np.asarray(points)[:, None]])
    return QRState(Q=np.eye(gen.dimension), log_r=cumulative[-1].copy(), steps=n, history=history)


def _check_frame(frame: np.ndarray, d: int) -> np.ndarray:
    Q = np.array(frame, dtype=float)
    if Q.shape != (d, d) or np.max(np.abs(Q.T @ Q - np.eye(d))) > Config.ORTHONORMAL_TOL:
        raise ValidationError(f"Initial frame must be an orthogonal {d}x{d} matrix")
    return Q


def generic_frame(d: int, seed: int = 7) -> np.ndarray:
    """Fixed orthogonal frame in general position"""
    Q, R = np.linalg.qr(np.random.Generator(np.random.PCG64(seed)).standard_normal((d, d)))
    return Q * np.where(np.diag(R) < 0, -1.0, 1.0)


def _ordered_steps(gen: GeneratorMap, path: SamplePath, n: int, transpose: bool) -> Iterator[np.ndarray]:
    if not transpose:
        yield from gen.steps(path, n)
    elif gen.is_finite:
        stack = gen.stack
        for i in gen.indices(path, n)[::-1].tolist():
            yield stack[i].T
    else:
        for M in reversed(list(gen.steps(path, n))):
            yield M.T


def qr_accumulate(gen: GeneratorMap, path: SamplePath, n: int, reorth_period: int = Config.REORTH_PERIOD,
                  transpose: bool = False, record_every: Optional[int] = None,
                  initial: Optional[np.ndarray] = None) -> QRState:
    """
    Orthonormalize the growing frame every `reorth_period` steps and sum
    log|R_jj|.

    With transpose=True the frame follows A(n,x)ᵀ = A(x_0)ᵀ⋯A(x_{n−1})ᵀ.
    A direction that collapses through a singular step gets log_r = −inf and
    the iteration continues on the remaining frame. `initial` replaces the
    identity as starting frame.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"qr_accumulate needs n ≥ 1, got {n!r}")
    if isinstance(reorth_period, bool) or int(reorth_period) != reorth_period or reorth_period < 1:
        raise ValidationError(f"reorth_period must be ≥ 1, got {reorth_period!r}")
    _check_steps(path, n)

    if gen.is_diagonal and initial is None:
        return _qr_diagonal(gen, path, n, record_every)

    d = gen.dimension
    singular = gen.step_singular(path, n)
    if transpose:
        singular = singular[::-1]

    Q = np.eye(d) if initial is None else _check_frame(initial, d)
    W = Q
    log_r = np.zeros(d)
    collapsed = np.zeros(d, dtype=bool)
    block_singular = False
    record_at = _record_points(n, record_every)
    history = []
    tol = d * np.finfo(float).eps

    for k, M in enumerate(_ordered_steps(gen, path, n, transpose), start=1):
        W = M @ W
        block_singular = block_singular or bool(singular[k - 1])
        if k % reorth_period and k != n:
            continue

        Q, R = np.linalg.qr(W)
        diag = np.diag(R).copy()
        signs = np.where(diag < 0, -1.0, 1.0)
        Q = Q * signs
        magnitudes = np.abs(diag)
        if block_singular:
            scale = max(float(np.linalg.norm(W)), 1.0)
            collapsed |= magnitudes <= tol * scale
            block_singular = False
        with np.errstate(divide='ignore'):
            log_r += np.log(magnitudes)
        log_r[collapsed] = -np.inf
        W = Q

        if k in record_at:
            history.append(np.concatenate([[float(k)], log_r / k]))

    if collapsed.any():
        logger.debug(f"{int(collapsed.sum())} direction(s) collapsed through singular steps")
    return QRState(Q=Q, log_r=log_r, steps=n, history=np.asarray(history) if history else None)


# ==================== Norm series ====================

@dataclass(frozen=True, eq=False)
class NormSeries:
    """
    Norm values mantissa · 2^{exp2} for k = 0..n (rows), one column per
    tracked vector. A zero norm has mantissa 0.
    """
    mantissa: np.ndarray
    exp2: np.ndarray

    @property
    def horizon(self) -> int:
        return self.mantissa.shape[0] - 1

    def log(self) -> np.ndarray:
        with np.errstate(divide='ignore'):
            return np.log(self.mantissa) + self.exp2 * LOG2

    def values(self) -> np.ndarray:
        """Plain norms; exact when no overflow occurs"""
        return np.ldexp(self.mantissa, self.exp2.astype(np.int64))

    def weighted(self, weight: float, start: int = 0) -> np.ndarray:
        """e^{−weight·k}·‖·‖ for k ≥ start, exact when the combined scale is 1"""
        k = np.arange(start, self.horizon + 1, dtype=float)
        if self.mantissa.ndim == 2:
            k = k[:, None]
        mantissa = self.mantissa[start:]
        exponent = self.exp2[start:] * LOG2 - weight * k
        with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
            scaled = np.exp(np.log(mantissa) + exponent)
        return np.where(exponent == 0.0, mantissa, scaled)

    def column(self, j: int) -> "NormSeries":
        return NormSeries(self.mantissa[:, j], self.exp2[:, j])

    @classmethod
    def from_log(cls, logs: np.ndarray) -> "NormSeries":
        logs = np.asarray(logs, dtype=float)
        finite = np.isfinite(logs)
        exp2 = np.zeros(logs.shape, dtype=np.int64)
        exp2[finite] = np.floor(logs[finite] / LOG2).astype(np.int64)
        with np.errstate(invalid='ignore'):
            mantissa = np.where(finite, np.exp(logs - exp2 * LOG2), 0.0)
        mantissa = np.where(np.isposinf(logs), np.inf, mantissa)
        return cls(mantissa=mantissa, exp2=exp2)


def _as_columns(vectors: np.ndarray, d: int) -> np.ndarray:
    V = np.asarray(vectors, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    if V.ndim != 2 or V.shape[0] != d:
        raise ValidationError(f"Expected vectors in R^{d}, got shape {V.shape}")
    return V


def propagate(gen: GeneratorMap, path: SamplePath, vectors: np.ndarray, n: int,
              kind: Optional[str] = None, start: int = 0) -> NormSeries:
    """‖A(k, T^start x)v‖ for k = 0..n and every column v, each column rescaled independently"""
    n = _check_steps(path, n, start)
    kind = check_norm(kind or gen.norm)
    W = _as_columns(vectors, gen.dimension).copy()
    K = W.shape[1]

    mantissa = np.empty((n + 1, K))
    exp2 = np.zeros((n + 1, K), dtype=np.int64)
    current = np.zeros(K, dtype=np.int64)
    mantissa[0] = vector_norm(W, kind, axis=0)

    for k, M in enumerate(gen.steps(path, n, start), start=1):
        W = M @ W
        norms = vector_norm(W, kind, axis=0)
        outside = (norms > Config.RENORM_HIGH) | ((norms > 0.0) & (norms < Config.RENORM_LOW))
        if outside.any():
            shifts = np.frexp(norms[outside])[1].astype(np.int64) - 1
            W[:, outside] = np.ldexp(W[:, outside], -shifts)
            norms[outside] = np.ldexp(norms[outside], -shifts)
            current[outside] += shifts
        mantissa[k] = norms
        exp2[k] = current
    return NormSeries(mantissa=mantissa, exp2=exp2)


def _diagonal_restricted_logs(gen: GeneratorMap, path: SamplePath, basis: np.ndarray, n: int,
                              start: int) -> np.ndarray:
    logs = gen.log_abs_diagonals(path, n, start)
    d = gen.dimension
    cumulative = np.vstack([np.zeros((1, d)), np.cumsum(logs, axis=0)])
    active = np.any(basis != 0.0, axis=1)
    if not active.any():
        return np.full(n + 1, -np.inf)
    reach = cumulative[:, active]
    top = np.max(reach, axis=1)

    coordinate = np.all(np.sum(basis != 0.0, axis=1) <= 1) and np.allclose(np.abs(basis[active]).sum(axis=1), 1.0)
    if coordinate:
        return top

    finite = np.isfinite(top)
    out = np.full(n + 1, -np.inf)
    with np.errstate(invalid='ignore'):
        scale = np.exp(reach[finite] - top[finite, None])
    blocks = scale[:, :, None] * basis[active][None, :, :]
    out[finite] = np.log(np.linalg.norm(blocks, ord=2, axis=(1, 2))) + top[finite]
    return out


def restricted_norms(gen: GeneratorMap, path: SamplePath, basis: np.ndarray, n: int,
                     kind: Optional[str] = None, start: int = 0) -> NormSeries:
    """
    ‖A(k, T^start x)|L‖ for k = 0..n, L spanned by the orthonormal columns of
    `basis`. The norm is taken of A·basis directly, so L need not be invariant.
    """
    n = _check_steps(path, n, start)
    kind = check_norm(kind or gen.norm)
    basis = _as_columns(basis, gen.dimension)
    if basis.shape[1] == 0:
        return NormSeries(mantissa=np.zeros(n + 1), exp2=np.zeros(n + 1, dtype=np.int64))

    if kind == "2" and gen.is_diagonal:
        return NormSeries.from_log(_diagonal_restricted_logs(gen, path, basis, n, start))

    W = basis.copy()
    mantissa = np.empty(n + 1)
    exp2 = np.zeros(n + 1, dtype=np.int64)
    current = 0
    mantissa[0] = image_norm(W, basis, kind)
    for k, M in enumerate(gen.steps(path, n, start), start=1):
        W = M @ W
        value = image_norm(W, basis, kind)
        if _out_of_window(value):
            e = _binary_exponent(value)
            W = np.ldexp(W, -e)
            value = float(np.ldexp(value, -e))
            current += e
        mantissa[k] = value
        exp2[k] = current
    return NormSeries(mantissa=mantissa, exp2=exp2)


def operator_norms(gen: GeneratorMap, path: SamplePath, n: int, kind: Optional[str] = None,
                   start: int = 0) -> NormSeries:
    """‖A(k, T^start x)‖ for k = 0..n"""
    return restricted_norms(gen, path, np.eye(gen.dimension), n, kind=kind, start=start)
