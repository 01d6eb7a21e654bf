"""
Subspaces of R^d stored as orthonormal bases, and the set operations on them
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence
import logging

import numpy as np
from scipy.linalg import null_space, orth

from config.settings import Config
from core.errors import ValidationError, DimensionMismatchError, ContainmentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Subspace:
    """span of the orthonormal columns of `basis` (d×p, p = 0 for the zero subspace)"""
    ambient: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        if basis.size == 0:
            basis = np.zeros((self.ambient, 0))
        if basis.ndim != 2 or basis.shape[0] != self.ambient:
            raise ValidationError(f"Basis must be {self.ambient}×p, got shape {basis.shape}")
        if not np.all(np.isfinite(basis)):
            raise ValidationError("Basis entries must be finite")
        gram_error = np.max(np.abs(basis.T @ basis - np.eye(basis.shape[1]))) if basis.shape[1] else 0.0
        if gram_error > Config.ORTHONORMAL_TOL:
            raise ValidationError(f"Basis columns are not orthonormal (Gram error {gram_error:.3e})")
        basis.setflags(write=False)
        object.__setattr__(self, 'basis', basis)

    # ---------- construction ----------

    @classmethod
    def span(cls, vectors, ambient: int = None, rank_tol: float = None) -> "Subspace":
        """Orthonormalized span of the columns of `vectors`"""
        V = np.asarray(vectors, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        d = ambient if ambient is not None else V.shape[0]
        if V.size == 0:
            return cls.zero(d)
        if V.shape[0] != d:
            raise DimensionMismatchError(f"Vectors live in R^{V.shape[0]}, expected R^{d}")
        if not np.any(V):
            return cls.zero(d)
        return cls(d, orth(V, rcond=rank_tol))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, np.zeros((ambient, 0)))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, np.eye(ambient))

    @classmethod
    def axes(cls, ambient: int, *indices: int) -> "Subspace":
        """Coordinate subspace span(e_i, ...), indices counted from 0"""
        if any(not 0 <= i < ambient for i in indices):
            raise ValidationError(f"Axis indices {indices} outside R^{ambient}")
        return cls(ambient, np.eye(ambient)[:, sorted(set(indices))])

    # ---------- properties ----------

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def complement(self) -> "Subspace":
        """Orthogonal complement"""
        if self.is_zero:
            return Subspace.full(self.ambient)
        if self.is_full:
            return Subspace.zero(self.ambient)
        return Subspace(self.ambient, null_space(self.basis.T))

    def distance(self, v: np.ndarray) -> float:
        """Euclidean distance from v to the subspace"""
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.basis @ (self.basis.T @ v)))

    def to_json(self) -> List[List[float]]:
        """Basis columns"""
        return self.basis.T.tolist()

    @classmethod
    def from_json(cls, ambient: int, columns: Sequence[Sequence[float]]) -> "Subspace":
        if not columns:
            return cls.zero(ambient)
        return cls(ambient, np.asarray(columns, dtype=float).T)

    def __repr__(self) -> str:
        return f"<Subspace(dim={self.dim}, ambient={self.ambient})>"


def _same_ambient(V: Subspace, W: Subspace):
    if V.ambient != W.ambient:
        raise DimensionMismatchError(f"Ambient dimensions differ: {V.ambient} vs {W.ambient}")


@dataclass(frozen=True)
class Containment:
    """Outcome of W ⊆ V with the worst projection residual"""
    contained: bool
    residual: float

    def __bool__(self) -> bool:
        return self.contained

    def __iter__(self):
        return iter((self.contained, self.residual))


def subspace_contains(V: Subspace, W: Subspace, tol: float = Config.CONTAINMENT_TOL) -> Containment:
    """True iff every basis column of W lies within tol of V"""
    _same_ambient(V, W)
    if W.is_zero:
        return Containment(True, 0.0)
    leftover = W.basis - V.basis @ (V.basis.T @ W.basis)
    residual = float(np.max(np.linalg.norm(leftover, axis=0)))
    return Containment(residual <= tol, residual)


def intersect_with_complement(V: Subspace, U: Subspace, tol: float = Config.CONTAINMENT_TOL) -> Subspace:
    """V ∩ U^⊥ for U ⊆ V; the result has dimension dim V − dim U"""
    _same_ambient(V, U)
    check = subspace_contains(V, U, tol)
    if not check:
        raise ContainmentError(f"U is not contained in V (residual {check.residual:.3e} > {tol:.1e})")
    if U.is_zero:
        return V
    target = V.dim - U.dim
    if target == 0:
        return Subspace.zero(V.ambient)

    C = V.basis - U.basis @ (U.basis.T @ V.basis)
    left, _, _ = np.linalg.svd(C, full_matrices=False)
    B = left[:, :target]
    B = B - U.basis @ (U.basis.T @ B)
    Q, _ = np.linalg.qr(B)
    return Subspace(V.ambient, Q)


def image_subspace(M: np.ndarray, V: Subspace) -> Subspace:
    """Orthonormalized span of M·basis(V); the dimension drops where M kills part of V"""
    M = np.asarray(M, dtype=float)
    if M.shape != (V.ambient, V.ambient):
        raise DimensionMismatchError(f"Matrix shape {M.shape} does not act on R^{V.ambient}")
    if V.is_zero:
        return V
    X = M @ V.basis
    left, s, _ = np.linalg.svd(X, full_matrices=False)
    tol = s.max() * max(X.shape) * np.finfo(float).eps if s.size else 0.0
    rank = int(np.sum(s > tol))
    if rank < V.dim:
        logger.debug(f"Image rank dropped from {V.dim} to {rank}")
    return Subspace(V.ambient, left[:, :rank])


def subspace_to_dict(V: Subspace) -> Dict[str, Any]:
    return {'ambient': V.ambient, 'dim': V.dim, 'basis': V.to_json()}
