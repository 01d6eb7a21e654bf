"""
Vector and operator norms, including norms restricted to a subspace

The Euclidean norm is the default; 1- and ∞-norms are selectable.
"""

from typing import Optional
import math

import numpy as np

from core.errors import ValidationError

NORM_KINDS = ("2", "1", "inf")
_VECTOR_ORD = {"2": 2, "1": 1, "inf": np.inf}
DIRECTION_SEED = 20240601


def check_norm(kind: str) -> str:
    kind = str(kind)
    if kind not in NORM_KINDS:
        raise ValidationError(f"Unknown norm {kind!r}; expected one of {NORM_KINDS}")
    return kind


def vector_norm(v: np.ndarray, kind: str = "2", axis: Optional[int] = None) -> np.ndarray:
    """Norm of a vector, or of each column when axis=0"""
    return np.linalg.norm(v, ord=_VECTOR_ORD[check_norm(kind)], axis=axis)


def operator_norm(M: np.ndarray, kind: str = "2") -> float:
    """Induced operator norm"""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, ord=_VECTOR_ORD[check_norm(kind)]))


def sphere_directions(p: int, resolution: int) -> np.ndarray:
    """
    Deterministic unit directions in R^p (Euclidean unit columns).

    Exact angular grids for p ≤ 3; a fixed pseudo-random cloud of
    resolution² points beyond.
    """
    if p == 0:
        return np.zeros((0, 0))
    if p == 1:
        return np.array([[1.0, -1.0]])
    if p == 2:
        theta = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
        return np.vstack([np.cos(theta), np.sin(theta)])
    if p == 3:
        theta = np.linspace(0.0, math.pi, resolution)
        phi = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
        t, f = np.meshgrid(theta, phi, indexing='ij')
        dirs = np.vstack([(np.sin(t) * np.cos(f)).ravel(), (np.sin(t) * np.sin(f)).ravel(), np.cos(t).ravel()])
        return dirs
    cloud = np.random.Generator(np.random.PCG64(DIRECTION_SEED)).standard_normal((p, resolution ** 2))
    return cloud / np.linalg.norm(cloud, axis=0)


def restricted_operator_norm(M: np.ndarray, basis: np.ndarray, kind: str = "2",
                             resolution: int = 64) -> float:
    """
    ‖M|V‖ = sup over nonzero v ∈ V of ‖Mv‖/‖v‖, where V is spanned by the
    orthonormal columns of `basis`.

    Exact for the Euclidean norm and for V = R^d; sampled over sphere
    directions otherwise (a lower bound for the true supremum).
    """
    kind = check_norm(kind)
    M = np.asarray(M, dtype=float)
    basis = np.asarray(basis, dtype=float)
    if basis.ndim != 2 or basis.shape[1] == 0:
        return 0.0
    image = M @ basis
    return image_norm(image, basis, kind, resolution)


def image_norm(image: np.ndarray, basis: np.ndarray, kind: str = "2", resolution: int = 64) -> float:
    """Restricted norm given the image M·basis of an orthonormal basis"""
    p = basis.shape[1]
    if p == 0:
        return 0.0
    if kind == "2":
        if p == 1:
            return float(np.linalg.norm(image[:, 0]))
        return float(np.linalg.norm(image, 2))
    if p == basis.shape[0]:
        return operator_norm(image @ basis.T, kind)
    dirs = sphere_directions(p, resolution)
    num = vector_norm(image @ dirs, kind, axis=0)
    den = vector_norm(basis @ dirs, kind, axis=0)
    return float(np.max(num / den))
