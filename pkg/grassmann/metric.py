"""
Hausdorff distance between the unit spheres of two subspaces

D_H(V, W) = max(sup_{v∈V♯} min_{w∈W♯} ‖v − w‖, sup_{w∈W♯} min_{v∈V♯} ‖v − w‖),
with V♯ the unit sphere of V, or {0} when V is the zero subspace.
"""

from typing import Optional
import logging
import math

import numpy as np
from scipy.optimize import minimize_scalar

from config.settings import Config
from core.errors import ValidationError, DimensionMismatchError
from cocycle.norms import check_norm, sphere_directions, vector_norm
from .subspace import Subspace

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


def principal_angles(V: Subspace, W: Subspace) -> np.ndarray:
    """Principal angles in ascending order (min(dim V, dim W) of them)"""
    if V.ambient != W.ambient:
        raise DimensionMismatchError(f"Ambient dimensions differ: {V.ambient} vs {W.ambient}")
    if V.is_zero or W.is_zero:
        return np.zeros(0)
    cosines = np.linalg.svd(V.basis.T @ W.basis, compute_uv=False)
    return np.sort(np.arccos(np.clip(cosines, 0.0, 1.0)))


def _directed_euclidean(V: Subspace, W: Subspace) -> float:
    """sup over unit v ∈ V of the distance from v to the unit sphere of W"""
    if W.dim < V.dim:
        return SQRT2
    leftover = V.basis - W.basis @ (W.basis.T @ V.basis)
    sine = min(float(np.linalg.norm(leftover, 2)), 1.0)
    return 2.0 * math.sin(math.asin(sine) / 2.0)


def _hausdorff_euclidean(V: Subspace, W: Subspace) -> float:
    if V.is_zero and W.is_zero:
        return 0.0
    if V.is_zero or W.is_zero:
        return 1.0
    return max(_directed_euclidean(V, W), _directed_euclidean(W, V))


# ==================== Grid method ====================

def _sphere_points(V: Subspace, kind: str, resolution: int) -> np.ndarray:
    """Columns covering V♯ in the chosen norm"""
    if V.is_zero:
        return np.zeros((V.ambient, 1))
    points = V.basis @ sphere_directions(V.dim, resolution)
    return points / vector_norm(points, kind, axis=0)


def _nearest(point: np.ndarray, W: Subspace, kind: str, resolution: int) -> float:
    """min over w ∈ W♯ of ‖point − w‖, grid plus scalar refinement on circles"""
    candidates = _sphere_points(W, kind, resolution)
    distances = vector_norm(point[:, None] - candidates, kind, axis=0)
    best = float(distances.min())
    if W.dim != 2:
        return best

    j = int(distances.argmin())
    step = 2.0 * math.pi / resolution
    theta0 = 2.0 * math.pi * j / resolution

    def gap(theta: float) -> float:
        w = W.basis @ np.array([math.cos(theta), math.sin(theta)])
        return float(vector_norm(point - w / vector_norm(w, kind), kind))

    refined = minimize_scalar(gap, bounds=(theta0 - step, theta0 + step), method='bounded',
                              options={'xatol': 1e-12})
    return min(best, float(refined.fun))


def _directed_grid(V: Subspace, W: Subspace, kind: str, resolution: int) -> float:
    points = _sphere_points(V, kind, resolution)
    scores = np.array([_nearest(points[:, i], W, kind, resolution) for i in range(points.shape[1])])
    best = float(scores.max())
    if V.dim != 2:
        return best

    i = int(scores.argmax())
    step = 2.0 * math.pi / resolution
    theta0 = 2.0 * math.pi * i / resolution

    def negative(theta: float) -> float:
        v = V.basis @ np.array([math.cos(theta), math.sin(theta)])
        return -_nearest(v / vector_norm(v, kind), W, kind, resolution)

    refined = minimize_scalar(negative, bounds=(theta0 - step, theta0 + step), method='bounded',
                              options={'xatol': 1e-10})
    return max(best, -float(refined.fun))


def hausdorff_distance(V: Subspace, W: Subspace, resolution: int = Config.HAUSDORFF_RESOLUTION,
                       norm: str = "2", method: Optional[str] = None) -> float:
    """
    Hausdorff distance between unit spheres.

    The Euclidean norm uses the exact principal-angle form 2·sin(θ/2) with
    θ the largest principal angle (√2 when dimensions differ). method="grid"
    forces the sampled computation, which is the only one offered for the
    1- and ∞-norms; circles (dim 2) are refined by bounded scalar search.
    """
    if V.ambient != W.ambient:
        raise DimensionMismatchError(f"Ambient dimensions differ: {V.ambient} vs {W.ambient}")
    kind = check_norm(norm)
    method = method or ("exact" if kind == "2" else "grid")
    if method not in ("exact", "grid"):
        raise ValidationError(f"Unknown Hausdorff method {method!r}")
    if method == "exact":
        if kind != "2":
            raise ValidationError("The exact Hausdorff formula needs the Euclidean norm")
        return _hausdorff_euclidean(V, W)

    if resolution < Config.MIN_HAUSDORFF_RESOLUTION:
        raise ValidationError(f"resolution must be ≥ {Config.MIN_HAUSDORFF_RESOLUTION}, got {resolution}")
    if V.is_zero and W.is_zero:
        return 0.0
    return max(_directed_grid(V, W, kind, resolution), _directed_grid(W, V, kind, resolution))
