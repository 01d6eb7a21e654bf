"""
Tests for subspaces, the Hausdorff metric on unit spheres and flags
"""

import math

import numpy as np
import pytest

from core.errors import ValidationError, ContainmentError, DimensionMismatchError
from core.rng import make_generator
from grassmann import (
    Subspace, Flag, subspace_contains, intersect_with_complement, image_subspace, hausdorff_distance,
    principal_angles
)

E1 = Subspace.axes(2, 0)
E2 = Subspace.axes(2, 1)
ZERO = Subspace.zero(2)
PLANE = Subspace.full(2)


def random_subspace(rng, ambient: int = 3) -> Subspace:
    dim = int(rng.integers(1, ambient))
    return Subspace.span(rng.standard_normal((ambient, dim)))


# ==================== Subspaces ====================

def test_span_orthonormalizes():
    V = Subspace.span([[1.0, 1.0], [1.0, 2.0], [0.0, 0.0]])
    assert V.dim == 2
    assert np.allclose(V.basis.T @ V.basis, np.eye(2), atol=1e-10)


def test_span_of_zero_vectors():
    assert Subspace.span(np.zeros((3, 2))).is_zero


def test_basis_must_be_orthonormal():
    with pytest.raises(ValidationError):
        Subspace(2, [[1.0], [1.0]])


def test_complement_and_distance():
    assert hausdorff_distance(E1.complement(), E2) < 1e-12
    assert ZERO.complement().is_full
    assert E1.distance(np.array([3.0, 4.0])) == pytest.approx(4.0)


# ==================== Containment ====================

def test_zero_is_contained_everywhere():
    contained, residual = subspace_contains(E1, ZERO)
    assert contained and residual == 0.0


def test_full_space_contains_everything():
    rng = make_generator(3)
    assert subspace_contains(Subspace.full(3), random_subspace(rng))


def test_near_containment_reports_residual():
    tilted = Subspace.span(np.array([1.0, 0.001]))
    check = subspace_contains(E1, tilted, tol=1e-2)
    assert check.contained
    assert check.residual == pytest.approx(0.001, rel=1e-5)
    assert not subspace_contains(E1, tilted)


# ==================== Complements inside V ====================

def test_orthocomplement_in_plane():
    W = intersect_with_complement(PLANE, E1)
    assert W.dim == 1
    assert hausdorff_distance(W, E2) < 1e-10


def test_complement_of_zero_is_v():
    assert intersect_with_complement(PLANE, ZERO).is_full


def test_complement_inside_three_space():
    V = Subspace.span(np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    U = Subspace.span(np.array([1.0, 1.0, 0.0]) / math.sqrt(2.0))
    W = intersect_with_complement(V, U)
    assert W.dim == 1
    assert hausdorff_distance(W, Subspace.axes(3, 2)) <= 1e-10
    assert np.max(np.abs(U.basis.T @ W.basis)) <= 1e-10


def test_complement_requires_containment():
    with pytest.raises(ContainmentError):
        intersect_with_complement(E1, E2)


def test_complement_plus_u_spans_v():
    rng = make_generator(11)
    for _ in range(20):
        V = Subspace.span(rng.standard_normal((4, 3)))
        U = Subspace.span(V.basis @ rng.standard_normal((3, 1)))
        W = intersect_with_complement(V, U)
        union = Subspace.span(np.hstack([U.basis, W.basis]))
        assert union.dim == V.dim
        assert subspace_contains(V, union, tol=1e-8)


# ==================== Images ====================

def test_identity_image():
    V = Subspace.span(np.array([1.0, 2.0]))
    assert hausdorff_distance(image_subspace(np.eye(2), V), V) < 1e-12


def test_kernel_collapse():
    W = image_subspace(np.diag([1.0, 0.0]), PLANE)
    assert W.dim == 1
    assert hausdorff_distance(W, E1) < 1e-12


def test_shear_image():
    W = image_subspace(np.array([[1.0, 1.0], [0.0, 1.0]]), E2)
    expected = Subspace.span(np.array([1.0, 1.0]) / math.sqrt(2.0))
    assert hausdorff_distance(W, expected) < 1e-10


def test_invertible_image_keeps_dimension():
    rng = make_generator(5)
    for _ in range(20):
        V = random_subspace(rng, 4)
        M = rng.standard_normal((4, 4))
        assert image_subspace(M, V).dim == V.dim


def test_image_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        image_subspace(np.eye(3), E1)


# ==================== Hausdorff metric ====================

def test_identical_subspaces():
    assert hausdorff_distance(E1, E1) == 0.0


def test_orthogonal_lines():
    assert hausdorff_distance(E1, E2) == pytest.approx(math.sqrt(2.0), abs=1e-6)
    assert hausdorff_distance(E1, E2, method="grid") == pytest.approx(math.sqrt(2.0), abs=1e-6)


def test_line_against_zero():
    assert hausdorff_distance(E1, ZERO) == pytest.approx(1.0, abs=1e-9)
    assert hausdorff_distance(E1, ZERO, method="grid") == pytest.approx(1.0, abs=1e-9)
    assert hausdorff_distance(ZERO, ZERO) == 0.0


def test_unequal_dimensions():
    assert hausdorff_distance(E1, PLANE) == pytest.approx(math.sqrt(2.0))


def test_exact_matches_grid_for_lines():
    theta = 0.7
    L = Subspace.span(np.array([math.cos(theta), math.sin(theta)]))
    exact = hausdorff_distance(E1, L)
    assert exact == pytest.approx(2.0 * math.sin(theta / 2.0), abs=1e-12)
    assert hausdorff_distance(E1, L, method="grid") == pytest.approx(exact, abs=1e-6)


def test_other_norms_use_grid():
    d = hausdorff_distance(E1, E2, norm="inf")
    assert d == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValidationError):
        hausdorff_distance(E1, E2, norm="inf", method="exact")


def test_metric_axioms_on_random_triples():
    rng = make_generator(7)
    for _ in range(100):
        U, V, W = (random_subspace(rng) for _ in range(3))
        assert hausdorff_distance(U, V) == pytest.approx(hausdorff_distance(V, U), abs=1e-12)
        assert hausdorff_distance(U, W) <= hausdorff_distance(U, V) + hausdorff_distance(V, W) + 1e-6


def test_zero_distance_iff_mutual_containment():
    rng = make_generator(9)
    V = random_subspace(rng)
    same = Subspace.span(V.basis @ rng.standard_normal((V.dim, V.dim)))
    assert hausdorff_distance(V, same) <= 1e-8
    assert subspace_contains(V, same) and subspace_contains(same, V)


def test_principal_angles_ascending():
    V = Subspace.axes(3, 0, 1)
    W = Subspace.span(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]))
    angles = principal_angles(V, W)
    assert np.allclose(angles, [0.0, math.pi / 4.0], atol=1e-7)


def test_ambient_mismatch():
    with pytest.raises(DimensionMismatchError):
        hausdorff_distance(E1, Subspace.axes(3, 0))


# ==================== Flags ====================

def test_flag_blocks_and_levels():
    flag = Flag(2, (E1, PLANE), (-1.0, 0.5))
    assert flag.dims == [1, 2]
    assert flag.is_complete
    blocks = flag.blocks()
    assert hausdorff_distance(blocks[0], E1) < 1e-12
    assert hausdorff_distance(blocks[1], E2) < 1e-12
    assert flag.largest_below(0.0).dim == 1
    assert flag.largest_below(-2.0).is_zero


def test_flag_rejects_non_nested_levels():
    tilted = Subspace.span(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValidationError):
        Flag(3, (Subspace.axes(3, 1), tilted))


def test_flag_rejects_unordered_exponents():
    with pytest.raises(ValidationError):
        Flag(2, (E1, PLANE), (0.5, -1.0))


def test_flag_json_round_trip():
    flag = Flag(2, (E1, PLANE), (-1.0, 0.5))
    restored = Flag.from_json(2, flag.to_json())
    assert restored.dims == flag.dims
    assert restored.exponents == flag.exponents
