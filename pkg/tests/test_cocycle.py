"""
Tests for generators, overflow-protected products and norm series
"""

import json
import math

import numpy as np
import pytest

from conftest import LOG2, LOG3, constant_path
from core.errors import ValidationError, HorizonError, UnknownSymbolError
from core.rng import make_generator
from cocycle import (
    GeneratorMap, AffineRule, ExponentialRule, step_matrix, generator_from_dict, load_generator, preset,
    product, qr_accumulate, cocycle_identity_residual, propagate, restricted_norms, operator_norms,
    operator_norm, vector_norm, restricted_operator_norm
)
from driving import Alphabet, BernoulliSpec, SamplePath, sample, shift


def random_generator(seed: int, d: int = 3, symbols: int = 3) -> GeneratorMap:
    rng = make_generator(seed)
    return GeneratorMap.from_table({s: rng.standard_normal((d, d)) for s in range(symbols)})


def uniform_path(seed: int, n: int, symbols: int = 3) -> SamplePath:
    spec = BernoulliSpec(Alphabet.range(symbols), tuple([1.0 / symbols] * symbols))
    return sample(spec, n, seed)


# ==================== Generators ====================

def test_halving_table(halving):
    assert np.array_equal(step_matrix(halving, 0), np.eye(2))
    assert np.array_equal(step_matrix(halving, 1), np.diag([0.5, 1.0]))
    assert halving.beta == pytest.approx(1.0)
    assert halving.is_diagonal


def test_affine_rule_at_zero():
    rule = AffineRule(base=np.eye(2), bounds=(-1.0, 1.0), slope=np.eye(2))
    gen = GeneratorMap.from_rule(rule)
    assert np.array_equal(step_matrix(gen, 0.0), np.eye(2))
    assert np.allclose(step_matrix(gen, 5.0), 2.0 * np.eye(2))
    assert gen.beta == pytest.approx(2.0)


def test_exponential_rule_clamps_state():
    rule = ExponentialRule(base=np.eye(2), bounds=(-2.0, 2.0), rate=1.0)
    gen = GeneratorMap.from_rule(rule)
    assert np.array_equal(step_matrix(gen, 0.0), np.eye(2))
    assert np.allclose(step_matrix(gen, 10.0), math.exp(2.0) * np.eye(2))


def test_unknown_symbol(halving):
    with pytest.raises(UnknownSymbolError):
        step_matrix(halving, 7)


def test_beta_must_dominate():
    with pytest.raises(ValidationError):
        GeneratorMap.from_table({0: 2.0 * np.eye(2)}, beta=1.5)


def test_generator_document(tmp_path):
    document = {"matrices": {"0": [[1, 0], [0, 1]], "1": [[0.5, 0], [0, 1]]}, "name": "doc"}
    source = tmp_path / "gen.json"
    source.write_text(json.dumps(document), encoding="utf-8")
    gen = load_generator(source)
    assert gen.dimension == 2
    assert gen.symbols == (0, 1)
    assert np.array_equal(step_matrix(gen, 1), np.diag([0.5, 1.0]))

    with pytest.raises(ValidationError):
        generator_from_dict({"matrices": {}})
    with pytest.raises(ValidationError):
        generator_from_dict({"matrices": {"0": [[1, 2, 3]]}})


def test_unknown_preset():
    with pytest.raises(ValidationError):
        preset("spiral")


# ==================== Products ====================

def test_zero_steps_is_identity(halving, fair_coin):
    prod = product(halving, sample(fair_coin, 5, seed=1), 0)
    assert np.array_equal(prod.value, np.eye(2))
    assert prod.log_scale == 0.0


def test_three_halvings(halving):
    path = constant_path(3, symbol=1)
    assert np.array_equal(product(halving, path, 3).scaled(), np.diag([0.125, 1.0]))


def test_scalar_power():
    gen = GeneratorMap.constant(2.0 * np.eye(2))
    prod = product(gen, constant_path(50), 50)
    assert np.array_equal(prod.scaled(), 2.0 ** 50 * np.eye(2))
    assert prod.log_norm() == pytest.approx(50 * LOG2, abs=1e-12)


def test_long_product_does_not_overflow(diag_three_half):
    n = 100_000
    prod = product(diag_three_half, constant_path(n), n)
    assert np.all(np.isfinite(prod.value))
    assert prod.log_norm() == pytest.approx(n * LOG3, rel=1e-12)


def test_horizon_beyond_path(halving):
    with pytest.raises(HorizonError):
        product(halving, constant_path(3), 4)


# ==================== Cocycle identity ====================

def test_identity_residual_trivial_splits(fair_coin, halving):
    path = sample(fair_coin, 40, seed=3)
    assert cocycle_identity_residual(halving, path, 0, 20) == 0.0
    assert cocycle_identity_residual(halving, path, 20, 0) == 0.0


def test_identity_residual_random_generator():
    gen = random_generator(5)
    path = uniform_path(6, 18)
    assert cocycle_identity_residual(gen, path, 7, 11, relative=True) <= 1e-9


def test_identity_residual_many_samples():
    rng = make_generator(2024)
    worst = 0.0
    for i in range(1000):
        gen = random_generator(i, d=int(rng.integers(1, 4)))
        m, n = (int(k) for k in rng.integers(0, 20, size=2))
        path = uniform_path(10_000 + i, max(m + n, 1))
        worst = max(worst, cocycle_identity_residual(gen, path, m, n, relative=True))
    assert worst <= 1e-9


def test_norm_bound_by_beta():
    gen = random_generator(12)
    path = uniform_path(13, 200)
    for n in (1, 10, 100, 200):
        assert product(gen, path, n).log_norm() <= n * math.log(gen.beta) + 1e-9


def test_submultiplicative_log_norms():
    gen = random_generator(21)
    path = uniform_path(22, 60)
    whole = product(gen, path, 60).log_norm()
    parts = product(gen, path, 25).log_norm() + product(gen, shift(path, 25), 35).log_norm()
    assert whole <= parts + 1e-9


# ==================== QR accumulation ====================

def test_qr_diagonal_constant(diag_three_half):
    state = qr_accumulate(diag_three_half, constant_path(1000), 1000)
    assert np.allclose(np.sort(state.log_r / 1000)[::-1], [LOG3, -LOG2], atol=1e-12)


def test_qr_rotation(rotation):
    state = qr_accumulate(rotation, constant_path(1000), 1000)
    assert np.allclose(state.log_r / 1000, [0.0, 0.0], atol=1e-12)
    assert np.max(np.abs(state.Q.T @ state.Q - np.eye(2))) <= 1e-10


def test_qr_jordan_growth_is_subexponential(jordan):
    n = 10_000
    state = qr_accumulate(jordan, constant_path(n), n)
    assert np.all(np.abs(state.log_r / n) <= 0.002)


def test_qr_log_volume_matches_determinant():
    gen = random_generator(31)
    path = uniform_path(32, 30)
    state = qr_accumulate(gen, path, 30)
    _, logdets = np.linalg.slogdet(gen.stack[gen.indices(path, 30)])
    assert state.log_r.sum() == pytest.approx(logdets.sum(), abs=1e-8)


def test_qr_singular_step_collapses():
    gen = GeneratorMap.constant([[1.0, 1.0], [0.0, 0.0]])
    state = qr_accumulate(gen, constant_path(20), 20)
    assert np.sum(np.isneginf(state.log_r)) == 1
    assert np.all(np.isfinite(state.log_r[~np.isneginf(state.log_r)]))


def test_qr_transpose_preserves_volume():
    gen = random_generator(41)
    path = uniform_path(42, 25)
    forward = qr_accumulate(gen, path, 25)
    backward = qr_accumulate(gen, path, 25, transpose=True)
    assert forward.log_r.sum() == pytest.approx(backward.log_r.sum(), abs=1e-8)


def test_qr_needs_positive_horizon(halving):
    with pytest.raises(ValidationError):
        qr_accumulate(halving, constant_path(5), 0)


# ==================== Norm series ====================

def test_propagate_halving_exact(halving):
    path = constant_path(60, symbol=1)
    series = propagate(halving, path, np.array([1.0, 0.0]), 60)
    expected = np.ldexp(1.0, -np.arange(61))
    assert np.array_equal(series.values()[:, 0], expected)


def test_propagate_tracks_columns_independently(diag_three_half):
    n = 400
    series = propagate(diag_three_half, constant_path(n), np.eye(2), n)
    logs = series.log()
    assert logs[n, 0] == pytest.approx(n * LOG3, rel=1e-12)
    assert logs[n, 1] == pytest.approx(-n * LOG2, rel=1e-12)


def test_restricted_norms_match_axis(diag_three_half):
    n = 50
    path = constant_path(n)
    restricted = restricted_norms(diag_three_half, path, np.array([[0.0], [1.0]]), n)
    assert np.allclose(restricted.log(), -np.arange(n + 1) * LOG2, atol=1e-12)
    full = operator_norms(diag_three_half, path, n)
    assert np.allclose(full.log(), np.arange(n + 1) * LOG3, atol=1e-9)


def test_restricted_norms_off_invariant_subspace(jordan):
    n = 20
    basis = np.array([[0.0], [1.0]])
    series = restricted_norms(jordan, constant_path(n), basis, n)
    expected = np.sqrt(np.arange(n + 1) ** 2 + 1.0)
    assert np.allclose(series.values(), expected, rtol=1e-12)


def test_operator_norm_of_empty_matrix():
    assert operator_norm(np.zeros((0, 0))) == 0.0


# ==================== Norms ====================

def test_vector_norm_kinds():
    v = np.array([3.0, -4.0])
    assert vector_norm(v) == pytest.approx(5.0)
    assert vector_norm(v, "1") == pytest.approx(7.0)
    assert vector_norm(v, "inf") == pytest.approx(4.0)
    with pytest.raises(ValidationError):
        vector_norm(v, "3")


def test_restricted_operator_norm(diag_three_half):
    M = diag_three_half.matrix(0)
    assert restricted_operator_norm(M, np.array([[0.0], [1.0]])) == pytest.approx(0.5)
    assert restricted_operator_norm(M, np.eye(2)) == pytest.approx(3.0)
    assert restricted_operator_norm(M, np.zeros((2, 0))) == 0.0


def test_restricted_operator_norm_other_kinds():
    J = np.array([[1.0, 1.0], [0.0, 1.0]])
    e2 = np.array([[0.0], [1.0]])
    assert restricted_operator_norm(J, e2) == pytest.approx(math.sqrt(2.0))
    assert restricted_operator_norm(J, np.eye(2), kind="1") == pytest.approx(2.0)
    assert restricted_operator_norm(J, e2, kind="1") == pytest.approx(2.0)
