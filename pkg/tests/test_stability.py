"""
Tests for conditional stability verdicts, the diagonal equivalence harness and cost indices
"""

import math

import numpy as np
import pytest

from conftest import LOG2, constant_path
from core.errors import ValidationError
from cocycle import GeneratorMap
from driving import sample
from grassmann import Subspace
from stability import (
    wilson_interval, classify_stability, conditional_stability, birkhoff_rate, diagonal_instance,
    random_diagonal_instances, equivalence_check, CostFunction, cost_index, optimal_cost_estimate
)

E1 = Subspace.axes(2, 0)
E2 = Subspace.axes(2, 1)


# ==================== Wilson intervals ====================

def test_wilson_interval_edges():
    low, high = wilson_interval(0, 30)
    assert low == pytest.approx(0.0, abs=1e-12) and 0.0 < high < 0.2
    low, high = wilson_interval(30, 30)
    assert 0.8 < low < 1.0 and high == pytest.approx(1.0, abs=1e-12)
    low, high = wilson_interval(15, 30)
    assert low < 0.5 < high


# ==================== Conditional stability ====================

def test_halving_is_stable_on_contracting_axis(halving, fair_coin):
    verdict = conditional_stability(halving, fair_coin, E1, 10_000, trials=200, seed=0)
    assert verdict.lyapunov_fraction >= 0.99
    assert verdict.exponential_fraction >= 0.99
    assert verdict.lyapunov_positive and verdict.exponential_positive and verdict.agrees
    assert verdict.median_rate == pytest.approx(-LOG2 / 2.0, abs=0.02)


def test_halving_fixed_axis_is_not_stable(halving, fair_coin):
    verdict = conditional_stability(halving, fair_coin, E2, 1000, trials=30, seed=0)
    assert verdict.lyapunov_fraction == 0.0
    assert verdict.exponential_fraction == 0.0
    assert not verdict.lyapunov_positive and verdict.agrees


def test_contracting_constant(fair_coin):
    gen = GeneratorMap.constant(np.diag([0.5, 2.0]))
    verdict = conditional_stability(gen, fair_coin, E1, 1000, trials=30, seed=2)
    assert verdict.lyapunov_fraction == 1.0
    assert verdict.exponential_fraction == 1.0


def test_classify_single_path(halving):
    path = constant_path(1000, symbol=1)
    result = classify_stability(halving, path, E1, 1000, rate_margin=0.05, norm_threshold=1e-3)
    assert result.rate == pytest.approx(-LOG2, abs=1e-12)
    assert result.lyapunov_stable and result.exponentially_stable


def test_stability_preconditions(halving, fair_coin):
    with pytest.raises(ValidationError):
        conditional_stability(halving, fair_coin, E1, 1000, trials=29)
    with pytest.raises(ValidationError):
        conditional_stability(halving, fair_coin, E1, 999, trials=30)
    with pytest.raises(ValidationError):
        conditional_stability(halving, fair_coin, Subspace.zero(2), 1000, trials=30)


# ==================== Diagonal instances ====================

def test_identity_instance_is_boundary(fair_coin):
    instance = diagonal_instance(GeneratorMap.diagonal([1.0, 1.0], [1.0, 1.0]), fair_coin, [0])
    assert instance.true_rate == 0.0
    verdict = conditional_stability(instance.gen, fair_coin, instance.L, 1000, trials=30)
    assert not verdict.lyapunov_positive and not verdict.exponential_positive
    assert verdict.agrees

    report = equivalence_check([instance], N=1000, trials=30)
    assert report.evaluated == 0
    assert len(report.boundary) == 1
    assert report.agreement == 1.0


def test_zero_matrix_instance_is_stable(fair_coin):
    instance = diagonal_instance(GeneratorMap.diagonal([0.0, 0.0], [1.0, 1.0]), fair_coin, [0, 1])
    assert instance.true_rate == -math.inf
    verdict = conditional_stability(instance.gen, fair_coin, instance.L, 1000, trials=30)
    assert verdict.lyapunov_positive and verdict.exponential_positive

    report = equivalence_check([instance], N=1000, trials=30)
    assert report.evaluated == 1 and report.agreement == 1.0


def test_birkhoff_rate_takes_max_over_axes(fair_coin):
    gen = GeneratorMap.diagonal([0.5, 2.0], [0.5, 1.0])
    assert birkhoff_rate(gen, fair_coin, [0]) == pytest.approx(-LOG2)
    assert birkhoff_rate(gen, fair_coin, [0, 1]) == pytest.approx(LOG2 / 2.0)


def test_instance_generator_must_be_diagonal(jordan, fair_coin):
    with pytest.raises(ValidationError):
        diagonal_instance(jordan, fair_coin, [0])


def test_random_instances_reproducible():
    a = random_diagonal_instances(6, seed=9)
    b = random_diagonal_instances(6, seed=9)
    assert [i.to_dict() for i in a] == [i.to_dict() for i in b]
    assert all(i.gen.is_diagonal for i in a)


def test_equivalence_on_random_instances():
    report = equivalence_check(random_diagonal_instances(20, seed=1), N=2000, trials=30, seed=1)
    assert report.evaluated + len(report.boundary) == 20
    assert report.agreement >= 0.9


def test_longer_horizon_keeps_stable_verdicts():
    instances = [i for i in random_diagonal_instances(20, seed=4) if i.true_rate <= -0.1]
    assert instances
    for instance in instances:
        short = conditional_stability(instance.gen, instance.spec, instance.L, 1000, trials=30, seed=2)
        long = conditional_stability(instance.gen, instance.spec, instance.L, 4000, trials=30, seed=2)
        if short.lyapunov_positive:
            assert long.lyapunov_positive, instance.to_dict()
        if short.exponential_positive:
            assert long.exponential_positive, instance.to_dict()


@pytest.mark.slow
def test_equivalence_on_many_random_instances():
    report = equivalence_check(random_diagonal_instances(200, seed=0), N=10_000, trials=30, seed=0)
    assert report.agreement >= 0.99


# ==================== Cost indices ====================

def test_cost_kinds():
    assert CostFunction("quadratic", 2.0).delta == 1.0
    assert CostFunction("quadratic", 2.0).gamma == 2.0
    assert CostFunction().delta == math.inf
    with pytest.raises(ValidationError):
        CostFunction("cubic")
    with pytest.raises(ValidationError):
        CostFunction("norm", 0.0)


def test_geometric_cost_on_contracting_path(halving):
    N = 50
    report = cost_index(halving, constant_path(N, symbol=1), [1.0, 0.0], CostFunction(), N)
    assert 2.0 - 1e-12 <= report.partial_sum <= 2.0
    assert not report.divergent
    assert report.tail_bound >= 2.0 ** -N * (1.0 - 1e-9)
    assert report.total == pytest.approx(2.0, abs=1e-12)
    assert np.all(np.diff(report.partial_sums) >= 0.0)


def test_fixed_direction_cost_diverges(halving, fair_coin):
    N = 200
    report = cost_index(halving, sample(fair_coin, N, seed=3), [0.0, 1.0], CostFunction(), N)
    assert report.partial_sum == N + 1
    assert report.divergent and report.total == math.inf


def test_tail_bound_covers_resimulated_remainder(halving, fair_coin):
    N = 1000
    u = [1.0, 0.0]
    certified = covered = 0
    for seed in range(100):
        path = sample(fair_coin, 2 * N, seed)
        report = cost_index(halving, path, u, CostFunction(), N)
        if report.divergent:
            continue
        certified += 1
        extended = cost_index(halving, path, u, CostFunction(), 2 * N)
        remainder = extended.partial_sums[2 * N] - extended.partial_sums[N]
        covered += remainder <= report.tail_bound
        assert extended.partial_sums[N] == report.partial_sum
    assert certified >= 95
    assert covered >= 0.99 * certified


def test_zero_vector_costs_nothing(halving, fair_coin):
    report = cost_index(halving, sample(fair_coin, 10, seed=1), [0.0, 0.0], CostFunction(), 10)
    assert report.total == 0.0
    assert not report.divergent


def test_deterministic_optimal_cost(fair_coin):
    gen = GeneratorMap.constant(np.diag([0.5, 1.0]))
    report = optimal_cost_estimate(gen, fair_coin, [1.0, 0.0], CostFunction(), 1000, trials=5)
    assert report.estimate == pytest.approx(2.0, abs=1e-9)
    assert not report.divergent


def test_bernoulli_optimal_cost(halving, fair_coin):
    u = [1.0, 0.0]
    first = optimal_cost_estimate(halving, fair_coin, u, CostFunction(), 1000, trials=100, seed=0)
    assert first.estimate <= 2.7
    assert first.nonincreasing
    more = optimal_cost_estimate(halving, fair_coin, u, CostFunction(), 1000, trials=200, seed=0)
    assert more.estimate <= first.estimate
    assert more.running_min[:100] == first.running_min


@pytest.mark.slow
def test_bernoulli_optimal_cost_many_paths(halving, fair_coin):
    report = optimal_cost_estimate(halving, fair_coin, [1.0, 0.0], CostFunction(), 1000, trials=1000)
    assert 2.0 - 1e-9 <= report.estimate <= 2.7


def test_optimal_cost_flags_divergence(halving, fair_coin):
    report = optimal_cost_estimate(halving, fair_coin, [0.0, 1.0], CostFunction(), 1000, trials=3)
    assert report.divergent
    assert report.argmin_seed is None
    assert report.stable_fraction == 0.0


def test_optimal_cost_needs_stable_fraction(fair_coin):
    # u leans off the contracting axis by 1e-12, so it decays for a while before growing
    gen = GeneratorMap.constant(np.diag([0.5, 1.05]))
    u = [1.0, 1e-12]
    short = cost_index(gen, constant_path(20), u, CostFunction(), 20)
    assert not short.divergent and math.isfinite(short.total)

    report = optimal_cost_estimate(gen, fair_coin, u, CostFunction(), 20, trials=5)
    assert report.divergent
    assert report.estimate == math.inf
    assert report.stable_fraction == 0.0
    assert report.convergent_paths == 0 and report.running_min == ()


def test_optimal_cost_on_given_subspace(fair_coin):
    gen = GeneratorMap.constant(np.diag([0.5, 1.0]))
    report = optimal_cost_estimate(gen, fair_coin, [1.0, 0.0], CostFunction(), 200, trials=3, L=E2)
    assert report.divergent and report.stable_fraction == 0.0
    zero = optimal_cost_estimate(gen, fair_coin, [0.0, 0.0], CostFunction(), 200, trials=3)
    assert zero.estimate == 0.0 and not zero.divergent
