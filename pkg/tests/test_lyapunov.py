"""
Tests for spectra, filtrations, directional statistics, the verification
suite and induced block cocycles
"""

import math

import numpy as np
import pytest

from conftest import LOG2, LOG3, constant_path
from core.errors import ValidationError, PreconditionError, HorizonError, UngroupableSpectrumError
from core.rng import make_generator
from cocycle import GeneratorMap, product
from counterexamples import slow_decay_word
from driving import sample, shift
from grassmann import Subspace, Flag, hausdorff_distance, subspace_contains, image_subspace
from lyapunov import (
    group_exponents, spectrum, spectrum_distance, filtration_estimate, stable_subspace, orbit_flags,
    directional_exponent, limsup_stats, find_nonshrinking_vector, verify_met, Tolerances,
    induced_block_cocycle, check_groupable, orbit_stable_frames, stable_block_length
)

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def random_table_generator(seed: int, d: int = 3) -> GeneratorMap:
    """Two Gaussian d×d matrices, invertible almost surely"""
    rng = make_generator(seed)
    return GeneratorMap.from_table({0: rng.standard_normal((d, d)), 1: rng.standard_normal((d, d))},
                                   name=f"gaussian-{seed}")


@pytest.fixture
def upper_triangular():
    return GeneratorMap.constant([[2.0, 1.0], [0.0, 0.5]], name="upper-triangular")


# ==================== Grouping ====================

def test_grouping_merges_close_values():
    exponents, multiplicities, spans = group_exponents(np.array([0.0, 0.01, -1.0]), 0.05)
    assert multiplicities == [1, 2]
    assert exponents[1] == pytest.approx(0.005)
    assert spans[1] == pytest.approx(0.01)


def test_grouping_collects_collapsed_directions():
    exponents, multiplicities, _ = group_exponents(np.array([-np.inf, 0.2, -np.inf]), 0.05)
    assert exponents[0] == -math.inf
    assert multiplicities == [2, 1]


# ==================== Spectrum ====================

def test_diagonal_constant_spectrum(diag_three_half):
    n = 10_000
    result = spectrum(diag_three_half, constant_path(n), n)
    assert result.multiplicities == (1, 1)
    assert result.exponents[0] == pytest.approx(-LOG2, abs=1e-10)
    assert result.exponents[1] == pytest.approx(LOG3, abs=1e-10)


def test_halving_bernoulli_spectrum(halving, fair_coin):
    n = 100_000
    result = spectrum(halving, sample(fair_coin, n, seed=42), n)
    assert result.multiplicities == (1, 1)
    assert result.bottom == pytest.approx(-LOG2 / 2.0, abs=0.01)
    assert result.top == pytest.approx(0.0, abs=0.01)


@pytest.mark.slow
def test_halving_spectrum_mean_over_seeds(halving, fair_coin):
    n = 100_000
    results = [spectrum(halving, sample(fair_coin, n, seed), n) for seed in range(100)]
    assert abs(np.mean([r.top for r in results])) <= 0.01
    assert abs(np.mean([r.bottom for r in results]) + LOG2 / 2.0) <= 0.01


@pytest.mark.slow
def test_jordan_single_exponent(jordan):
    n = 100_000
    result = spectrum(jordan, constant_path(n), n, gap_threshold=0.01)
    assert result.multiplicities == (2,)
    assert result.exponents[0] == pytest.approx(0.0, abs=0.01)


def test_spectrum_shift_invariance(halving, fair_coin):
    path = sample(fair_coin, 10_100, seed=3)
    base = spectrum(halving, path, 10_000)
    for k in (1, 10, 100):
        distance = spectrum_distance(base, spectrum(halving, shift(path, k), 10_000))
        assert distance is not None and distance <= 2 * base.gap_threshold


def test_spectrum_rejects_short_horizon(halving, fair_coin):
    with pytest.raises(ValidationError):
        spectrum(halving, sample(fair_coin, 50, seed=1), 50)
    with pytest.raises(HorizonError):
        spectrum(halving, sample(fair_coin, 200, seed=1), 300)


def test_spectrum_distance_needs_same_structure(diag_three_half, jordan):
    n = 200
    a = spectrum(diag_three_half, constant_path(n), n)
    b = spectrum(jordan, constant_path(n), n, gap_threshold=0.5)
    assert spectrum_distance(a, b) is None


def test_collapsed_direction_reported_as_minus_infinity():
    gen = GeneratorMap.constant([[1.0, 0.0], [0.0, 0.0]])
    result = spectrum(gen, constant_path(200), 200)
    assert result.exponents[0] == -math.inf
    assert result.exponents[1] == pytest.approx(0.0)


# ==================== Filtration ====================

def test_halving_filtration(halving, fair_coin):
    n = 10_000
    estimate = filtration_estimate(halving, sample(fair_coin, n, seed=7), n)
    assert estimate.flag.dims == [1, 2]
    assert estimate.flag.is_complete
    assert hausdorff_distance(estimate.flag.level(0), Subspace.axes(2, 0)) <= 0.01
    assert estimate.flag.exponents[0] == pytest.approx(-LOG2 / 2.0, abs=0.02)


@pytest.mark.slow
def test_halving_filtration_over_seeds(halving, fair_coin):
    n = 100_000
    close = 0
    for seed in range(100):
        estimate = filtration_estimate(halving, sample(fair_coin, n, seed), n)
        close += hausdorff_distance(estimate.flag.level(0), Subspace.axes(2, 0)) <= 0.01
    assert close >= 95


def test_non_diagonal_filtration(upper_triangular):
    n = 200
    estimate = filtration_estimate(upper_triangular, constant_path(n), n)
    assert estimate.flag.dims == [1, 2]
    assert hausdorff_distance(estimate.flag.level(0), Subspace.span([1.0, -1.5])) < 1e-8
    assert estimate.flag.exponents[0] == pytest.approx(-LOG2, abs=0.01)
    assert estimate.flag.exponents[1] == pytest.approx(LOG2, abs=0.01)


def test_orbit_stable_frames_follow_the_cocycle(fair_coin):
    gen = random_table_generator(5)
    path = sample(fair_coin, 60, seed=5)
    frames = orbit_stable_frames(gen, path, 50, 2, [0, 1, 3, 50])
    assert set(frames) == {0, 1, 3}
    for k in (1, 3):
        pushed = image_subspace(product(gen, path, k).scaled(), Subspace(3, frames[0]))
        assert subspace_contains(Subspace(3, frames[k]), pushed, tol=1e-6)


def test_jordan_filtration_is_trivial(jordan):
    n = 1000
    estimate = filtration_estimate(jordan, constant_path(n), n, gap_threshold=0.05)
    assert estimate.flag.dims == [2]


def test_stable_subspace_split(diag_three_half):
    n = 500
    stable = stable_subspace(filtration_estimate(diag_three_half, constant_path(n), n))
    assert stable.subspace.dim == 1
    assert hausdorff_distance(stable.subspace, Subspace.axes(2, 1)) < 1e-12
    assert stable.gap_detected


def test_orbit_flags_are_nested_and_invariant(halving, fair_coin):
    path = sample(fair_coin, 3000, seed=12)
    flags = orbit_flags(halving, path, [0, 1], 2000)
    step = halving.matrix(path[0])
    for V_x, V_tx in zip(flags[0].levels, flags[1].levels):
        assert V_x.dim == V_tx.dim
        assert subspace_contains(V_tx, image_subspace(step, V_x), tol=1e-8)


def test_ungroupable_spectrum_is_reported():
    spec = spectrum(GeneratorMap.constant(np.diag(np.exp([0.0, 0.04, 0.08, 0.12]))), constant_path(200), 200)
    with pytest.raises(UngroupableSpectrumError) as error:
        check_groupable(spec)
    assert 'raw' in error.value.diagnostics


# ==================== Directional exponents ====================

def test_zero_vector_exponent(halving, fair_coin):
    result = directional_exponent(halving, sample(fair_coin, 10, seed=1), np.zeros(2), 10)
    assert result.value == -math.inf


def test_scalar_cocycle_exponent():
    gen = GeneratorMap.constant(2.0 * np.eye(2))
    result = directional_exponent(gen, constant_path(100), np.array([0.6, 0.8]), 100)
    assert result.value == pytest.approx(LOG2, abs=1e-12)


def test_halving_axis_exponent_counts_ones(halving, fair_coin):
    n = 100_000
    path = sample(fair_coin, n, seed=21)
    result = directional_exponent(halving, path, E1, n)
    ones = int(np.sum(path.entries == 1))
    assert result.value == pytest.approx(-ones * LOG2 / n, abs=1e-12)
    assert result.value == pytest.approx(-LOG2 / 2.0, abs=0.01)


@pytest.mark.parametrize("name", ["halving", "diag_three_half"])
def test_directional_consistency_with_levels(name, fair_coin, request):
    gen = request.getfixturevalue(name)
    n = 5000
    rng = make_generator(17)
    for seed in range(3):
        path = sample(fair_coin, n, seed)
        estimate = filtration_estimate(gen, path, n)
        previous = Subspace.zero(2)
        for level, exponent in zip(estimate.flag.levels, estimate.flag.exponents):
            checked = 0
            while checked < 5:
                v = level.basis @ rng.standard_normal(level.dim)
                v /= np.linalg.norm(v)
                if previous.distance(v) <= 0.1:
                    continue
                value = directional_exponent(gen, path, v, n).value
                assert abs(value - exponent) <= 3 * estimate.spectrum.gap_threshold
                checked += 1
            previous = level


# ==================== Windowed limsup ====================

def test_limsup_fixed_vector(jordan):
    stats = limsup_stats(jordan, constant_path(100), 0.0, E1, 100, n0=0)
    assert np.all(stats.running_max == 1.0)


def test_limsup_isometry(rotation):
    v = np.array([0.6, 0.8])
    stats = limsup_stats(rotation, constant_path(100), 0.0, v, 100, n0=0)
    assert np.allclose(stats.running_max, 1.0, atol=1e-12)


def test_limsup_along_slow_decay_word(halving):
    path = slow_decay_word(4).as_path()
    stats = limsup_stats(halving, path, 0.0, E1, 255, n0=1)
    assert stats.max_value == 0.5
    assert stats.argmax == 1


def test_limsup_window_validation(halving, fair_coin):
    with pytest.raises(ValidationError):
        limsup_stats(halving, sample(fair_coin, 10, seed=1), 0.0, E1, 10, n0=10)


def test_limsup_on_subspace(diag_three_half):
    stats = limsup_stats(diag_three_half, constant_path(20), 0.0, Subspace.axes(2, 1), 20, n0=0)
    assert stats.max_value == 1.0


# ==================== Non-shrinking vectors ====================

def test_rotation_certifies_any_direction(rotation):
    search = find_nonshrinking_vector(rotation, constant_path(500), 0.0, Subspace.full(2), Subspace.zero(2), 500)
    assert search.certified
    assert search.ratio == pytest.approx(1.0, abs=1e-9)
    assert search.status == "certified"


def test_fixed_axis_certifies(halving, fair_coin):
    path = sample(fair_coin, 2000, seed=4)
    search = find_nonshrinking_vector(halving, path, 0.0, Subspace.full(2), Subspace.axes(2, 0), 2000)
    assert search.certified
    assert abs(search.vector[1]) == pytest.approx(1.0)


def test_top_eigendirection_certifies(diag_three_half):
    search = find_nonshrinking_vector(diag_three_half, constant_path(300), LOG3, Subspace.full(2),
                                      Subspace.axes(2, 1), 300)
    assert search.certified
    assert search.ratio >= 0.999


def test_certified_on_many_bernoulli_paths(halving, fair_coin):
    for seed in range(10):
        path = sample(fair_coin, 1000, seed)
        estimate = filtration_estimate(halving, path, 1000)
        top = len(estimate.flag) - 1
        search = find_nonshrinking_vector(halving, path, estimate.flag.exponents[top],
                                          estimate.flag.level(top), estimate.flag.level(top - 1), 1000)
        assert search.ratio >= 0.999


def test_search_needs_proper_subspace(rotation):
    with pytest.raises(PreconditionError):
        find_nonshrinking_vector(rotation, constant_path(10), 0.0, Subspace.axes(2, 0), Subspace.axes(2, 0), 10)


# ==================== Verification suite ====================

def test_verify_diagonal_constant(diag_three_half):
    n = 1000
    report = verify_met(diag_three_half, constant_path(n + 1), n)
    assert report.passed
    assert report.check('filtration_invariance').value <= 1e-9
    assert report.check('exponent_shift_invariance').value <= 1e-9
    assert report.stable.subspace.dim == 1


def test_verify_rotation_has_no_stable_directions(rotation):
    n = 200
    report = verify_met(rotation, constant_path(n + 1), n)
    assert report.passed
    assert report.stable.subspace.is_zero
    assert report.check('exponent_negative_on_stable').detail['vacuous']
    assert report.check('operator_norm_sup').value == pytest.approx(1.0, abs=1e-12)


def test_verify_halving_few_seeds(halving, fair_coin):
    n = 10_000
    for seed in range(3):
        report = verify_met(halving, sample(fair_coin, n + 1, seed), n)
        assert report.passed, report.to_dict()['summary']


@pytest.mark.slow
def test_verify_halving_pass_rate(halving, fair_coin):
    n = 10_000
    passes = {}
    for seed in range(100):
        report = verify_met(halving, sample(fair_coin, n + 1, seed), n, tolerances=Tolerances(epsilon=0.05))
        for check in report.checks:
            passes[check.name] = passes.get(check.name, 0) + check.passed
    assert set(passes) >= {
        'exponent_negative_on_stable', 'exponent_nonnegative_off_stable', 'trajectory_sup_off_stable',
        'operator_norm_sup', 'filtration_dimension', 'filtration_invariance', 'exponent_shift_invariance'
    }
    assert all(count >= 99 for count in passes.values()), passes


def test_verify_non_diagonal_constant(upper_triangular):
    n = 500
    report = verify_met(upper_triangular, constant_path(n + 1), n)
    stable = report.check('exponent_negative_on_stable')
    assert stable.passed
    assert stable.value == pytest.approx(-LOG2, abs=1e-3)
    assert stable.detail['block'] == stable_block_length(2.0 * LOG2, n) == 21
    assert not stable.detail['precision_limited']
    assert report.passed, report.to_dict()['summary']


def test_verify_gaussian_generators(fair_coin):
    n = 2000
    evaluated = 0
    for seed in range(10):
        gen = random_table_generator(seed)
        try:
            report = verify_met(gen, sample(fair_coin, n + 1, seed), n)
        except UngroupableSpectrumError:
            continue
        evaluated += 1
        check = report.check('exponent_negative_on_stable')
        assert check.passed, (seed, check.value, report.spectrum.exponents)
    assert evaluated >= 5


def test_stable_block_length():
    assert stable_block_length(0.0, 1000) == 1000
    assert stable_block_length(1.0, 1000) == 30
    assert stable_block_length(1.0, 10) == 10
    assert stable_block_length(100.0, 1000) == 1


def test_verify_needs_one_extra_symbol(halving, fair_coin):
    with pytest.raises(HorizonError):
        verify_met(halving, sample(fair_coin, 1000, seed=1), 1000)


# ==================== Block cocycles ====================

def test_single_block_is_whole_product(jordan):
    flag = Flag(2, (Subspace.full(2),))
    blocks = induced_block_cocycle(jordan, constant_path(10), {0: flag, 10: flag}, 10)
    assert len(blocks.blocks) == 1
    assert np.allclose(blocks.blocks[0].scaled(), [[1.0, 10.0], [0.0, 1.0]], atol=1e-12)


def test_block_cocycle_identity(halving, fair_coin):
    path = sample(fair_coin, 100, seed=6)
    flag = Flag(2, (Subspace.axes(2, 0), Subspace.full(2)))
    blocks = induced_block_cocycle(halving, path, {0: flag, 50: flag, 100: flag}, 50, m=50)
    assert [b.matrix.shape for b in blocks.blocks] == [(1, 1), (1, 1)]
    assert max(blocks.residuals) <= 1e-8


def test_block_cocycle_needs_flags(halving, fair_coin):
    path = sample(fair_coin, 20, seed=6)
    flag = Flag(2, (Subspace.full(2),))
    with pytest.raises(ValidationError):
        induced_block_cocycle(halving, path, {0: flag}, 10)
