import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specbal.baselines import (
    brute_force_min,
    enumerate_min,
    monte_carlo_gaussian_norm,
    random_coloring,
    random_coloring_stats,
    sign_patterns,
)
from specbal.concentration import chernoff_bound, concentration_params
from specbal.errors import InvalidInputError
from specbal.full import solve
from specbal.instance import (
    Instance,
    generate_block_diagonal,
    generate_diagonal_spencer,
    generate_low_rank_random,
    generate_lower_bound,
)


def test_sign_pattern_order():
    np.testing.assert_array_equal(sign_patterns(2), [[1, 1], [1, -1], [-1, 1], [-1, -1]])


def test_random_coloring_zero_and_determinism():
    zero = Instance(np.zeros((5, 2, 2)))
    _, disc = random_coloring(zero, np.random.default_rng(0))
    assert disc == 0.0
    inst = generate_diagonal_spencer(10, 4, 1)
    a, _ = random_coloring(inst, np.random.default_rng(3))
    b, _ = random_coloring(inst, np.random.default_rng(3))
    np.testing.assert_array_equal(a, b)


def test_random_mean_below_chernoff():
    inst = generate_diagonal_spencer(16, 16, 0)
    mean, _ = random_coloring_stats(inst, 200, np.random.default_rng(1))
    assert mean <= chernoff_bound(concentration_params(inst))


def test_monte_carlo_zero_and_half_normal():
    mean, se = monte_carlo_gaussian_norm(Instance(np.zeros((3, 2, 2))), 50, np.random.default_rng(0))
    assert mean == 0.0 and se == 0.0
    e11 = Instance(np.diag([1.0, 0.0])[None])
    mean, se = monte_carlo_gaussian_norm(e11, 10_000, np.random.default_rng(2))
    assert abs(mean - math.sqrt(2 / math.pi)) <= 3 * se


def test_monte_carlo_threads_do_not_change_result():
    inst = generate_low_rank_random(12, 40, 3, 0)
    a = monte_carlo_gaussian_norm(inst, 3000, np.random.default_rng(9), threads=1)
    b = monte_carlo_gaussian_norm(inst, 3000, np.random.default_rng(9), threads=3)
    assert a == b


def test_monte_carlo_permutation_invariance():
    inst = generate_low_rank_random(12, 6, 2, 3)
    perm = inst.subset(np.random.default_rng(0).permutation(12))
    m1, s1 = monte_carlo_gaussian_norm(inst, 2000, np.random.default_rng(1))
    m2, s2 = monte_carlo_gaussian_norm(perm, 2000, np.random.default_rng(2))
    assert abs(m1 - m2) <= 3 * math.hypot(s1, s2)


def test_brute_force_cases():
    pair = Instance(np.stack([np.diag([1.0, 0.0])] * 2))
    x, v = brute_force_min(pair)
    np.testing.assert_array_equal(x, [1, -1])
    assert v == 0.0
    with pytest.raises(InvalidInputError):
        brute_force_min(Instance(np.zeros((25, 1, 1))))


def test_brute_force_lower_bound_8():
    x, v = brute_force_min(generate_lower_bound(8))
    assert v >= 0.4 * math.sqrt(8)
    assert v == pytest.approx(1.6317714237049896, abs=1e-9)
    assert x[0] == 1


@given(st.integers(1, 7), st.integers(1, 4), st.integers(0, 5000))
@settings(max_examples=25)
def test_brute_force_matches_itertools(n, d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d, d))
    inst = Instance(0.5 * (g + g.transpose(0, 2, 1)))
    best = min(
        np.linalg.norm(np.tensordot(s, inst.matrices, 1), 2)
        for s in itertools.product([1, -1], repeat=n)
    )
    x, v = brute_force_min(inst)
    assert v == pytest.approx(best, abs=1e-9)
    assert inst.discrepancy(x) == pytest.approx(v, abs=1e-12)
    # x and -x are equivalent
    assert inst.discrepancy(-x) == pytest.approx(v, abs=1e-12)


def test_enumeration_threads_and_batches_agree(monkeypatch):
    inst = generate_block_diagonal(11, 6, 2, 4)
    ref = enumerate_min(inst.matrices)
    import specbal.baselines as b

    monkeypatch.setattr(b, "_BATCH_ENTRIES", 36 * 7)
    for threads in (1, 4):
        x, v = enumerate_min(inst.matrices, threads=threads)
        np.testing.assert_array_equal(x, ref[0])
        assert v == ref[1]


@pytest.mark.parametrize(
    "inst",
    [generate_diagonal_spencer(12, 12, 4), generate_lower_bound(10), generate_low_rank_random(12, 8, 2, 1)],
    ids=["diagonal", "lower-bound", "low-rank"],
)
def test_oracle_below_everything(inst):
    _, best = brute_force_min(inst)
    rep = solve(inst, rng=np.random.default_rng(0))
    mean, _ = random_coloring_stats(inst, 200, np.random.default_rng(0))
    assert best <= rep.discrepancy + 1e-9
    assert best <= mean
    assert mean <= chernoff_bound(concentration_params(inst))
