import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specbal.concentration import concentration_params, gram_matrix, sigma_param, v_param
from specbal.instance import Instance, generate_diagonal_spencer, generate_low_rank_random
from specbal.linalg import EigenDecomposition, SubspaceBasis, full_space
from specbal.concentration import GramMatrix
from specbal.subspace import (
    bad_subspace,
    covariance_directions,
    restricted_sigma_param,
    restricted_v_param,
)


def random_instance(seed, n, d):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d, d))
    return Instance(0.5 * (g + g.transpose(0, 2, 1)))


def test_identity_gram_keeps_everything():
    g = GramMatrix(np.eye(5), EigenDecomposition(np.ones(5), np.eye(5)))
    b = bad_subspace(g, 2.0)
    assert b.constraint_count == 0 and b.dim == 5


def test_duplicate_pair():
    a = np.diag([1.0, -0.5, 0.25])
    inst = Instance(np.stack([a, a]))
    gsq = float(np.sum(a * a))
    b = bad_subspace(gram_matrix(inst), 1.5 * gsq)
    assert b.constraint_count == 1 and b.dim == 1
    v = b.basis[:, 0]
    assert abs(abs(v @ np.array([1.0, -1.0]) / math.sqrt(2)) - 1) < 1e-12


def test_boundary_counts_as_not_exceeding():
    inst = Instance(np.stack([np.eye(2), np.zeros((2, 2))]))
    g = gram_matrix(inst)  # eigenvalues 2 and 0
    assert bad_subspace(g, 2.0).constraint_count == 0
    assert bad_subspace(g, 2.0 - 1e-12).constraint_count == 0
    assert bad_subspace(g, 1.9).constraint_count == 1


def test_subspace_kills_covariance_top_directions():
    # explicit covariance eigenvectors, reshaped to matrices, as the oracle
    inst = random_instance(3, 7, 3)
    flat = inst.flat
    cov = sum(np.outer(v, v) for v in flat)
    w, q = np.linalg.eigh(cov)
    w, q = w[::-1], q[:, ::-1]
    delta_sq = 0.5 * (w[1] + w[2])
    b = bad_subspace(gram_matrix(inst), delta_sq)
    assert b.constraint_count == 2
    vs = q[:, :2].T.reshape(2, 3, 3)
    rng = np.random.default_rng(0)
    for _ in range(20):
        y = b.basis @ rng.standard_normal(b.dim)
        ysum = inst.signed_sum(y)
        for v in vs:
            assert abs(np.trace(ysum @ v)) <= 1e-8
    # the package's own V_j span the same space
    vj = covariance_directions(inst, gram_matrix(inst), 2).reshape(2, -1)
    proj = q[:, :2] @ (q[:, :2].T @ vj.T)
    np.testing.assert_allclose(proj, vj.T, atol=1e-10)


def test_trace_identity_for_covariance_directions():
    inst = random_instance(5, 6, 4)
    g = gram_matrix(inst)
    vj = covariance_directions(inst, g, 3)
    lam = g.eigen.eigenvalues[:3]
    u = g.eigen.eigenvectors[:, :3]
    for j in range(3):
        traces = np.array([np.trace(a @ vj[j]) for a in inst.matrices])
        np.testing.assert_allclose(traces, math.sqrt(lam[j]) * u[:, j], atol=1e-10)
        assert np.linalg.norm(vj[j]) == pytest.approx(1.0)


def test_restricted_v_endpoints():
    inst = generate_low_rank_random(12, 6, 2, 1)
    assert restricted_v_param(inst, full_space(12)) == pytest.approx(v_param(inst), rel=1e-10)
    empty = SubspaceBasis(12, np.zeros((12, 0)), np.eye(12), 12)
    assert restricted_v_param(inst, empty) == 0.0
    assert restricted_sigma_param(inst, empty) == 0.0


@given(st.integers(2, 20), st.integers(1, 8), st.integers(0, 10_000), st.floats(0.05, 0.9))
@settings(max_examples=30)
def test_contraction_properties(n, d, seed, delta):
    inst = random_instance(seed, n, d)
    p = concentration_params(inst)
    delta_sq = p.f**2 / delta
    b = bad_subspace(gram_matrix(inst), delta_sq)
    assert restricted_v_param(inst, b) <= math.sqrt(delta_sq) * (1 + 1e-8)
    assert restricted_sigma_param(inst, b) <= sigma_param(inst) * (1 + 1e-8)
    assert b.dim >= n - math.ceil(p.frobenius_budget / delta_sq)
    assert np.linalg.norm(b.basis.T @ b.basis - np.eye(b.dim)) <= 1e-8


def test_diagonal_instances_contract():
    inst = generate_diagonal_spencer(24, 12, 4)
    p = concentration_params(inst)
    b = bad_subspace(gram_matrix(inst), p.f**2 / 0.375)
    assert restricted_v_param(inst, b) <= p.f / math.sqrt(0.375) + 1e-8
