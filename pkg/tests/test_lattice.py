import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from alrmimo.channel import complex_gaussian
from alrmimo.lattice import (LLLError, alpha, complex_lll_reduce, gso,
                             integer_det, is_lll_reduced, is_unimodular,
                             iteration_bound, lll_reduce, size_reduce)
from alrmimo.linalg import RankDeficientError, realify
from alrmimo.oracle import lattice_points, shortest_vector


def _point_set(H, radius):
    c, _ = lattice_points(H, radius)
    pts = np.round(c @ np.asarray(H, float).T, 9) + 0.0
    return {tuple(p) for p in pts}


def test_alpha_at_three_quarters():
    assert alpha(0.75) == 2.0


def test_gso_identity_and_hand_case():
    s = gso(np.eye(2))
    np.testing.assert_array_equal(s.gs_vectors, np.eye(2))
    assert s.mu[1, 0] == 0
    s = gso(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert s.mu[1, 0] == 1.0
    np.testing.assert_allclose(s.gs_vectors[:, 1], [0.0, 1.0])
    np.testing.assert_allclose(s.reconstruct(), [[1, 1], [0, 1]])


def test_gso_orthogonality(rng):
    s = gso(rng.standard_normal((8, 8)))
    G = s.gs_vectors
    n = np.linalg.norm(G, axis=0)
    C = (G.T @ G) / np.outer(n, n)
    assert np.max(np.abs(C - np.diag(np.diag(C)))) <= 1e-10


def test_size_reduce_guard_and_hand_case():
    B = np.array([[1.0, 0.3], [0.0, 1.0]])
    s = gso(B)
    U = np.eye(2, dtype=np.int64)
    assert size_reduce(s, B, U, 1, 0) == 0.0
    np.testing.assert_array_equal(B, [[1.0, 0.3], [0.0, 1.0]])

    B = np.array([[1.0, 1.0], [0.0, 1.0]])
    s = gso(B)
    U = np.eye(2, dtype=np.int64)
    gs_before = s.gs_vectors.copy()
    assert size_reduce(s, B, U, 1, 0) == 1.0
    np.testing.assert_array_equal(B[:, 1], [0.0, 1.0])
    assert s.mu[1, 0] == 0.0
    np.testing.assert_array_equal(U, [[1, -1], [0, 1]])
    np.testing.assert_array_equal(s.gs_vectors, gs_before)


def test_size_reduce_preserves_lattice(rng):
    H = rng.standard_normal((3, 3))
    H[:, 2] = H[:, 2] + 2.7 * H[:, 0]
    B = H.copy()
    s = gso(B)
    U = np.eye(3, dtype=np.int64)
    size_reduce(s, B, U, 2, 0)
    assert abs(s.mu[2, 0]) <= 0.5
    np.testing.assert_allclose(H @ U, B, atol=1e-12)
    assert _point_set(H, 3.0) == _point_set(B, 3.0)


def test_identity_needs_no_swaps():
    for m in (1, 2, 5):
        r = lll_reduce(np.eye(m))
        assert r.swaps == 0
        assert r.iterations == m - 1
        np.testing.assert_array_equal(r.u, np.eye(m))


def test_nearly_dependent_pair():
    H = np.array([[1.0, 0.99], [0.0, 0.01]])
    r = lll_reduce(H)
    # shortest vector is +-(h2 - h1) = (-0.01, 0.01)
    d_h = 0.01 * math.sqrt(2)
    _, d_oracle, _ = shortest_vector(H)
    assert d_oracle == pytest.approx(d_h, rel=1e-9)
    assert np.linalg.norm(r.h_red[:, 0]) <= 2 ** 0.5 * d_h * (1 + 1e-9)
    assert is_lll_reduced(r.h_red)
    assert abs(integer_det(r.u)) == 1


def test_random_4x4_reduced_and_unimodular(rng):
    for _ in range(100):
        H = rng.standard_normal((4, 4))
        r = lll_reduce(H)
        assert is_lll_reduced(r.h_red)
        assert abs(integer_det(r.u)) == 1
        np.testing.assert_allclose(H @ r.u, r.h_red, rtol=0,
                                   atol=1e-9 * np.abs(r.h_red).max())
        assert r.a >= r.a_input * (1 - 1e-12)


def test_is_lll_reduced_cases():
    assert is_lll_reduced(np.eye(3))
    rep = is_lll_reduced(np.array([[1.0, 0.6], [0.0, 0.1]]))
    assert not rep
    assert rep.violations


def test_lovasz_violation_detected():
    # size reduced (mu = 0) but the second GS vector is much shorter
    assert not is_lll_reduced(np.diag([1.0, 0.1]))
    assert is_lll_reduced(np.diag([0.1, 1.0]))


def test_iteration_bound_examples():
    assert iteration_bound(1.3, 1.3, 5, 0.75) == 5
    assert iteration_bound(1.0, 4.0, 2, 0.75) == pytest.approx(40.55, abs=5e-3)


def test_iteration_count_within_bound(rng):
    for _ in range(500):
        m = int(rng.integers(2, 9))
        r = lll_reduce(rng.standard_normal((m, m)))
        assert r.iterations <= iteration_bound(r.a_input, r.big_a_input, m)


def test_lattice_preserved_up_to_twice_dh(rng):
    for m in (2, 3, 4):
        H = rng.standard_normal((m, m))
        r = lll_reduce(H)
        _, d, _ = shortest_vector(H)
        assert _point_set(H, 2 * d) == _point_set(r.h_red, 2 * d)


def test_integer_det_exact():
    assert integer_det([[2, 1], [1, 1]]) == 1
    assert integer_det([[0, 1], [1, 0]]) == -1
    assert integer_det([[2, 0], [0, 3]]) == 6
    big = [[10 ** 12 + 1, 10 ** 12], [10 ** 12, 10 ** 12 - 1]]
    assert integer_det(big) == -1
    assert is_unimodular(np.array([[1, 5], [0, 1]]))
    assert not is_unimodular(np.array([[2, 0], [0, 1]]))


def test_errors():
    with pytest.raises(RankDeficientError):
        lll_reduce(np.array([[1.0, 2.0], [1.0, 2.0]]))
    with pytest.raises(ValueError):
        lll_reduce(np.eye(2), delta=0.2)
    with pytest.raises(TypeError):
        lll_reduce(np.eye(2, dtype=complex))
    assert issubclass(LLLError, RuntimeError)


def test_complex_identity_unchanged():
    r = complex_lll_reduce(np.eye(3, dtype=complex))
    np.testing.assert_array_equal(r.h_red, np.eye(3))
    assert r.swaps == 0


def test_complex_reduction_properties(rng):
    for _ in range(50):
        hc = complex_gaussian(rng, (3, 3))
        r = complex_lll_reduce(hc)
        assert np.all(np.abs(r.mu[np.tril_indices(3, -1)].real) <= 0.5 + 1e-9)
        assert np.all(np.abs(r.mu[np.tril_indices(3, -1)].imag) <= 0.5 + 1e-9)
        assert is_lll_reduced(r.h_red)
        assert is_unimodular(r.u)
        np.testing.assert_allclose(hc @ r.u, r.h_red, atol=1e-9)


def test_complex_reduction_same_real_lattice(rng):
    for _ in range(5):
        hc = complex_gaussian(rng, (2, 2))
        r = complex_lll_reduce(hc)
        H = realify(hc)
        _, d, _ = shortest_vector(H)
        assert _point_set(H, 2 * d) == _point_set(realify(r.h_red), 2 * d)


def test_complex_flop_ratio(rng):
    ratios = []
    for N in (3, 4, 5):
        fc = fr = 0
        for _ in range(300):
            hc = complex_gaussian(rng, (N, N))
            fc += complex_lll_reduce(hc).flops
            fr += lll_reduce(realify(hc)).flops
        ratios.append(fc / fr)
    assert 0.45 <= np.mean(ratios) <= 0.75


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2 ** 32 - 1),
       st.sampled_from([0.3, 0.5, 0.75, 0.99]))
def test_lll_property(m, seed, delta):
    H = np.random.default_rng(seed).standard_normal((m, m))
    r = lll_reduce(H, delta=delta)
    assert is_lll_reduced(r.h_red, delta=delta)
    assert abs(integer_det(r.u)) == 1
    assert r.iterations <= iteration_bound(r.a_input, r.big_a_input, m, delta)
