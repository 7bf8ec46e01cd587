import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from alrmimo.linalg import (FlopCounter, RankDeficientError, complexify_vec,
                            dot_flops, flop_scope, householder_flops,
                            matvec_flops, pseudo_inverse, qr_decompose,
                            realify, realify_vec)


def test_qr_identity():
    Q, R = qr_decompose(np.eye(3))
    np.testing.assert_allclose(Q, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(R, np.eye(3), atol=1e-15)


def test_qr_first_diagonal_is_column_norm():
    A = np.array([[3.0, 0.0], [4.0, 1.0]])
    Q, R = qr_decompose(A)
    assert R[0, 0] == pytest.approx(5.0, abs=1e-14)
    # second column (0,1) against q1 = (0.6, 0.8)
    assert R[0, 1] == pytest.approx(0.8, abs=1e-14)
    assert R[1, 1] == pytest.approx(0.6, abs=1e-14)


def test_qr_reconstruction_and_signs(rng):
    for _ in range(20):
        A = rng.standard_normal((6, 6))
        Q, R = qr_decompose(A)
        assert np.linalg.norm(A - Q @ R) <= 1e-12 * np.linalg.norm(A)
        assert np.all(np.diag(R) > 0)
        np.testing.assert_allclose(Q.T @ Q, np.eye(6), atol=1e-12)


def test_qr_complex_positive_real_diagonal(rng):
    A = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    Q, R = qr_decompose(A)
    d = np.diag(R)
    assert np.all(d.real > 0) and np.allclose(d.imag, 0)
    np.testing.assert_allclose(Q @ R, A, atol=1e-12)


def test_qr_rank_deficient():
    A = np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]])
    with pytest.raises(RankDeficientError):
        qr_decompose(A)


def test_pinv_cases(rng):
    np.testing.assert_allclose(pseudo_inverse(np.eye(3)), np.eye(3))
    Q, _ = np.linalg.qr(rng.standard_normal((5, 3)))
    np.testing.assert_allclose(pseudo_inverse(Q), Q.T, atol=1e-12)
    A = rng.standard_normal((6, 4))
    np.testing.assert_allclose(pseudo_inverse(A) @ A, np.eye(4), atol=1e-9)
    np.testing.assert_allclose(pseudo_inverse(A), np.linalg.pinv(A),
                               atol=1e-10)


def test_realify_small_cases():
    np.testing.assert_array_equal(realify(np.array([[1j]])),
                                  [[0.0, -1.0], [1.0, 0.0]])
    np.testing.assert_array_equal(realify(np.eye(2, dtype=complex)), np.eye(4))


def test_realify_homomorphism(rng):
    Hc = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    Gc = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    assert np.max(np.abs(realify(Hc) @ realify_vec(x)
                         - realify_vec(Hc @ x))) <= 1e-14
    np.testing.assert_allclose(realify(Hc @ Gc), realify(Hc) @ realify(Gc),
                               atol=1e-14)
    assert np.linalg.norm(realify_vec(x)) == pytest.approx(np.linalg.norm(x))
    np.testing.assert_array_equal(complexify_vec(realify_vec(x)), x)


def test_flop_conventions():
    fc = FlopCounter()
    fc.add_complex(muls=1)
    assert fc.count == 6
    fc.reset()
    fc.add_complex(adds=1)
    assert fc.count == 2
    assert flop_scope(lambda f: f.add(2)) == 2      # one multiply-add
    for n in (1, 3, 7):
        assert matvec_flops(n, n) == 2 * n * n - n
    assert dot_flops(5) == 9


def test_householder_count_by_hand():
    # per column j with L = n - j: norm and reflector setup 2L + 3, each
    # remaining column 4L. n = m = 4: (11 + 9 + 7 + 5) + (48 + 24 + 8)
    assert householder_flops(4, 4) == 112
    assert householder_flops(4, 4, extra_cols=1) == 112 + 4 * (4 + 3 + 2 + 1)


def test_qr_flops_repeatable(rng):
    A = rng.standard_normal((5, 4))
    assert (flop_scope(lambda f: qr_decompose(A, flops=f))
            == flop_scope(lambda f: qr_decompose(A, flops=f)))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 31))
def test_qr_property(m, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m + 2, m))
    Q, R = qr_decompose(A)
    assert np.allclose(np.tril(R, -1), 0)
    assert np.linalg.norm(A - Q @ R) <= 1e-12 * np.linalg.norm(A)
