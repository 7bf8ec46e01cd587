import itertools
import math

import numpy as np
import pytest

from alrmimo.constellation import Constellation
from alrmimo.lattice import lll_reduce
from alrmimo.oracle import (BoxTooLargeError, BoxTooSmallError,
                            EnumerationBox, closest_vector, lattice_points,
                            shortest_vector, successive_minima,
                            verify_gamma_unique)


def test_shortest_trivial_cases():
    for m in (1, 2, 4):
        _, d, _ = shortest_vector(np.eye(m))
        assert d == pytest.approx(1.0)
    v, d, c = shortest_vector(np.diag([1.0, 5.0]))
    assert d == pytest.approx(1.0)
    assert abs(v[0]) == pytest.approx(1.0) and v[1] == 0


def test_shortest_hand_example():
    # a(2,0) + b(1.1,0.3): b = 2, a = -1 gives (0.2, 0.6), norm sqrt(0.4);
    # b = 1 gives at best (0.9, 0.3) and |b| >= 3 costs at least 0.9 in y
    H = np.array([[2.0, 1.1], [0.0, 0.3]])
    v, d, c = shortest_vector(H, EnumerationBox(bound=5))
    assert d == pytest.approx(math.sqrt(0.4), rel=1e-12)
    assert abs(c[1]) == 2
    first = lll_reduce(H).h_red[:, 0]
    assert np.linalg.norm(first) <= math.sqrt(2) * d * (1 + 1e-9)


def test_box_guards():
    H = np.array([[1.0, 0.0], [0.0, 1e-3]])
    with pytest.raises(BoxTooSmallError):
        lattice_points(H, 1.0, box=EnumerationBox(bound=5))
    with pytest.raises(BoxTooLargeError):
        lattice_points(np.eye(6), 1.0,
                       box=EnumerationBox(bound=30, max_candidates=10 ** 6))


def test_lattice_points_against_naive_grid(rng):
    for _ in range(20):
        H = rng.standard_normal((3, 3))
        t = rng.standard_normal(3)
        radius = 1.5
        c, d2 = lattice_points(H, radius, target=t)
        P = np.linalg.pinv(H)
        B = int(np.ceil(radius * np.linalg.norm(P, axis=1).max()
                        + np.abs(P @ t).max())) + 1
        grid = np.array(list(itertools.product(range(-B, B + 1), repeat=3)))
        dist = np.linalg.norm(grid @ H.T - t, axis=1)
        naive = {tuple(g) for g in grid[dist <= radius]}
        assert {tuple(x) for x in c} == naive
        assert np.all(np.diff(d2) >= 0)


def test_closest_vector_cases():
    H = np.array([[2.0, 1.1], [0.0, 0.3]])
    y = H @ np.array([3, -2])
    p, c = closest_vector(H, y)
    np.testing.assert_allclose(p, y)
    np.testing.assert_array_equal(c, [3, -2])
    p, c = closest_vector(np.eye(2), np.array([0.4, 0.6]))
    np.testing.assert_array_equal(c, [0, 1])


def test_closest_vector_box_matches_brute_force_ml(rng):
    S = Constellation.qam(4)
    points = np.array(list(itertools.product(S.points, repeat=4)), float)
    for _ in range(30):
        H = rng.standard_normal((4, 4))
        y = H @ points[rng.integers(len(points))] + rng.standard_normal(4)
        best = points[np.argmin(np.linalg.norm(points @ H.T - y, axis=1))]
        z = S.index_system(H, y)
        _, c = closest_vector(H, z, lo=0, hi=1)
        np.testing.assert_array_equal(S.from_index(c), best)


def test_successive_minima_cases(rng):
    np.testing.assert_allclose(successive_minima(np.eye(3)), [1, 1, 1])
    np.testing.assert_allclose(successive_minima(np.diag([1.0, 3.0])), [1, 3])
    for _ in range(1000):
        H = rng.standard_normal((3, 3))
        lam = successive_minima(H, 1)
        assert lam[0] == pytest.approx(shortest_vector(H)[1], rel=1e-12)
    with pytest.raises(ValueError):
        successive_minima(np.eye(2), 3)


def test_gamma_unique_cases():
    assert verify_gamma_unique(np.diag([1.0, 10.0]), [1.0, 0.0], 5.0)
    assert not verify_gamma_unique(np.eye(2), [1.0, 0.0], 1.5)
    with pytest.raises(ValueError):
        verify_gamma_unique(np.eye(2), [0.5, 0.0], 2.0)
