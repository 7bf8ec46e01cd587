"""
Exponential-time exact lattice oracles: shortest and closest vectors,
successive minima and gamma-uniqueness.

Lattice points are enumerated over integer coefficient boxes. For a target
``t`` and radius ``R`` every coefficient vector with ``||Hc - t|| <= R``
satisfies ``|c_i - (H^+ t)_i| <= R ||row_i(H^+)||``, which makes the box
rigorous. The last coordinate is enumerated first and the remaining box is
re-centred for each of its values, so bases with one very long or nearly
dependent column (such as augmented bases) stay cheap.

Before enumerating, the basis is shortened with a greedy pairwise
reduction of its own (independent of :mod:`alrmimo.lattice`); the
coefficients reported are always with respect to the caller's basis.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernels as K

__all__ = [
    "EnumerationBox",
    "BoxTooSmallError",
    "BoxTooLargeError",
    "lattice_points",
    "shortest_vector",
    "closest_vector",
    "successive_minima",
    "verify_gamma_unique",
    "MAX_CANDIDATES",
]

MAX_CANDIDATES = 10 ** 8
_REL_TOL = 1e-9


class BoxTooSmallError(ValueError):
    """The coefficient box cannot contain every point of the requested ball."""


class BoxTooLargeError(ValueError):
    """Enumeration would exceed the candidate budget."""


@dataclass(frozen=True)
class EnumerationBox:
    """Either a fixed coefficient bound ``|c_i| <= bound`` or a search radius.

    With ``bound`` set, the enumeration runs over ``[-bound, bound]^m`` and
    raises :class:`BoxTooSmallError` if that cannot cover the ball it is
    asked to search.
    """

    bound: Optional[int] = None
    radius: Optional[float] = None
    max_candidates: int = MAX_CANDIDATES


def _pairwise_reduce(H: np.ndarray, max_rounds: int = 200):
    """Shorten columns by subtracting integer multiples of one another.

    Returns (H @ U, U); U is a product of elementary integer column
    operations, hence unimodular.
    """
    B = H.astype(float).copy()
    m = B.shape[1]
    U = np.eye(m, dtype=np.int64)
    for _ in range(max_rounds):
        changed = False
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                nj = B[:, j] @ B[:, j]
                r = np.rint((B[:, i] @ B[:, j]) / nj)
                if r != 0:
                    cand = B[:, i] - r * B[:, j]
                    if cand @ cand < B[:, i] @ B[:, i] * (1 - 1e-12):
                        B[:, i] = cand
                        U[:, i] -= np.int64(r) * U[:, j]
                        changed = True
        if not changed:
            break
    return B, U


def _required_bounds(P: np.ndarray, center: np.ndarray, radius: float):
    width = radius * np.linalg.norm(P, axis=1) * (1 + _REL_TOL) + 1e-9
    lo = np.ceil(center - width).astype(np.int64)
    hi = np.floor(center + width).astype(np.int64)
    return lo, hi


def lattice_points(H, radius: float, target=None,
                   box: Optional[EnumerationBox] = None
                   ) -> Tuple[np.ndarray, np.ndarray]:
    """All ``c in Z^m`` with ``||H c - target|| <= radius``.

    Returns (coefficients of shape ``(k, m)``, squared distances), sorted by
    distance.
    """
    H = np.asarray(H, dtype=float)
    n, m = H.shape
    target = np.zeros(n) if target is None else np.asarray(target, float)
    max_cand = box.max_candidates if box is not None else MAX_CANDIDATES
    r2 = radius * radius * (1 + 2 * _REL_TOL) + 1e-300

    if box is not None and box.bound is not None:
        B = int(box.bound)
        P = np.linalg.pinv(H)
        lo_req, hi_req = _required_bounds(P, P @ target, radius)
        if lo_req.min() < -B or hi_req.max() > B:
            raise BoxTooSmallError(
                f"bound {B} too small; need {max(-lo_req.min(), hi_req.max())}")
        if (2 * B + 1) ** m > max_cand:
            raise BoxTooLargeError(f"(2*{B}+1)^{m} candidates")
        lo = np.full(m, -B, dtype=np.int64)
        hi = np.full(m, B, dtype=np.int64)
        return _run(H, target, [(lo, hi)], r2, max_cand)

    Hr, U = _pairwise_reduce(H)
    P = np.linalg.pinv(Hr)
    lo_m, hi_m = _required_bounds(P[-1:], P[-1:] @ target, radius)
    boxes = []
    total = 0
    if m == 1:
        boxes.append((lo_m, hi_m))
        total = int(hi_m[0] - lo_m[0] + 1)
    else:
        Pp = np.linalg.pinv(Hr[:, :-1])
        for cm in range(int(lo_m[0]), int(hi_m[0]) + 1):
            tp = target - cm * Hr[:, -1]
            lo, hi = _required_bounds(Pp, Pp @ tp, radius)
            if np.any(hi < lo):
                continue
            total += int(np.prod((hi - lo + 1).astype(float)))
            if total > max_cand:
                raise BoxTooLargeError(
                    f"more than {max_cand} candidates needed")
            boxes.append((np.append(lo, cm), np.append(hi, cm)))
    coeffs, d2 = _run(Hr, target, boxes, r2, max_cand)
    return coeffs @ U.T, d2


def _run(H, target, boxes, r2, max_cand):
    outs, norms = [], []
    for lo, hi in boxes:
        cnt = int(np.prod((hi - lo + 1).astype(float)))
        if cnt <= 0:
            continue
        c, d2, _, truncated = K.enumerate_box(H, target, lo, hi, r2,
                                              min(cnt, max_cand))
        if truncated:
            raise BoxTooLargeError("output buffer exhausted")
        outs.append(c)
        norms.append(d2)
    if not outs:
        return np.zeros((0, H.shape[1]), dtype=np.int64), np.zeros(0)
    c = np.concatenate(outs)
    d2 = np.concatenate(norms)
    order = np.argsort(d2, kind="stable")
    return c[order], d2[order]


def shortest_vector(H, box: Optional[EnumerationBox] = None):
    """Exact shortest nonzero vector of ``L(H)``.

    Returns (vector, d_H, coefficients).
    """
    H = np.asarray(H, dtype=float)
    radius = box.radius if box is not None and box.radius else None
    if radius is None:
        Hr, _ = _pairwise_reduce(H)
        radius = float(np.min(np.linalg.norm(Hr, axis=0)))
    coeffs, d2 = lattice_points(H, radius, box=box)
    nz = np.any(coeffs != 0, axis=1)
    if not np.any(nz):
        raise BoxTooSmallError("no nonzero lattice vector within the radius")
    c = coeffs[nz][0]
    v = H @ c
    return v, float(np.linalg.norm(v)), c


def closest_vector(H, y, box: Optional[EnumerationBox] = None,
                   lo=None, hi=None):
    """Lattice point of ``L(H)`` closest to ``y``.

    With ``lo``/``hi`` the coefficients are restricted to that box and the
    search is exhaustive over it. Returns (point, coefficients).
    """
    H = np.asarray(H, dtype=float)
    y = np.asarray(y, dtype=float)
    m = H.shape[1]
    if lo is not None or hi is not None:
        lo = np.broadcast_to(np.asarray(lo, dtype=np.int64), (m,)).copy()
        hi = np.broadcast_to(np.asarray(hi, dtype=np.int64), (m,)).copy()
        count = int(np.prod((hi - lo + 1).astype(float)))
        max_cand = box.max_candidates if box is not None else MAX_CANDIDATES
        if count > max_cand:
            raise BoxTooLargeError(f"{count} candidates")
        c, d2 = _run(H, y, [(lo, hi)], np.inf, count)
        return H @ c[0], c[0]
    if box is not None and box.radius:
        radius = box.radius
    else:
        c0 = np.rint(np.linalg.pinv(H) @ y)
        radius = float(np.linalg.norm(H @ c0 - y))
    coeffs, d2 = lattice_points(H, radius, target=y, box=box)
    if coeffs.shape[0] == 0:
        raise BoxTooSmallError("no lattice point within the radius")
    return H @ coeffs[0], coeffs[0]


def successive_minima(H, i: Optional[int] = None,
                      box: Optional[EnumerationBox] = None) -> np.ndarray:
    """``lambda_1, ..., lambda_i`` by enumeration and greedy independent
    selection in order of increasing norm."""
    H = np.asarray(H, dtype=float)
    m = H.shape[1]
    i = m if i is None else i
    if not 1 <= i <= m:
        raise ValueError("need 1 <= i <= m")
    Hr, _ = _pairwise_reduce(H)
    # the i shortest columns are independent, so lambda_i is at most
    # the i-th smallest column norm
    radius = float(np.sort(np.linalg.norm(Hr, axis=0))[i - 1])
    coeffs, d2 = lattice_points(H, radius, box=box)
    chosen = []
    lambdas = []
    for c, d in zip(coeffs, d2):
        if not np.any(c):
            continue
        trial = np.array(chosen + [c], dtype=float)
        if np.linalg.matrix_rank(trial) == len(chosen) + 1:
            chosen.append(c)
            lambdas.append(math.sqrt(d))
            if len(chosen) == i:
                break
    return np.array(lambdas)


def _dependent(a: np.ndarray, b: np.ndarray) -> bool:
    """Integer vectors are linearly dependent iff all 2x2 minors vanish."""
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    m = len(a)
    return all(a[p] * b[q] == a[q] * b[p]
               for p in range(m) for q in range(p + 1, m))


def verify_gamma_unique(H, v, gamma: float,
                        box: Optional[EnumerationBox] = None) -> bool:
    """True iff every lattice vector of norm at most ``gamma * ||v||`` is
    linearly dependent with ``v``."""
    H = np.asarray(H, dtype=float)
    v = np.asarray(v, dtype=float)
    cv = np.rint(np.linalg.lstsq(H, v, rcond=None)[0]).astype(np.int64)
    if not np.allclose(H @ cv, v, rtol=1e-9,
                       atol=1e-9 * max(1.0, np.linalg.norm(v))):
        raise ValueError("v is not a lattice vector of H")
    radius = gamma * float(np.linalg.norm(v))
    coeffs, _ = lattice_points(H, radius, box=box)
    return all(_dependent(c, cv) for c in coeffs if np.any(c))
